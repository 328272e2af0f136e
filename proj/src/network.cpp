#include "pidkit/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "pidkit/error.hpp"
#include "pidkit/parallel.hpp"

namespace pidkit {

namespace {

constexpr std::size_t kRowsPerShard = 4096;

std::pair<std::size_t, std::size_t> ordered(std::size_t i, std::size_t j) {
  return i < j ? std::pair{i, j} : std::pair{j, i};
}

void check_topology(std::size_t n_nodes, std::span<const SignedEdge> edges) {
  if (n_nodes == 0) throw Error(ErrorCode::InvalidArgument, "network needs at least one node");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw Error(ErrorCode::InvalidArgument, "edge (" + std::to_string(e.i) + ", " +
                                                  std::to_string(e.j) + ") references a missing node");
    }
    if (e.i == e.j) {
      throw Error(ErrorCode::InvalidArgument, "self-loop at node " + std::to_string(e.i));
    }
    if (e.sign != 1 && e.sign != -1) {
      throw Error(ErrorCode::InvalidArgument, "edge sign must be +1 or -1");
    }
    if (!seen.insert(ordered(e.i, e.j)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate edge (" + std::to_string(e.i) + ", " +
                                                  std::to_string(e.j) + ")");
    }
  }
}

Eigen::MatrixXd signed_adjacency(std::size_t n_nodes, std::span<const SignedEdge> edges) {
  const auto n = static_cast<Eigen::Index>(n_nodes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    s(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.sign;
    s(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.sign;
  }
  return s;
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double max_admissible_rho(std::size_t n_nodes, std::span<const SignedEdge> edges) {
  check_topology(n_nodes, edges);
  if (edges.empty()) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(signed_adjacency(n_nodes, edges),
                                                     Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd build_covariance(std::size_t n_nodes, std::span<const SignedEdge> edges,
                                 double rho) {
  check_topology(n_nodes, edges);
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "network correlation requires 0 < rho < 1");
  }
  const auto n = static_cast<Eigen::Index>(n_nodes);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n) + rho * signed_adjacency(n_nodes, edges);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmin > kPdEigenFloor)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "covariance is not positive definite at rho = " + format_double(rho) +
                    " (smallest eigenvalue " + format_double(lmin) +
                    "); this topology admits rho < " +
                    format_double(max_admissible_rho(n_nodes, edges)));
  }
  return cov;
}

InteractionNetwork::InteractionNetwork(std::size_t n_nodes, std::vector<SignedEdge> edges,
                                       double rho, std::vector<Interaction> interactions,
                                       NfbiKernel kernel, std::vector<MixedTerm> mixed_terms)
    : n_nodes_(n_nodes),
      edges_(std::move(edges)),
      rho_(rho),
      interactions_(std::move(interactions)),
      kernel_(kernel),
      mixed_terms_(std::move(mixed_terms)) {
  covariance_ = build_covariance(n_nodes_, edges_, rho_);

  std::set<std::pair<std::size_t, std::size_t>> edge_set;
  degree_.assign(n_nodes_, 0);
  for (const auto& e : edges_) {
    edge_set.insert(ordered(e.i, e.j));
    ++degree_[e.i];
    ++degree_[e.j];
  }
  for (const auto& in : interactions_) {
    if (!edge_set.count(ordered(in.x_node, in.y_node))) {
      throw Error(ErrorCode::InvalidArgument, "interaction (" + std::to_string(in.x_node) + ", " +
                                                  std::to_string(in.y_node) + ") is not an edge");
    }
  }
  for (const auto& m : mixed_terms_) {
    if (m.node >= n_nodes_) {
      throw Error(ErrorCode::InvalidArgument,
                  "mixed term references missing node " + std::to_string(m.node));
    }
    if (!std::isfinite(m.beta)) throw Error(ErrorCode::InvalidArgument, "mixed term beta must be finite");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  }
  chol_ = llt.matrixL();
}

double InteractionNetwork::response(std::span<const double> row) const {
  double t = 0.0;
  for (const auto& in : interactions_) t += kernel_.eval(row[in.x_node], row[in.y_node]);
  for (const auto& m : mixed_terms_) t += m.beta * row[m.node];
  return t;
}

bool InteractionNetwork::is_interaction_pair(std::size_t i, std::size_t j) const {
  const auto key = ordered(i, j);
  return std::any_of(interactions_.begin(), interactions_.end(), [&](const Interaction& in) {
    return ordered(in.x_node, in.y_node) == key;
  });
}

bool InteractionNetwork::has_edge(std::size_t i, std::size_t j) const {
  const auto key = ordered(i, j);
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const SignedEdge& e) { return ordered(e.i, e.j) == key; });
}

std::size_t InteractionNetwork::degree(std::size_t node) const { return degree_.at(node); }

SampleBatch sample(const InteractionNetwork& network, std::size_t n, std::uint64_t seed,
                   unsigned workers) {
  SampleBatch batch;
  batch.n_samples = n;
  batch.n_nodes = network.n_nodes();
  batch.seed = seed;
  batch.predictors.assign(n * batch.n_nodes, 0.0);
  batch.response.assign(n, 0.0);

  const auto d = static_cast<Eigen::Index>(batch.n_nodes);
  const Eigen::MatrixXd& l = network.cholesky_factor();
  const std::size_t shards = (n + kRowsPerShard - 1) / kRowsPerShard;
  parallel_for(shards, workers, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, {s}));
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(d);
    const std::size_t end = std::min(n, (s + 1) * kRowsPerShard);
    for (std::size_t k = s * kRowsPerShard; k < end; ++k) {
      for (Eigen::Index i = 0; i < d; ++i) z(i) = normal(rng);
      Eigen::Map<Eigen::VectorXd> x(batch.predictors.data() + k * batch.n_nodes, d);
      x.noalias() = l.triangularView<Eigen::Lower>() * z;
      batch.response[k] = network.response(batch.row(k));
    }
  });
  return batch;
}

namespace {

std::vector<SignedEdge> star_edges(std::size_t hub, std::size_t first_spoke, std::size_t spokes) {
  std::vector<SignedEdge> edges;
  for (std::size_t s = 0; s < spokes; ++s) edges.push_back({first_spoke + s, hub, 1});
  return edges;
}

}  // namespace

InteractionNetwork network_a(double alpha, double rho) {
  std::vector<SignedEdge> edges;
  for (std::size_t star = 0; star < 5; ++star) {
    const auto part = star_edges(5 * star, 5 * star + 1, 4);
    edges.insert(edges.end(), part.begin(), part.end());
  }
  std::vector<Interaction> interactions;
  for (std::size_t i = 1; i <= 4; ++i) interactions.push_back({i, 0});
  return InteractionNetwork(kStandardNetworkNodes, std::move(edges), rho, std::move(interactions),
                            NfbiKernel::sigmoidal(alpha));
}

InteractionNetwork network_b(double alpha, double beta, std::size_t k, double rho) {
  if (k < 1 || k > 10) throw Error(ErrorCode::InvalidArgument, "network B requires 1 <= k <= 10");
  auto edges = star_edges(kNetworkBHub1, kNetworkBHub1 + 1, 10);
  const auto second = star_edges(kNetworkBHub2, kNetworkBHub2 + 1, 10);
  edges.insert(edges.end(), second.begin(), second.end());
  std::vector<Interaction> interactions;
  for (std::size_t i = 1; i <= k; ++i) interactions.push_back({kNetworkBHub1 + i, kNetworkBHub1});
  return InteractionNetwork(kStandardNetworkNodes, std::move(edges), rho, std::move(interactions),
                            NfbiKernel::sigmoidal(alpha), {{kNetworkBHub2, beta}});
}

TaylorCoefficients taylor_coefficients(double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  const double up = logistic(alpha);
  const double down = logistic(-alpha);
  TaylorCoefficients c;
  c.dy_f = 4.0 * down;
  c.dxy_f = up * down;
  c.norm = std::abs(c.dy_f) + 4.0 * std::abs(c.dxy_f);
  // Ratios in closed form; direct division underflows for large alpha.
  c.normalized_dy = 1.0 / (1.0 + up);
  c.normalized_dxy = up / (4.0 * (1.0 + up));
  return c;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_field(std::istringstream& in, std::size_t line, const char* what) {
  std::string tok;
  if (!(in >> tok)) parse_fail(line, std::string("missing ") + what);
  T v{};
  const char* end = tok.data() + tok.size();
  auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) parse_fail(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

}  // namespace

InteractionNetwork parse_network_spec(std::string_view text) {
  std::optional<std::size_t> nodes;
  double rho = kDefaultNetworkRho;
  std::optional<NfbiKernel> kernel;
  std::vector<SignedEdge> edges;
  std::vector<Interaction> interactions;
  std::vector<MixedTerm> mixed;

  std::istringstream stream{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream in(raw);
    std::string key;
    if (!(in >> key)) continue;
    if (key == "nodes") {
      nodes = parse_field<std::size_t>(in, line_no, "node count");
    } else if (key == "rho") {
      rho = parse_field<double>(in, line_no, "rho");
    } else if (key == "kernel") {
      std::string spec;
      if (!(in >> spec)) parse_fail(line_no, "missing kernel spec");
      try {
        kernel = NfbiKernel::parse(spec);
      } catch (const Error& e) {
        parse_fail(line_no, e.what());
      }
    } else if (key == "edge") {
      SignedEdge e;
      e.i = parse_field<std::size_t>(in, line_no, "node index");
      e.j = parse_field<std::size_t>(in, line_no, "node index");
      std::string sign;
      if (in >> sign) {
        if (sign == "+" || sign == "+1" || sign == "1") {
          e.sign = 1;
        } else if (sign == "-" || sign == "-1") {
          e.sign = -1;
        } else {
          parse_fail(line_no, "bad edge sign '" + sign + "'");
        }
      }
      edges.push_back(e);
    } else if (key == "interaction") {
      Interaction in_pair;
      in_pair.x_node = parse_field<std::size_t>(in, line_no, "node index");
      in_pair.y_node = parse_field<std::size_t>(in, line_no, "node index");
      interactions.push_back(in_pair);
    } else if (key == "mixed") {
      MixedTerm m;
      m.node = parse_field<std::size_t>(in, line_no, "node index");
      m.beta = parse_field<double>(in, line_no, "beta");
      mixed.push_back(m);
    } else {
      parse_fail(line_no, "unknown key '" + key + "'");
    }
    std::string extra;
    if (in >> extra) parse_fail(line_no, "unexpected trailing token '" + extra + "'");
  }
  if (!nodes) throw Error(ErrorCode::Parse, "network spec lacks a 'nodes' line");
  if (!kernel && !interactions.empty()) {
    throw Error(ErrorCode::Parse, "network spec has interactions but no 'kernel' line");
  }
  return InteractionNetwork(*nodes, std::move(edges), rho, std::move(interactions),
                            kernel.value_or(NfbiKernel::symmetric_sum()), std::move(mixed));
}

InteractionNetwork load_network_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open network spec '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_spec(buf.str());
}

}  // namespace pidkit
