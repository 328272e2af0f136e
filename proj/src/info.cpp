#include "pidkit/info.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>
#include <sstream>
#include <numeric>
#include <set>

#include "pidkit/error.hpp"

namespace pidkit {

namespace {

void check_alphabet(const std::vector<std::string>& alphabet, const char* what) {
  if (alphabet.empty()) {
    throw Error(ErrorCode::Validity, std::string(what) + " alphabet is empty");
  }
  std::set<std::string_view> seen;
  for (const auto& s : alphabet) {
    if (!seen.insert(s).second) {
      throw Error(ErrorCode::Alphabet,
                  std::string(what) + " alphabet repeats symbol '" + s + "'");
    }
  }
}

// Rejects negative or non-finite cells and totals outside the renormalization
// band; otherwise rescales so the table sums to one.
void normalize_table(std::vector<double>& table) {
  double total = 0.0;
  for (double p : table) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::Validity, "probabilities must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    throw Error(ErrorCode::Validity,
                "probabilities sum to " + format_double(total) + ", expected 1");
  }
  if (total != 1.0) {
    for (double& p : table) p /= total;
  }
}

double plogp_sum(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

std::vector<std::string> index_alphabet(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// DiscreteDist

DiscreteDist::DiscreteDist(std::vector<std::string> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.size() != probs_.size()) {
    throw Error(ErrorCode::Validity, "support and probability lengths differ");
  }
  check_alphabet(support_, "distribution");
  normalize_table(probs_);
}

DiscreteDist DiscreteDist::uniform(std::size_t n) {
  return DiscreteDist(index_alphabet(n), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteDist DiscreteDist::from_probs(std::vector<double> probs) {
  auto support = index_alphabet(probs.size());
  return DiscreteDist(std::move(support), std::move(probs));
}

std::size_t DiscreteDist::index_of(std::string_view symbol) const {
  auto it = std::find(support_.begin(), support_.end(), symbol);
  if (it == support_.end()) {
    throw Error(ErrorCode::Alphabet, "symbol '" + std::string(symbol) + "' not in support");
  }
  return static_cast<std::size_t>(it - support_.begin());
}

// ---------------------------------------------------------------------------
// DiscreteJoint2

DiscreteJoint2::DiscreteJoint2(std::vector<std::string> alphabet_x,
                               std::vector<std::string> alphabet_y,
                               std::vector<double> table)
    : alphabet_x_(std::move(alphabet_x)),
      alphabet_y_(std::move(alphabet_y)),
      table_(std::move(table)) {
  check_alphabet(alphabet_x_, "x");
  check_alphabet(alphabet_y_, "y");
  if (table_.size() != nx() * ny()) {
    throw Error(ErrorCode::Validity, "joint table size does not match alphabets");
  }
  normalize_table(table_);
}

DiscreteJoint2 DiscreteJoint2::from_table(std::size_t nx, std::size_t ny,
                                          std::vector<double> table) {
  return DiscreteJoint2(index_alphabet(nx), index_alphabet(ny), std::move(table));
}

DiscreteDist DiscreteJoint2::marginal_x() const {
  std::vector<double> m(nx(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) m[x] += at(x, y);
  return DiscreteDist(alphabet_x_, std::move(m));
}

DiscreteDist DiscreteJoint2::marginal_y() const {
  std::vector<double> m(ny(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) m[y] += at(x, y);
  return DiscreteDist(alphabet_y_, std::move(m));
}

DiscreteJoint2 DiscreteJoint2::transposed() const {
  std::vector<double> t(table_.size());
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) t[y * nx() + x] = at(x, y);
  return DiscreteJoint2(alphabet_y_, alphabet_x_, std::move(t));
}

// ---------------------------------------------------------------------------
// DiscreteJoint3

DiscreteJoint3::DiscreteJoint3(std::vector<std::string> alphabet_x,
                               std::vector<std::string> alphabet_y,
                               std::vector<std::string> alphabet_t,
                               std::vector<double> table)
    : alphabet_x_(std::move(alphabet_x)),
      alphabet_y_(std::move(alphabet_y)),
      alphabet_t_(std::move(alphabet_t)),
      table_(std::move(table)) {
  check_alphabet(alphabet_x_, "x");
  check_alphabet(alphabet_y_, "y");
  check_alphabet(alphabet_t_, "t");
  if (table_.size() != nx() * ny() * nt()) {
    throw Error(ErrorCode::Validity, "joint table size does not match alphabets");
  }
  normalize_table(table_);
}

DiscreteJoint3 DiscreteJoint3::from_table(std::size_t nx, std::size_t ny, std::size_t nt,
                                          std::vector<double> table) {
  return DiscreteJoint3(index_alphabet(nx), index_alphabet(ny), index_alphabet(nt),
                        std::move(table));
}

DiscreteDist DiscreteJoint3::marginal_x() const { return marginal_xt().marginal_x(); }
DiscreteDist DiscreteJoint3::marginal_y() const { return marginal_yt().marginal_x(); }
DiscreteDist DiscreteJoint3::marginal_t() const { return marginal_xt().marginal_y(); }

DiscreteJoint2 DiscreteJoint3::marginal_xy() const {
  std::vector<double> m(nx() * ny(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y)
      for (std::size_t t = 0; t < nt(); ++t) m[x * ny() + y] += at(x, y, t);
  return DiscreteJoint2(alphabet_x_, alphabet_y_, std::move(m));
}

DiscreteJoint2 DiscreteJoint3::marginal_xt() const {
  std::vector<double> m(nx() * nt(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y)
      for (std::size_t t = 0; t < nt(); ++t) m[x * nt() + t] += at(x, y, t);
  return DiscreteJoint2(alphabet_x_, alphabet_t_, std::move(m));
}

DiscreteJoint2 DiscreteJoint3::marginal_yt() const {
  std::vector<double> m(ny() * nt(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y)
      for (std::size_t t = 0; t < nt(); ++t) m[y * nt() + t] += at(x, y, t);
  return DiscreteJoint2(alphabet_y_, alphabet_t_, std::move(m));
}

DiscreteJoint2 DiscreteJoint3::pair_with_target() const {
  std::vector<std::string> pairs;
  pairs.reserve(nx() * ny());
  for (const auto& x : alphabet_x_)
    for (const auto& y : alphabet_y_) pairs.push_back(x + "," + y);
  return DiscreteJoint2(std::move(pairs), alphabet_t_, table_);
}

DiscreteJoint3 DiscreteJoint3::swapped_xy() const {
  std::vector<double> s(table_.size());
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y)
      for (std::size_t t = 0; t < nt(); ++t) s[(y * nx() + x) * nt() + t] = at(x, y, t);
  return DiscreteJoint3(alphabet_y_, alphabet_x_, alphabet_t_, std::move(s));
}

// ---------------------------------------------------------------------------
// Measures

double entropy(const DiscreteDist& dist) { return plogp_sum(dist.probs()); }

double joint_entropy(const DiscreteJoint2& joint) { return plogp_sum(joint.table()); }

double joint_entropy(const DiscreteJoint3& joint) { return plogp_sum(joint.table()); }

double conditional_entropy(const DiscreteJoint2& joint) {
  // -sum p(x,y) log p(x|y), skipping empty cells.
  const auto py = joint.marginal_y();
  double h = 0.0;
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t y = 0; y < joint.ny(); ++y) {
      const double p = joint.at(x, y);
      if (p > 0.0) h -= p * std::log(p / py[y]);
    }
  }
  return std::max(h, 0.0);
}

double mutual_information(const DiscreteJoint2& joint) {
  const auto px = joint.marginal_x();
  const auto py = joint.marginal_y();
  double mi = 0.0;
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t y = 0; y < joint.ny(); ++y) {
      const double p = joint.at(x, y);
      if (p > 0.0) mi += p * std::log(p / (px[x] * py[y]));
    }
  }
  return std::max(mi, 0.0);
}

double conditional_mi(const DiscreteJoint3& joint) {
  // sum p(x,y,t) log [ p(x,y,t) p(y) / (p(x,y) p(y,t)) ]
  const auto pxy = joint.marginal_xy();
  const auto pyt = joint.marginal_yt();
  const auto py = joint.marginal_y();
  double cmi = 0.0;
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t y = 0; y < joint.ny(); ++y) {
      for (std::size_t t = 0; t < joint.nt(); ++t) {
        const double p = joint.at(x, y, t);
        if (p > 0.0) cmi += p * std::log(p * py[y] / (pxy.at(x, y) * pyt.at(y, t)));
      }
    }
  }
  return std::max(cmi, 0.0);
}

ExtReal kl_divergence(const DiscreteDist& p, const DiscreteDist& q) {
  if (p.support() != q.support()) {
    throw Error(ErrorCode::Alphabet, "KL divergence requires identical supports");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return ExtReal::pos_inf();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double specific_information(const DiscreteJoint2& joint_xt, std::size_t t) {
  if (t >= joint_xt.ny()) {
    throw Error(ErrorCode::Alphabet, "target index out of range");
  }
  double pt = 0.0;
  for (std::size_t x = 0; x < joint_xt.nx(); ++x) pt += joint_xt.at(x, t);
  if (pt <= 0.0) return 0.0;
  const auto px = joint_xt.marginal_x();
  double d = 0.0;
  for (std::size_t x = 0; x < joint_xt.nx(); ++x) {
    const double p = joint_xt.at(x, t) / pt;
    if (p > 0.0) d += p * std::log(p / px[x]);
  }
  return std::max(d, 0.0);
}

double specific_information(const DiscreteJoint2& joint_xt, std::string_view t) {
  const auto& alphabet = joint_xt.alphabet_y();
  auto it = std::find(alphabet.begin(), alphabet.end(), t);
  if (it == alphabet.end()) {
    throw Error(ErrorCode::Alphabet, "target symbol '" + std::string(t) + "' not in alphabet");
  }
  return specific_information(joint_xt, static_cast<std::size_t>(it - alphabet.begin()));
}

double interaction_information(const DiscreteJoint3& joint) {
  return conditional_mi(joint) - mutual_information(joint.marginal_xt());
}

DiscreteJoint3 parse_joint3(std::string_view text) {
  auto fail = [](std::size_t line, const std::string& what) -> Error {
    return Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
  };
  std::vector<std::string> alpha[3];
  std::map<std::string, std::size_t> index[3];
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cells;
  bool header = false;
  std::size_t first_cell = 0;
  std::size_t last_cell = 0;

  std::istringstream stream{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream in(raw);
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok != std::vector<std::string>{"alphabet", "x", "y", "t"}) {
        throw fail(line_no, "expected header 'alphabet x y t'");
      }
      header = true;
      continue;
    }
    if (tok.size() != 4) throw fail(line_no, "expected 'x y t prob', got " + std::to_string(tok.size()) + " fields");
    double p = 0.0;
    const char* end = tok[3].data() + tok[3].size();
    auto res = std::from_chars(tok[3].data(), end, p);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(p)) {
      throw fail(line_no, "bad probability '" + tok[3] + "'");
    }
    if (p < 0.0) throw fail(line_no, "negative probability");
    std::size_t idx[3];
    for (int v = 0; v < 3; ++v) {
      auto [it, inserted] = index[v].try_emplace(tok[v], alpha[v].size());
      if (inserted) alpha[v].push_back(tok[v]);
      idx[v] = it->second;
    }
    if (!cells.emplace(std::tuple{idx[0], idx[1], idx[2]}, p).second) {
      throw fail(line_no, "duplicate cell (" + tok[0] + ", " + tok[1] + ", " + tok[2] + ")");
    }
    if (!first_cell) first_cell = line_no;
    last_cell = line_no;
  }
  if (!header) throw Error(ErrorCode::Parse, "empty joint file (missing 'alphabet x y t' header)");
  if (cells.empty()) throw Error(ErrorCode::Parse, "joint file has no cells");

  const std::size_t ny = alpha[1].size();
  const std::size_t nt = alpha[2].size();
  std::vector<double> table(alpha[0].size() * ny * nt, 0.0);
  for (const auto& [key, p] : cells) {
    const auto [x, y, t] = key;
    table[(x * ny + y) * nt + t] = p;
  }
  try {
    return DiscreteJoint3(std::move(alpha[0]), std::move(alpha[1]), std::move(alpha[2]), std::move(table));
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " (cells on lines " + std::to_string(first_cell) + "-" +
                              std::to_string(last_cell) + ")");
  }
}

DiscreteJoint3 load_joint3(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open joint file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_joint3(buf.str());
}

}  // namespace pidkit
