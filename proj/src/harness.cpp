#include "pidkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "pidkit/error.hpp"
#include "pidkit/parallel.hpp"

namespace pidkit {

Discretized discretize_equal_width(std::span<const double> samples, std::size_t n_bins) {
  if (n_bins < 2) throw Error(ErrorCode::InvalidArgument, "equal-width binning needs n_bins >= 2");
  if (samples.empty()) throw Error(ErrorCode::DegenerateInput, "cannot bin an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::DegenerateInput, "sample contains non-finite values");
  }
  if (!(hi > lo)) throw Error(ErrorCode::DegenerateInput, "cannot bin a constant sample");

  Discretized out;
  out.bins.n_bins = n_bins;
  out.bins.edges.resize(n_bins + 1);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t k = 0; k <= n_bins; ++k) out.bins.edges[k] = lo + width * static_cast<double>(k);
  out.bins.edges.back() = hi;

  // upper_bound over the interior edges gives left-closed bins; the maximum
  // is clamped into the last (closed) bin.
  const auto interior_begin = out.bins.edges.begin() + 1;
  const auto interior_end = out.bins.edges.end() - 1;
  out.symbols.reserve(samples.size());
  for (double v : samples) {
    auto k = static_cast<std::size_t>(std::upper_bound(interior_begin, interior_end, v) - interior_begin);
    out.symbols.push_back(static_cast<std::uint32_t>(std::min(k, n_bins - 1)));
  }
  return out;
}

DiscreteJoint3 empirical_joint3(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                                std::span<const std::uint32_t> t, std::size_t nx, std::size_t ny,
                                std::size_t nt) {
  if (x.size() != y.size() || x.size() != t.size()) {
    throw Error(ErrorCode::InvalidArgument, "symbol vectors differ in length");
  }
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "empirical joint needs at least one sample");
  auto size_of = [](std::span<const std::uint32_t> v, std::size_t n) {
    const std::size_t observed = *std::max_element(v.begin(), v.end()) + std::size_t{1};
    if (n == 0) return observed;
    if (observed > n) throw Error(ErrorCode::Alphabet, "symbol outside the declared alphabet");
    return n;
  };
  nx = size_of(x, nx);
  ny = size_of(y, ny);
  nt = size_of(t, nt);
  std::vector<double> counts(nx * ny * nt, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) counts[(x[k] * ny + y[k]) * nt + t[k]] += 1.0;
  const double n = static_cast<double>(x.size());
  for (double& c : counts) c /= n;
  return DiscreteJoint3::from_table(nx, ny, nt, std::move(counts));
}

std::vector<double> rank_scores(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "ranking needs at least two values");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(m);
  const double denom = static_cast<double>(m - 1);
  for (std::size_t start = 0; start < m;) {
    std::size_t end = start + 1;
    while (end < m && values[order[end]] == values[order[start]]) ++end;
    const double r = (static_cast<double>(start) + 0.5 * static_cast<double>(end - start - 1)) / denom;
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = r;
    start = end;
  }
  return ranks;
}

std::vector<PairResult> pairwise_pid_scan(const InteractionNetwork& network,
                                          const SampleBatch& batch, std::size_t n_bins,
                                          std::size_t batch_id) {
  const std::size_t d = batch.n_nodes;
  if (d != network.n_nodes()) throw Error(ErrorCode::InvalidArgument, "batch does not match network");
  std::vector<std::vector<std::uint32_t>> symbols(d);
  std::vector<double> column(batch.n_samples);
  for (std::size_t node = 0; node < d; ++node) {
    for (std::size_t k = 0; k < batch.n_samples; ++k) column[k] = batch.at(k, node);
    symbols[node] = discretize_equal_width(column, n_bins).symbols;
  }
  const auto target = discretize_equal_width(batch.response, n_bins).symbols;

  std::vector<PairResult> out;
  out.reserve(d * (d - 1) / 2);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      PairResult pr;
      pr.batch = batch_id;
      pr.i = a;
      pr.j = b;
      if (network.has_edge(a, b) && network.degree(a) > network.degree(b)) std::swap(pr.i, pr.j);
      pr.is_interaction = network.is_interaction_pair(a, b);
      const auto joint = empirical_joint3(symbols[pr.i], symbols[pr.j], target, n_bins, n_bins, n_bins);
      pr.imin = imin_pid(joint);
      pr.ipm = ipm_pid(joint);
      pr.mi_xy = pr.imin.mi_xy.to_double();
      out.push_back(pr);
    }
  }
  return out;
}

namespace {

RankTable::Atoms rank_atoms(std::span<const PairResult> pairs, BivariatePid PairResult::*member) {
  auto ranked = [&](ExtReal BivariatePid::*atom) {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(((p.*member).*atom).to_double());
    return rank_scores(v);
  };
  return {ranked(&BivariatePid::r), ranked(&BivariatePid::u_x), ranked(&BivariatePid::u_y),
          ranked(&BivariatePid::s)};
}

}  // namespace

RankTable rank_pairs(std::span<const PairResult> pairs) {
  RankTable t;
  t.imin = rank_atoms(pairs, &PairResult::imin);
  t.ipm = rank_atoms(pairs, &PairResult::ipm);
  std::vector<double> mi;
  mi.reserve(pairs.size());
  for (const auto& p : pairs) mi.push_back(p.mi_xy);
  t.mi = rank_scores(mi);
  return t;
}

StatSummary summarize(std::vector<double> values) {
  StatSummary s;
  s.count = values.size();
  if (values.empty()) {
    s.median = s.q1 = s.q3 = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "correlation needs two equal-length series of length >= 2");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

namespace {

void check_config(const ExperimentConfig& c) {
  if (c.network && c.network->n_nodes() < 2) {
    throw Error(ErrorCode::InvalidArgument, "network scan needs at least two nodes");
  }
  if (c.batches == 0) throw Error(ErrorCode::InvalidArgument, "batches must be positive");
  if (c.n_per_batch < 2) throw Error(ErrorCode::InvalidArgument, "n_per_batch must be at least 2");
  if (c.bins < 2) throw Error(ErrorCode::InvalidArgument, "bins must be at least 2");
}

using NetworkFactory = std::function<InteractionNetwork(double grid_value)>;

std::vector<BatchScan> run_scans(const ExperimentConfig& c, std::span<const double> grid,
                                 const NetworkFactory& make) {
  check_config(c);
  std::vector<InteractionNetwork> networks;
  networks.reserve(grid.size());
  for (double v : grid) networks.push_back(make(v));

  std::vector<BatchScan> scans(grid.size() * c.batches);
  parallel_for(scans.size(), c.workers, [&](std::size_t unit) {
    BatchScan& s = scans[unit];
    s.grid_index = unit / c.batches;
    s.batch = unit % c.batches;
    s.grid_value = grid[s.grid_index];
    s.seed = derive_seed(c.seed, {s.grid_index, s.batch});
    const auto& net = networks[s.grid_index];
    const auto batch = sample(net, c.n_per_batch, s.seed, 1);
    s.pairs = pairwise_pid_scan(net, batch, c.bins, s.batch);
    s.ranks = rank_pairs(s.pairs);
  });
  return scans;
}

struct RankedStat {
  const char* name;
  std::vector<double> RankTable::*plain;
  RankTable::Atoms RankTable::*atoms;
  std::vector<double> RankTable::Atoms::*atom;

  const std::vector<double>& of(const RankTable& t) const {
    return plain ? t.*plain : (t.*atoms).*atom;
  }
};

const RankedStat kRankedStats[] = {
    {"R_min", nullptr, &RankTable::imin, &RankTable::Atoms::r},
    {"U_X_min", nullptr, &RankTable::imin, &RankTable::Atoms::u_x},
    {"U_Y_min", nullptr, &RankTable::imin, &RankTable::Atoms::u_y},
    {"S_min", nullptr, &RankTable::imin, &RankTable::Atoms::s},
    {"R_pm", nullptr, &RankTable::ipm, &RankTable::Atoms::r},
    {"U_X_pm", nullptr, &RankTable::ipm, &RankTable::Atoms::u_x},
    {"U_Y_pm", nullptr, &RankTable::ipm, &RankTable::Atoms::u_y},
    {"S_pm", nullptr, &RankTable::ipm, &RankTable::Atoms::s},
    {"MI", &RankTable::mi, nullptr, nullptr},
};

template <class Pred>
SplitSummary split_ranks(std::span<const BatchScan> scans, const RankedStat& stat, Pred is_other) {
  std::vector<double> inter, other;
  for (const auto& s : scans) {
    const auto& ranks = stat.of(s.ranks);
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
      if (s.pairs[p].is_interaction) {
        inter.push_back(ranks[p]);
      } else if (is_other(s.pairs[p])) {
        other.push_back(ranks[p]);
      }
    }
  }
  return {summarize(std::move(inter)), summarize(std::move(other))};
}

const RankedStat& stat_named(std::string_view name) {
  for (const auto& s : kRankedStats) {
    if (name == s.name) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown statistic");
}

}  // namespace

ExperimentResult run_experiment_1(const ExperimentConfig& config) {
  ExperimentResult res;
  res.id = 1;
  res.config = config;
  const double grid[] = {config.alpha};
  res.scans = run_scans(config, grid, [&](double a) {
    return config.network ? *config.network : network_a(a, config.rho);
  });
  for (const auto& stat : kRankedStats) {
    res.exp1.push_back({stat.name, split_ranks(res.scans, stat, [](const PairResult&) { return true; })});
  }
  return res;
}

ExperimentResult run_experiment_2(const ExperimentConfig& config) {
  if (config.network) throw Error(ErrorCode::InvalidArgument, "experiment 2 uses the built-in network B");
  if (config.beta_grid.empty()) throw Error(ErrorCode::InvalidArgument, "beta grid is empty");
  ExperimentResult res;
  res.id = 2;
  res.config = config;
  res.scans = run_scans(config, config.beta_grid,
                        [&](double beta) { return network_b(config.alpha, beta, config.k, config.rho); });
  // Spokes of hub 2 sit above it in index order and are the only pairs
  // oriented with a lower-index Y.
  auto is_decoy = [](const PairResult& p) { return p.j == kNetworkBHub2 && p.i > kNetworkBHub2; };
  for (std::size_t g = 0; g < config.beta_grid.size(); ++g) {
    const std::span<const BatchScan> slice(res.scans.data() + g * config.batches, config.batches);
    Exp2Point pt;
    pt.beta = config.beta_grid[g];
    pt.s_min = split_ranks(slice, stat_named("S_min"), is_decoy);
    pt.s_pm = split_ranks(slice, stat_named("S_pm"), is_decoy);
    pt.mi = split_ranks(slice, stat_named("MI"), is_decoy);
    res.exp2.push_back(pt);
  }
  return res;
}

ExperimentResult run_experiment_3(const ExperimentConfig& config) {
  if (config.network) throw Error(ErrorCode::InvalidArgument, "experiment 3 uses the built-in network A");
  if (config.alpha_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "alpha grid needs two or more points");
  ExperimentResult res;
  res.id = 3;
  res.config = config;
  res.scans = run_scans(config, config.alpha_grid, [&](double a) { return network_a(a, config.rho); });

  std::vector<double> uy_min, taylor_dy, min_sum, pm_sum;
  for (std::size_t g = 0; g < config.alpha_grid.size(); ++g) {
    double sums[9] = {};
    std::size_t count = 0;
    for (std::size_t b = 0; b < config.batches; ++b) {
      for (const auto& p : res.scans[g * config.batches + b].pairs) {
        if (!p.is_interaction) continue;
        const ExtReal atoms[] = {p.imin.r, p.imin.u_x, p.imin.u_y, p.imin.s,
                                 p.ipm.r,  p.ipm.u_x,  p.ipm.u_y,  p.ipm.s};
        for (int k = 0; k < 8; ++k) sums[k] += atoms[k].to_double();
        sums[8] += p.mi_xy;
        ++count;
      }
    }
    Exp3Point pt;
    pt.alpha = config.alpha_grid[g];
    pt.mean_mi = sums[8] / static_cast<double>(count);
    double* fields[] = {&pt.r_min, &pt.u_x_min, &pt.u_y_min, &pt.s_min,
                        &pt.r_pm,  &pt.u_x_pm,  &pt.u_y_pm,  &pt.s_pm};
    for (int k = 0; k < 8; ++k) *fields[k] = sums[k] / sums[8];
    pt.taylor = taylor_coefficients(pt.alpha);
    uy_min.push_back(pt.u_y_min);
    taylor_dy.push_back(pt.taylor.normalized_dy);
    min_sum.push_back(pt.r_min + pt.s_min);
    pm_sum.push_back(pt.r_pm + pt.s_pm);
    res.exp3.push_back(pt);
  }

  res.uy_min_taylor_pearson = pearson_correlation(uy_min, taylor_dy);
  // The grid is visited in the given order; increasing means in alpha.
  std::vector<std::size_t> order(config.alpha_grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return config.alpha_grid[a] < config.alpha_grid[b]; });
  res.min_sum_increasing = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(min_sum[order[k]] > min_sum[order[k - 1]])) res.min_sum_increasing = false;
  }
  const auto [lo, hi] = std::minmax_element(pm_sum.begin(), pm_sum.end());
  res.pm_sum_range = *hi - *lo;
  return res;
}

ExperimentResult run_experiment(int id, const ExperimentConfig& config) {
  switch (id) {
    case 1: return run_experiment_1(config);
    case 2: return run_experiment_2(config);
    case 3: return run_experiment_3(config);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "experiment id must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ';';
    s += format_double(v[k]);
  }
  return s;
}

std::string scaled(const ExtReal& v, double unit_scale) { return to_string(v / unit_scale); }

nlohmann::ordered_json stat_json(const StatSummary& s) {
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  return {{"median", num(s.median)}, {"q1", num(s.q1)}, {"q3", num(s.q3)}, {"count", s.count}};
}

nlohmann::ordered_json split_json(const SplitSummary& s) {
  return {{"interaction", stat_json(s.interaction)}, {"other", stat_json(s.other)}};
}

nlohmann::ordered_json config_json(const ExperimentResult& r, double unit_scale) {
  const auto& c = r.config;
  nlohmann::ordered_json j;
  j["experiment"] = r.id;
  j["batches"] = c.batches;
  j["n_per_batch"] = c.n_per_batch;
  j["bins"] = c.bins;
  j["binning"] = "equal-width per batch and variable";
  j["rho"] = c.rho;
  j["edge_signs"] = "all positive";
  j["seed"] = c.seed;
  j["rank_ties"] = "fractional (mean position)";
  j["units"] = unit_scale == 1.0 ? "nats" : "bits";
  if (r.id == 1 && c.network) {
    j["network"] = "custom";
    j["n_nodes"] = c.network->n_nodes();
    j["rho"] = c.network->rho();
    j["kernel"] = c.network->kernel().spec();
    j["edge_signs"] = "from network spec";
  } else if (r.id == 1 || r.id == 2) {
    j["alpha"] = c.alpha;
  }
  if (r.id == 2) {
    j["k"] = c.k;
    j["beta_grid"] = c.beta_grid;
  }
  if (r.id == 3) j["alpha_grid"] = c.alpha_grid;
  return j;
}

}  // namespace

void write_pairs_csv(const ExperimentResult& result, PidKind kind, std::ostream& out,
                     double unit_scale) {
  const auto& c = result.config;
  out << "# experiment=" << result.id << " kind=" << to_string(kind) << " batches=" << c.batches
      << " n_per_batch=" << c.n_per_batch << " bins=" << c.bins
      << " rho=" << format_double(c.network ? c.network->rho() : c.rho)
      << " seed=" << c.seed;
  if (result.id == 2) out << " alpha=" << format_double(c.alpha) << " k=" << c.k << " beta_grid=" << join(c.beta_grid);
  if (result.id == 1 && c.network) out << " network=custom kernel=" << c.network->kernel().spec();
  if (result.id == 1 && !c.network) out << " alpha=" << format_double(c.alpha);
  if (result.id == 3) out << " alpha_grid=" << join(c.alpha_grid);
  out << " rank_ties=fractional units=" << (unit_scale == 1.0 ? "nats" : "bits") << '\n';
  out << "batch,i,j,is_interaction,kind,R,U_X,U_Y,S,MI,rank_R,rank_U_X,rank_U_Y,rank_S,rank_MI,grid_value\n";
  for (const auto& s : result.scans) {
    const auto& ranks = kind == PidKind::Imin ? s.ranks.imin : s.ranks.ipm;
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
      const auto& pr = s.pairs[p];
      const auto& pid = kind == PidKind::Imin ? pr.imin : pr.ipm;
      out << pr.batch << ',' << pr.i << ',' << pr.j << ',' << (pr.is_interaction ? 1 : 0) << ','
          << to_string(kind) << ',' << scaled(pid.r, unit_scale) << ',' << scaled(pid.u_x, unit_scale)
          << ',' << scaled(pid.u_y, unit_scale) << ',' << scaled(pid.s, unit_scale) << ','
          << format_double(pr.mi_xy / unit_scale) << ',' << format_double(ranks.r[p]) << ','
          << format_double(ranks.u_x[p]) << ',' << format_double(ranks.u_y[p]) << ','
          << format_double(ranks.s[p]) << ',' << format_double(s.ranks.mi[p]) << ','
          << format_double(s.grid_value) << '\n';
    }
  }
}

nlohmann::ordered_json summary_json(const ExperimentResult& result, double unit_scale) {
  nlohmann::ordered_json j;
  j["config"] = config_json(result, unit_scale);
  if (result.id == 1) {
    auto& stats = j["ranked"];
    stats = nlohmann::ordered_json::object();
    for (const auto& ns : result.exp1) stats[ns.statistic] = split_json(ns.split);
  } else if (result.id == 2) {
    auto& pts = j["per_beta"];
    pts = nlohmann::ordered_json::array();
    for (const auto& p : result.exp2) {
      nlohmann::ordered_json e;
      e["beta"] = p.beta;
      e["S_min"] = split_json(p.s_min);
      e["S_pm"] = split_json(p.s_pm);
      e["MI"] = split_json(p.mi);
      e["S_min_interaction_above_other"] = p.s_min.interaction.median > p.s_min.other.median;
      pts.push_back(e);
    }
    const auto largest = std::max_element(result.exp2.begin(), result.exp2.end(),
                                           [](const Exp2Point& a, const Exp2Point& b) { return a.beta < b.beta; });
    bool all_min = true;
    for (const auto& p : result.exp2) all_min = all_min && p.s_min.interaction.median > p.s_min.other.median;
    j["comparisons"] = {
        {"S_min_interaction_above_other_all_beta", all_min},
        {"largest_beta", largest->beta},
        {"S_pm_other_above_interaction_at_largest_beta",
         largest->s_pm.other.median > largest->s_pm.interaction.median},
        {"MI_other_above_interaction_at_largest_beta", largest->mi.other.median > largest->mi.interaction.median},
    };
  } else if (result.id == 3) {
    auto& pts = j["per_alpha"];
    pts = nlohmann::ordered_json::array();
    for (const auto& p : result.exp3) {
      pts.push_back({{"alpha", p.alpha},
                     {"mean_mi", p.mean_mi / unit_scale},
                     {"normalized", {{"R_min", p.r_min}, {"U_X_min", p.u_x_min}, {"U_Y_min", p.u_y_min},
                                     {"S_min", p.s_min}, {"R_pm", p.r_pm}, {"U_X_pm", p.u_x_pm},
                                     {"U_Y_pm", p.u_y_pm}, {"S_pm", p.s_pm}}},
                     {"taylor", {{"dy_f", p.taylor.dy_f}, {"dxy_f", p.taylor.dxy_f}, {"norm", p.taylor.norm},
                                 {"normalized_dy", p.taylor.normalized_dy},
                                 {"normalized_dxy", p.taylor.normalized_dxy}}}});
    }
    j["trends"] = {{"U_Y_min_vs_taylor_dy_pearson", result.uy_min_taylor_pearson},
                   {"R_plus_S_min_increasing", result.min_sum_increasing},
                   {"R_plus_S_pm_range", result.pm_sum_range}};
  }
  return j;
}

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& result,
                                                            const std::filesystem::path& dir,
                                                            double unit_scale) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
    written.push_back(p);
    return f;
  };
  for (PidKind kind : {PidKind::Imin, PidKind::Ipm}) {
    auto f = open(dir / ("pairs_" + std::string(to_string(kind)) + ".csv"));
    write_pairs_csv(result, kind, f, unit_scale);
    if (!f) throw Error(ErrorCode::Io, "write failed for CSV output");
  }
  auto f = open(dir / "summary.json");
  f << summary_json(result, unit_scale).dump(2) << '\n';
  if (!f) throw Error(ErrorCode::Io, "write failed for summary.json");
  return written;
}

}  // namespace pidkit
