#include "pidkit/nfbi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "pidkit/error.hpp"
#include "pidkit/parallel.hpp"

namespace pidkit {

namespace {

constexpr std::uint64_t kShardSize = 1u << 16;

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::Parse, "bad number '" + std::string(text) + "' in kernel spec");
  }
  return v;
}

// Welford accumulator, mergeable in a fixed order.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * (o.n / total);
    m2 += o.m2 + d * d * (n * o.n / total);
    n = total;
  }

  double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
  double std_error() const { return n > 0.0 ? std::sqrt(variance() / n) : 0.0; }
};

void check_rho(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "predictor correlation requires |rho| < 1");
  }
}

std::size_t shard_count(std::uint64_t n) { return static_cast<std::size_t>((n + kShardSize - 1) / kShardSize); }

std::uint64_t shard_begin(std::size_t s) { return static_cast<std::uint64_t>(s) * kShardSize; }
std::uint64_t shard_end(std::size_t s, std::uint64_t n) { return std::min(n, shard_begin(s + 1)); }

// Calls fn(x, y) for the standard-normal pairs of one shard, generated as
// x = z1, y = rho z1 + sqrt(1 - rho^2) z2.
template <class Fn>
void for_each_pair(double rho, std::uint64_t count, std::uint64_t shard_seed, Fn&& fn) {
  std::mt19937_64 rng(shard_seed);
  std::normal_distribution<double> normal;
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    fn(z1, rho * z1 + s * z2);
  }
}

McEstimate to_estimate(const Moments& m, std::uint64_t seed, std::uint64_t excluded) {
  McEstimate e;
  e.value = m.mean;
  e.std_error = m.std_error();
  e.n_samples = static_cast<std::uint64_t>(m.n);
  e.seed = seed;
  e.excluded = excluded;
  return e;
}

void check_exclusions(std::uint64_t excluded, std::uint64_t n) {
  if (static_cast<double>(excluded) > kMaxExcludedFraction * static_cast<double>(n)) {
    throw Error(ErrorCode::Estimation,
                std::to_string(excluded) + " of " + std::to_string(n) +
                    " points fell on the vanishing-partial boundary");
  }
}

bool valid_point(const NfbiKernel& k, double x, double y, double log_ratio) {
  const double dx = k.d_x(x, y);
  const double dy = k.d_y(x, y);
  return dx != 0.0 && dy != 0.0 && std::isfinite(dx) && std::isfinite(dy) &&
         std::isfinite(log_ratio);
}

// E[(sign * L)^+] with L the log partial ratio; sign = +1 for X, -1 for Y.
McEstimate ambiguity(const NfbiKernel& kernel, double rho, std::uint64_t n, std::uint64_t seed,
                     unsigned workers, double sign) {
  check_rho(rho);
  if (n < kMinUpmSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "at least " + std::to_string(kMinUpmSamples) + " samples required");
  }
  const std::size_t shards = shard_count(n);
  std::vector<Moments> parts(shards);
  std::vector<std::uint64_t> dropped(shards, 0);
  parallel_for(shards, workers, [&](std::size_t s) {
    for_each_pair(rho, shard_end(s, n) - shard_begin(s), derive_seed(seed, {s}),
                  [&](double x, double y) {
                    const double l = kernel.log_partial_ratio(x, y);
                    if (!valid_point(kernel, x, y, l)) {
                      ++dropped[s];
                      return;
                    }
                    parts[s].add(std::max(sign * l, 0.0));
                  });
  });
  Moments total;
  std::uint64_t excluded = 0;
  for (std::size_t s = 0; s < shards; ++s) {
    total.merge(parts[s]);
    excluded += dropped[s];
  }
  check_exclusions(excluded, n);
  return to_estimate(total, seed, excluded);
}

McEstimate constant_minus(double c, McEstimate e) {
  e.value = c - e.value;
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// NfbiKernel

NfbiKernel NfbiKernel::linear(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a == 0.0 || b == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "linear kernel needs finite nonzero coefficients");
  }
  return NfbiKernel(Family::Linear, a, b);
}

NfbiKernel NfbiKernel::sigmoidal(double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  return NfbiKernel(Family::Sigmoidal, alpha, 0.0);
}

NfbiKernel NfbiKernel::symmetric_sum() { return NfbiKernel(Family::SymmetricSum, 0.0, 0.0); }

NfbiKernel NfbiKernel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto head = spec.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "symmetric" && args.empty()) return symmetric_sum();
  if (head == "sigmoidal" && !args.empty()) return sigmoidal(parse_number(args));
  if (head == "linear") {
    const auto comma = args.find(',');
    if (comma != std::string_view::npos) {
      return linear(parse_number(args.substr(0, comma)), parse_number(args.substr(comma + 1)));
    }
  }
  throw Error(ErrorCode::Parse, "unrecognized kernel spec '" + std::string(spec) +
                                    "' (expected linear:A,B, sigmoidal:ALPHA or symmetric)");
}

const std::string& NfbiKernel::name() const {
  static const std::string names[] = {"linear", "sigmoidal", "symmetric"};
  return names[static_cast<int>(family_)];
}

std::string NfbiKernel::spec() const {
  switch (family_) {
    case Family::Linear: return "linear:" + format_double(p0_) + "," + format_double(p1_);
    case Family::Sigmoidal: return "sigmoidal:" + format_double(p0_);
    case Family::SymmetricSum: break;
  }
  return "symmetric";
}

double NfbiKernel::eval(double x, double y) const {
  switch (family_) {
    case Family::Linear: return p0_ * x + p1_ * y;
    case Family::Sigmoidal: return y * logistic(x - p0_);
    case Family::SymmetricSum: break;
  }
  return x + y;
}

double NfbiKernel::d_x(double x, double y) const {
  switch (family_) {
    case Family::Linear: return p0_;
    case Family::Sigmoidal: return y * logistic(x - p0_) * logistic(p0_ - x);
    case Family::SymmetricSum: break;
  }
  return 1.0;
}

double NfbiKernel::d_y(double x, double /*y*/) const {
  switch (family_) {
    case Family::Linear: return p1_;
    case Family::Sigmoidal: return logistic(x - p0_);
    case Family::SymmetricSum: break;
  }
  return 1.0;
}

double NfbiKernel::log_partial_ratio(double x, double y) const {
  switch (family_) {
    case Family::Linear: return std::log(std::abs(p1_) / std::abs(p0_));
    // |d_x / d_y| = |y| / (1 + exp(x - alpha))
    case Family::Sigmoidal: return softplus(x - p0_) - std::log(std::abs(y));
    case Family::SymmetricSum: break;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Estimators

McEstimate mc_upm_ambiguity_x(const NfbiKernel& kernel, double rho, std::uint64_t n,
                              std::uint64_t seed, unsigned workers) {
  return ambiguity(kernel, rho, n, seed, workers, 1.0);
}

McEstimate mc_upm_ambiguity_y(const NfbiKernel& kernel, double rho, std::uint64_t n,
                              std::uint64_t seed, unsigned workers) {
  return ambiguity(kernel, rho, n, seed, workers, -1.0);
}

McEstimate mc_upm_x(const NfbiKernel& kernel, double rho, std::uint64_t n, std::uint64_t seed,
                    unsigned workers) {
  return constant_minus(gaussian_unique_specificity(rho),
                        mc_upm_ambiguity_x(kernel, rho, n, seed, workers));
}

McEstimate mc_upm_y(const NfbiKernel& kernel, double rho, std::uint64_t n, std::uint64_t seed,
                    unsigned workers) {
  return constant_minus(gaussian_unique_specificity(rho),
                        mc_upm_ambiguity_y(kernel, rho, n, seed, workers));
}

UminEstimate mc_umin(const NfbiKernel& kernel, double rho, std::uint64_t n, std::size_t t_bins,
                     std::uint64_t seed, unsigned workers) {
  check_rho(rho);
  if (n < kMinUminSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "at least " + std::to_string(kMinUminSamples) + " samples required");
  }
  if (t_bins < kMinTBins) {
    throw Error(ErrorCode::InvalidArgument,
                "at least " + std::to_string(kMinTBins) + " target bins required");
  }

  // (t, h) per point; NaN t marks an excluded point.
  std::vector<double> ts(n);
  std::vector<double> hs(n);
  const std::size_t shards = shard_count(n);
  parallel_for(shards, workers, [&](std::size_t s) {
    std::uint64_t i = shard_begin(s);
    for_each_pair(rho, shard_end(s, n) - i, derive_seed(seed, {s}), [&](double x, double y) {
      const double l = kernel.log_partial_ratio(x, y);
      if (valid_point(kernel, x, y, l)) {
        ts[i] = kernel.eval(x, y);
        hs[i] = 0.5 * (x * x - y * y) - l;
      } else {
        ts[i] = std::numeric_limits<double>::quiet_NaN();
      }
      ++i;
    });
  });

  std::vector<std::uint64_t> order;
  order.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!std::isnan(ts[i])) order.push_back(i);
  }
  const std::uint64_t excluded = n - order.size();
  check_exclusions(excluded, n);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t l, std::uint64_t r) { return ts[l] < ts[r]; });

  UminEstimate out;
  out.t_bins_requested = t_bins;
  const std::uint64_t kept = order.size();
  std::size_t bins = t_bins;
  if (bins > kept) {
    bins = static_cast<std::size_t>(kept);
    out.bins_reduced = true;
  }
  out.t_bins_used = bins;

  double ux = 0.0, uy = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::uint64_t lo = kept * b / bins;
    const std::uint64_t hi = kept * (b + 1) / bins;
    Moments m;
    for (std::uint64_t k = lo; k < hi; ++k) m.add(hs[order[k]]);
    const double w = m.n / static_cast<double>(kept);
    const double se2 = w * w * m.variance() / m.n;
    if (m.mean > 0.0) {
      ux += w * m.mean;
      var_x += se2;
    } else if (m.mean < 0.0) {
      uy -= w * m.mean;
      var_y += se2;
    }
  }
  out.u_x = McEstimate{ux, std::sqrt(var_x), kept, seed, excluded};
  out.u_y = McEstimate{uy, std::sqrt(var_y), kept, seed, excluded};
  return out;
}

McEstimate mc_umin_x(const NfbiKernel& kernel, double rho, std::uint64_t n, std::size_t t_bins,
                     std::uint64_t seed, unsigned workers) {
  return mc_umin(kernel, rho, n, t_bins, seed, workers).u_x;
}

McEstimate mc_linear_redundancy_min(const LinearInteraction& li, std::uint64_t n,
                                    std::uint64_t seed, unsigned workers) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const std::size_t shards = shard_count(n);
  std::vector<Moments> parts(shards);
  parallel_for(shards, workers, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, {s}));
    std::normal_distribution<double> normal(0.0, li.sigma_t());
    for (std::uint64_t i = shard_begin(s); i < shard_end(s, n); ++i) {
      const auto si = linear_specific_info(li, normal(rng));
      parts[s].add(std::min(si.ix, si.iy));
    }
  });
  Moments total;
  for (const auto& p : parts) total.merge(p);
  return to_estimate(total, seed, 0);
}

McEstimate mc_redundant_specificity(double rho, std::uint64_t n, std::uint64_t seed,
                                    unsigned workers) {
  check_rho(rho);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
  const std::size_t shards = shard_count(n);
  std::vector<Moments> parts(shards);
  parallel_for(shards, workers, [&](std::size_t s) {
    for_each_pair(rho, shard_end(s, n) - shard_begin(s), derive_seed(seed, {s}),
                  [&](double x, double y) {
                    parts[s].add(std::min(log_norm + 0.5 * x * x, log_norm + 0.5 * y * y));
                  });
  });
  Moments total;
  for (const auto& p : parts) total.merge(p);
  return to_estimate(total, seed, 0);
}

DensityCheckReport density_ratio_identity_check(const NfbiKernel& kernel, double rho,
                                                std::uint64_t n, std::uint64_t seed) {
  if (kernel.family() != NfbiKernel::Family::Linear) {
    throw Error(ErrorCode::Unsupported,
                "density identity check needs a closed-form p(x, t); only linear kernels qualify");
  }
  const LinearInteraction li(kernel.coef_a(), kernel.coef_b(), rho);

  GaussianParams xy{Eigen::Vector2d::Zero(), Eigen::Matrix2d{{1.0, rho}, {rho, 1.0}}};
  const Eigen::Matrix2d to_xt{{1.0, 0.0}, {li.a(), li.b()}};
  const auto xt = gauss_linear_transform(xy, to_xt);

  auto bivariate_pdf = [](const Eigen::Matrix2d& cov, double u, double v) {
    const Eigen::Vector2d z(u, v);
    const double quad = z.dot(cov.inverse() * z);
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(cov.determinant()));
  };
  const Eigen::Matrix2d cov_xy = xy.cov;
  const Eigen::Matrix2d cov_xt = xt.cov;

  DensityCheckReport rep;
  for_each_pair(rho, n, derive_seed(seed, {0}), [&](double x, double y) {
    const double t = kernel.eval(x, y);
    const double lhs = bivariate_pdf(cov_xt, x, t);
    const double rhs = bivariate_pdf(cov_xy, x, y) / std::abs(kernel.d_y(x, y));
    rep.max_abs_error = std::max(rep.max_abs_error, std::abs(lhs - rhs));
    ++rep.n_points;
  });
  return rep;
}

ExtReal infinite_mi_flag(const NfbiKernel& /*kernel*/) { return ExtReal::pos_inf(); }

std::vector<LimitSweepRow> limit_sweep(const LimitSweepConfig& config) {
  std::vector<LimitSweepRow> rows;
  rows.reserve(config.grid.size());
  const double spec_const = gaussian_unique_specificity(config.rho);
  for (double p : config.grid) {
    NfbiKernel kernel = NfbiKernel::symmetric_sum();
    LimitSweepRow row;
    row.param = p;
    switch (config.family) {
      case NfbiKernel::Family::Sigmoidal: kernel = NfbiKernel::sigmoidal(p); break;
      case NfbiKernel::Family::Linear: {
        kernel = NfbiKernel::linear(p, config.linear_b);
        const LinearInteraction li(p, config.linear_b, config.rho);
        const auto imin = linear_imin_pid(li);
        const auto ipm = linear_ipm_pid(li);
        row.has_closed_form = true;
        row.closed_umin_x = imin.u_x.value();
        row.closed_umin_y = imin.u_y.value();
        row.closed_upm_x = ipm.atoms.u_x.value();
        row.closed_upm_x_ambiguity = ipm.sublattices.u_x_minus.value();
        break;
      }
      case NfbiKernel::Family::SymmetricSum: break;
    }
    const auto umin = mc_umin(kernel, config.rho, config.n, config.t_bins, config.seed, config.workers);
    row.umin_x = umin.u_x;
    row.umin_y = umin.u_y;
    row.upm_x_ambiguity = mc_upm_ambiguity_x(kernel, config.rho, config.n, config.seed, config.workers);
    row.upm_x = constant_minus(spec_const, row.upm_x_ambiguity);
    row.upm_y = mc_upm_y(kernel, config.rho, config.n, config.seed, config.workers);
    row.upm_y_specificity = spec_const;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pidkit
