#pragma once

// Noise-free bivariate interactions T = g(X, Y) over standard-normal
// predictors with correlation rho, and Monte Carlo estimators of their unique
// information atoms expressed through the kernel partials.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidkit/ext_real.hpp"
#include "pidkit/gaussian.hpp"

namespace pidkit {

class NfbiKernel {
 public:
  enum class Family { Linear, Sigmoidal, SymmetricSum };

  /// g = a x + b y. Both coefficients nonzero.
  static NfbiKernel linear(double a, double b);
  /// g = y / (1 + exp(alpha - x)); x is the switch argument.
  static NfbiKernel sigmoidal(double alpha);
  /// g = x + y.
  static NfbiKernel symmetric_sum();
  /// "linear:A,B", "sigmoidal:ALPHA" or "symmetric".
  static NfbiKernel parse(std::string_view spec);

  Family family() const { return family_; }
  const std::string& name() const;
  /// Parseable form, the inverse of parse().
  std::string spec() const;
  double alpha() const { return p0_; }
  double coef_a() const { return p0_; }
  double coef_b() const { return p1_; }

  double eval(double x, double y) const;
  double d_x(double x, double y) const;
  double d_y(double x, double y) const;
  /// ln(|d_y g| / |d_x g|), evaluated in a cancellation-free form. Infinite
  /// or NaN where a partial vanishes.
  double log_partial_ratio(double x, double y) const;

 private:
  NfbiKernel(Family f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}

  Family family_;
  double p0_ = 0.0;
  double p1_ = 0.0;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t excluded = 0;  ///< boundary points where a partial vanished
};

inline constexpr std::uint64_t kMinUpmSamples = 1000;
inline constexpr std::uint64_t kMinUminSamples = 10000;
inline constexpr std::size_t kMinTBins = 10;
inline constexpr std::size_t kDefaultTBins = 50;
/// Runs losing more than this fraction of points to the boundary abort.
inline constexpr double kMaxExcludedFraction = 1e-4;

/// Ambiguity part of the signed unique information of X:
/// E[ 1{|d_x g| <= |d_y g|} ln(|d_y g| / |d_x g|) ].
McEstimate mc_upm_ambiguity_x(const NfbiKernel& kernel, double rho, std::uint64_t n,
                              std::uint64_t seed, unsigned workers = 0);
McEstimate mc_upm_ambiguity_y(const NfbiKernel& kernel, double rho, std::uint64_t n,
                              std::uint64_t seed, unsigned workers = 0);

/// Signed unique information (1/pi) sqrt(1 - rho^2) - ambiguity.
McEstimate mc_upm_x(const NfbiKernel& kernel, double rho, std::uint64_t n, std::uint64_t seed,
                    unsigned workers = 0);
McEstimate mc_upm_y(const NfbiKernel& kernel, double rho, std::uint64_t n, std::uint64_t seed,
                    unsigned workers = 0);

struct UminEstimate {
  McEstimate u_x;
  McEstimate u_y;
  std::size_t t_bins_requested = 0;
  std::size_t t_bins_used = 0;
  bool bins_reduced = false;  ///< more bins than points were requested
};

/// Unsigned unique informations. The per-point integrand
///   h = ln(p_Y(Y) / p_X(X)) - ln(|d_y g| / |d_x g|)
/// is averaged inside equal-mass quantile bins of T; the sign of a bin mean
/// stands in for the event I_X(T) >= I_Y(T). U_X sums the positive bin
/// means and U_Y the negative ones, each weighted by bin mass.
UminEstimate mc_umin(const NfbiKernel& kernel, double rho, std::uint64_t n, std::size_t t_bins,
                     std::uint64_t seed, unsigned workers = 0);
McEstimate mc_umin_x(const NfbiKernel& kernel, double rho, std::uint64_t n, std::size_t t_bins,
                     std::uint64_t seed, unsigned workers = 0);

/// Sampling oracle E_T[min(I_X(T), I_Y(T))] with T ~ N(0, sigma_T^2).
McEstimate mc_linear_redundancy_min(const LinearInteraction& li, std::uint64_t n,
                                    std::uint64_t seed, unsigned workers = 0);
/// Sampling oracle E[min(-ln p_X(X), -ln p_Y(Y))] for standard normals of
/// correlation rho (redundant specificity).
McEstimate mc_redundant_specificity(double rho, std::uint64_t n, std::uint64_t seed,
                                    unsigned workers = 0);

struct DensityCheckReport {
  double max_abs_error = 0.0;
  std::uint64_t n_points = 0;
};

/// Compares p_{X,T}(x, t) from the Gaussian law of (X, aX + bY) against
/// p_{X,Y}(x, y) / |d_y g| at sampled points. Linear kernels only.
DensityCheckReport density_ratio_identity_check(const NfbiKernel& kernel, double rho,
                                                std::uint64_t n, std::uint64_t seed);

/// I(T; X, Y) of any noise-free interaction with continuous predictors.
ExtReal infinite_mi_flag(const NfbiKernel& kernel);

struct LimitSweepRow {
  double param = 0.0;  ///< alpha (sigmoidal) or a (linear)
  McEstimate umin_x;
  McEstimate umin_y;
  McEstimate upm_x;
  McEstimate upm_x_ambiguity;
  McEstimate upm_y;
  double upm_y_specificity = 0.0;  ///< (1/pi) sqrt(1 - rho^2)
  bool has_closed_form = false;
  double closed_umin_x = 0.0;
  double closed_umin_y = 0.0;
  double closed_upm_x = 0.0;
  double closed_upm_x_ambiguity = 0.0;
};

struct LimitSweepConfig {
  NfbiKernel::Family family = NfbiKernel::Family::Sigmoidal;
  double rho = 0.0;
  std::vector<double> grid;  ///< alpha values, or a values for the linear family
  double linear_b = 1.0;
  std::uint64_t n = 1000000;
  std::size_t t_bins = kDefaultTBins;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Every grid point reuses the same seed, so the estimates share their
/// sample and differences along the grid are not sampling noise.
std::vector<LimitSweepRow> limit_sweep(const LimitSweepConfig& config);

}  // namespace pidkit
