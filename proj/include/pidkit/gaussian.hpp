#pragma once

// Closed-form decompositions of the noise-free linear Gaussian interaction
// T = aX + bY with standard-normal predictors of correlation rho, and the
// Gaussian calculus they rest on.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pidkit/pid.hpp"

namespace pidkit {

/// T = aX + bY with 0 < a < b and |rho| < 1.
class LinearInteraction {
 public:
  /// Throws ErrorCode::InvalidArgument on a parameter violation.
  LinearInteraction(double a, double b, double rho);

  double a() const { return a_; }
  double b() const { return b_; }
  double rho() const { return rho_; }
  /// sqrt(a^2 + b^2 + 2 rho a b)
  double sigma_t() const { return sigma_t_; }

 private:
  double a_, b_, rho_, sigma_t_;
};

/// Mean and covariance of a Gaussian vector of dimension at most 3.
struct GaussianParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  /// Throws unless the covariance is square, symmetric and PSD within 1e-10.
  void validate() const;
};

/// Law of A V for V ~ N(mean, cov): mean' = A mean, cov' = A cov A^T.
/// Singular A (|det A| <= 1e-12) is rejected.
GaussianParams gauss_linear_transform(const GaussianParams& params, const Eigen::MatrixXd& a);

struct NormalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// X1 | X2 = observed for a bivariate normal.
NormalMoments conditional_gaussian(double mu1, double mu2, double s1, double s2, double rho,
                                   double observed);

/// D(N(mu1, s1^2) || N(mu2, s2^2)).
double kl_gaussians(double mu1, double s1, double mu2, double s2);

struct LinearMi {
  double i_xy = 0.0;
  double i_tx = 0.0;
  double i_ty = 0.0;
};

LinearMi linear_mi(const LinearInteraction& li);

struct SpecificInfoPair {
  double ix = 0.0;
  double iy = 0.0;
};

/// I_X(t) and I_Y(t); I_Y(t) > I_X(t) everywhere since a < b.
SpecificInfoPair linear_specific_info(const LinearInteraction& li, double t);

/// (1/pi) sqrt(1 - rho^2): the unique specificity of either standard-normal
/// predictor.
double gaussian_unique_specificity(double rho);

/// ln sqrt(2 pi e), the differential entropy of a standard normal.
double standard_normal_entropy();

BivariatePid linear_imin_pid(const LinearInteraction& li);

struct PmLattice {
  BivariatePid atoms;
  PmSublattices sublattices;
};

PmLattice linear_ipm_pid(const LinearInteraction& li);

struct LinearLimitRow {
  double a = 0.0;
  LinearMi mi;
  BivariatePid imin;
  PmLattice ipm;
  double uy_min_over_ity = 0.0;    ///< -> 1
  double r_min_over_ity = 0.0;     ///< -> 0
  double ux_pm_over_ity = 0.0;     ///< -> -1
  double r_pm_over_ity = 0.0;      ///< -> 1
  double ux_pm_over_uy_min = 0.0;  ///< -> -1
};

/// Both PIDs and their ratios along a decreasing sequence a -> 0+.
std::vector<LinearLimitRow> linear_limits(double b, double rho, std::span<const double> a_sequence);

/// I_Y(0) - I_X(0) after substituting b = gamma * a; zero at gamma = 1 and
/// increasing on [1, inf).
double f_gamma(double gamma, double rho);

}  // namespace pidkit
