#include "pidkit/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "pidkit/error.hpp"

namespace pidkit {

LinearInteraction::LinearInteraction(double a, double b, double rho) : a_(a), b_(b), rho_(rho) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(rho)) {
    throw Error(ErrorCode::InvalidArgument, "linear interaction parameters must be finite");
  }
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "linear interaction requires a > 0");
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "linear interaction requires a < b");
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "linear interaction requires |rho| < 1");
  }
  sigma_t_ = std::sqrt(a * a + b * b + 2.0 * rho * a * b);
}

void GaussianParams::validate() const {
  const auto n = cov.rows();
  if (n == 0 || n > 3 || cov.cols() != n || mean.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "Gaussian parameters must be 1- to 3-dimensional");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive semidefinite");
  }
}

GaussianParams gauss_linear_transform(const GaussianParams& params, const Eigen::MatrixXd& a) {
  params.validate();
  if (a.rows() != a.cols() || a.rows() != params.cov.rows()) {
    throw Error(ErrorCode::InvalidArgument, "transform must be square and match the dimension");
  }
  if (std::abs(a.determinant()) <= 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "transform is singular");
  }
  GaussianParams out{a * params.mean, a * params.cov * a.transpose()};
  // Restore exact symmetry lost to rounding.
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

NormalMoments conditional_gaussian(double mu1, double mu2, double s1, double s2, double rho,
                                   double observed) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "standard deviations must be positive");
  }
  if (!(std::abs(rho) <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "correlation must lie in [-1, 1]");
  }
  return {mu1 + rho * (s1 / s2) * (observed - mu2), s1 * s1 * (1.0 - rho * rho)};
}

double kl_gaussians(double mu1, double s1, double mu2, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "standard deviations must be positive");
  }
  const double dm = mu1 - mu2;
  return std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
}

LinearMi linear_mi(const LinearInteraction& li) {
  LinearMi mi;
  mi.i_xy = -0.5 * std::log1p(-li.rho() * li.rho());
  mi.i_tx = -std::log(li.b()) + std::log(li.sigma_t()) + mi.i_xy;
  mi.i_ty = -std::log(li.a()) + std::log(li.sigma_t()) + mi.i_xy;
  return mi;
}

SpecificInfoPair linear_specific_info(const LinearInteraction& li, double t) {
  const double a = li.a();
  const double b = li.b();
  const double rho = li.rho();
  const double s2 = li.sigma_t() * li.sigma_t();
  const double s4 = s2 * s2;
  const double one_m_r2 = 1.0 - rho * rho;
  const double c = std::log(li.sigma_t()) - 0.5 * std::log(one_m_r2) - 0.5;
  SpecificInfoPair out;
  out.ix = -std::log(b) + (b * b * one_m_r2 * s2 + (a + rho * b) * (a + rho * b) * t * t) / (2.0 * s4) + c;
  out.iy = -std::log(a) + (a * a * one_m_r2 * s2 + (b + rho * a) * (b + rho * a) * t * t) / (2.0 * s4) + c;
  return out;
}

double gaussian_unique_specificity(double rho) {
  return std::sqrt(1.0 - rho * rho) / std::numbers::pi;
}

double standard_normal_entropy() {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
}

BivariatePid linear_imin_pid(const LinearInteraction& li) {
  const auto mi = linear_mi(li);
  // I_X(t) <= I_Y(t) for every t, so the redundancy is I(T; X).
  BivariatePid pid;
  pid.kind = PidKind::Imin;
  pid.mi_x = mi.i_tx;
  pid.mi_y = mi.i_ty;
  pid.mi_xy = ExtReal::pos_inf();
  pid.r = -std::log(li.b()) + std::log(li.sigma_t()) + mi.i_xy;
  pid.u_x = 0.0;
  pid.u_y = std::log(li.b() / li.a());
  pid.s = ExtReal::pos_inf();
  return pid;
}

PmLattice linear_ipm_pid(const LinearInteraction& li) {
  const auto mi = linear_mi(li);
  const double h = standard_normal_entropy();
  const double half_log_1mr2 = 0.5 * std::log1p(-li.rho() * li.rho());
  const double c = gaussian_unique_specificity(li.rho());

  PmLattice out;
  auto& lat = out.sublattices;
  // Specificity depends only on the predictor law.
  lat.r_plus = h - c;
  lat.u_x_plus = c;
  lat.u_y_plus = c;
  lat.s_plus = h + half_log_1mr2 - c;
  // Ambiguity: p(y|t) dominates p(x|t) pointwise because a < b.
  lat.r_minus = h + half_log_1mr2 + std::log(li.a() / li.sigma_t());
  lat.u_x_minus = std::log(li.b() / li.a());
  lat.u_y_minus = 0.0;
  lat.s_minus = ExtReal::neg_inf();

  auto& pid = out.atoms;
  pid.kind = PidKind::Ipm;
  pid.mi_x = mi.i_tx;
  pid.mi_y = mi.i_ty;
  pid.mi_xy = ExtReal::pos_inf();
  pid.r = lat.r_plus - lat.r_minus;
  pid.u_x = lat.u_x_plus - lat.u_x_minus;
  pid.u_y = lat.u_y_plus - lat.u_y_minus;
  pid.s = lat.s_plus - lat.s_minus;
  return out;
}

std::vector<LinearLimitRow> linear_limits(double b, double rho, std::span<const double> a_sequence) {
  std::vector<LinearLimitRow> rows;
  rows.reserve(a_sequence.size());
  double prev = b;
  for (double a : a_sequence) {
    if (!(a < prev)) {
      throw Error(ErrorCode::InvalidArgument, "a sequence must be strictly decreasing and below b");
    }
    prev = a;
    const LinearInteraction li(a, b, rho);
    LinearLimitRow row;
    row.a = a;
    row.mi = linear_mi(li);
    row.imin = linear_imin_pid(li);
    row.ipm = linear_ipm_pid(li);
    const double ity = row.mi.i_ty;
    row.uy_min_over_ity = row.imin.u_y.value() / ity;
    row.r_min_over_ity = row.imin.r.value() / ity;
    row.ux_pm_over_ity = row.ipm.atoms.u_x.value() / ity;
    row.r_pm_over_ity = row.ipm.atoms.r.value() / ity;
    row.ux_pm_over_uy_min = row.ipm.atoms.u_x.value() / row.imin.u_y.value();
    rows.push_back(row);
  }
  return rows;
}

double f_gamma(double gamma, double rho) {
  if (!(gamma >= 1.0)) throw Error(ErrorCode::InvalidArgument, "f(gamma) requires gamma >= 1");
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::InvalidArgument, "f(gamma) requires |rho| < 1");
  const double g2 = gamma * gamma;
  return std::log(gamma) - (1.0 - rho * rho) * (g2 - 1.0) / (2.0 * (g2 + 2.0 * rho * gamma + 1.0));
}

}  // namespace pidkit
