#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pidkit/error.hpp"
#include "pidkit/gaussian.hpp"
#include "pidkit/nfbi.hpp"

using namespace pidkit;
using std::numbers::ln2;
using std::numbers::pi;

namespace {

constexpr double kIty125 = 0.804718956217050187;    // ln sqrt 5
constexpr double kItx125 = 0.111571775657104878;    // ln(sqrt 5 / 2)
constexpr double kDiff0 = 0.393147180559945309;     // ln 2 - 3/10
constexpr double kRpm125 = 0.486409070033259516;    // ln sqrt 5 - 1/pi
constexpr double kUxPm125 = -0.374837294376154638;  // 1/pi - ln 2
constexpr double kRPlus0 = 1.10062864702088207;     // ln sqrt(2 pi e) - 1/pi

GaussianParams standard_pair(double rho) {
  GaussianParams p;
  p.mean = Eigen::Vector2d::Zero();
  p.cov.resize(2, 2);
  p.cov << 1.0, rho, rho, 1.0;
  return p;
}

LinearInteraction random_interaction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ub(0.05, 10.0), frac(0.01, 0.99), ur(-0.95, 0.95);
  const double b = ub(rng);
  return LinearInteraction(frac(rng) * b, b, ur(rng));
}

double normal_pdf(double t, double sigma) {
  return std::exp(-0.5 * t * t / (sigma * sigma)) / (sigma * std::sqrt(2.0 * pi));
}

}  // namespace

TEST_SUITE("gaussian calculus") {
  TEST_CASE("linear interaction validation") {
    CHECK_THROWS_AS(LinearInteraction(2.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(LinearInteraction(1.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(LinearInteraction(0.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(LinearInteraction(0.5, 1.0, 1.0), Error);
    CHECK(LinearInteraction(1.0, 2.0, 0.5).sigma_t() == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
  }

  TEST_CASE("transform by identity and by 2I") {
    GaussianParams p = standard_pair(0.3);
    p.mean << 1.0, -2.0;
    const auto same = gauss_linear_transform(p, Eigen::Matrix2d::Identity());
    CHECK(same.mean.isApprox(p.mean, 1e-15));
    CHECK(same.cov.isApprox(p.cov, 1e-15));

    const auto scaled = gauss_linear_transform(standard_pair(0.0), 2.0 * Eigen::Matrix2d::Identity());
    CHECK((scaled.cov - 4.0 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("transform to (X, T)") {
    const double a = 0.7, b = 1.3, rho = -0.4;
    Eigen::Matrix2d m;
    m << 1.0, 0.0, a, b;
    const auto xt = gauss_linear_transform(standard_pair(rho), m);
    const double s = LinearInteraction(a, b, rho).sigma_t();
    CHECK(std::abs(xt.cov(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(xt.cov(0, 1) - (a + rho * b)) < 1e-14);
    CHECK(std::abs(xt.cov(1, 0) - (a + rho * b)) < 1e-14);
    CHECK(std::abs(xt.cov(1, 1) - s * s) < 1e-14);
  }

  TEST_CASE("transform rejects singular or mis-sized matrices") {
    Eigen::Matrix2d sing;
    sing << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(gauss_linear_transform(standard_pair(0.0), sing), Error);
    CHECK_THROWS_AS(gauss_linear_transform(standard_pair(0.0), Eigen::Matrix3d::Identity()), Error);
  }

  TEST_CASE("params validation") {
    GaussianParams p = standard_pair(0.0);
    p.cov(0, 1) = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = standard_pair(2.0);
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK_NOTHROW(standard_pair(1.0).validate());
  }

  TEST_CASE("conditional gaussian") {
    const auto m0 = conditional_gaussian(1.5, -1.0, 2.0, 3.0, 0.0, 10.0);
    CHECK(m0.mean == 1.5);
    CHECK(m0.variance == 4.0);

    const auto copy = conditional_gaussian(0.0, 0.0, 1.0, 1.0, 1.0, 0.7);
    CHECK(std::abs(copy.mean - 0.7) < 1e-15);
    CHECK(copy.variance == 0.0);

    const LinearInteraction li(0.4, 1.1, 0.35);
    const double st = li.sigma_t(), t = -1.7;
    const double rho_xt = (li.a() + li.rho() * li.b()) / st;
    const auto xt = conditional_gaussian(0.0, 0.0, 1.0, st, rho_xt, t);
    CHECK(std::abs(xt.mean - (li.a() + li.rho() * li.b()) * t / (st * st)) < 1e-14);
    CHECK(std::abs(xt.variance - li.b() * li.b() * (1.0 - li.rho() * li.rho()) / (st * st)) < 1e-14);
  }

  TEST_CASE("kl divergence of normals") {
    CHECK(kl_gaussians(0.3, 1.7, 0.3, 1.7) == 0.0);
    CHECK(std::abs(kl_gaussians(1.0, 1.0, 0.0, 1.0) - 0.5) < 1e-15);
    CHECK(std::abs(kl_gaussians(0.0, 2.0, 0.0, 1.0) - (1.5 - ln2)) < 1e-15);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mu(-3.0, 3.0), sd(0.1, 4.0);
    for (int k = 0; k < 1000; ++k) {
      const double m = mu(rng), s = sd(rng);
      CHECK(kl_gaussians(m, s, m, s) == doctest::Approx(0.0));
      CHECK(kl_gaussians(m, s, mu(rng), sd(rng)) >= 0.0);
    }
  }
}

TEST_SUITE("linear interaction") {
  TEST_CASE("pairwise mutual informations") {
    const auto mi = linear_mi(LinearInteraction(1.0, 2.0, 0.0));
    CHECK(std::abs(mi.i_xy) < 1e-15);
    CHECK(std::abs(mi.i_tx - kItx125) < 1e-15);
    CHECK(std::abs(mi.i_ty - kIty125) < 1e-15);

    const auto near_sym = linear_mi(LinearInteraction(1.0 - 1e-9, 1.0, 0.0));
    CHECK(std::abs(near_sym.i_tx - near_sym.i_ty) < 1e-8);
  }

  TEST_CASE("I(T;X) matches the two-Gaussian formula") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
      const auto li = random_interaction(rng);
      const double r = (li.a() + li.rho() * li.b()) / li.sigma_t();
      CHECK(std::abs(linear_mi(li).i_tx - (-0.5 * std::log1p(-r * r))) < 1e-12);
    }
  }

  TEST_CASE("specific information difference") {
    const LinearInteraction li(0.6, 1.4, -0.3);
    const auto at_sigma = linear_specific_info(li, li.sigma_t());
    CHECK(std::abs(at_sigma.iy - at_sigma.ix - std::log(li.b() / li.a())) < 1e-13);

    const auto at0 = linear_specific_info(li, 0.0);
    const double s2 = li.sigma_t() * li.sigma_t();
    const double expect = std::log(li.b() / li.a()) -
                          (1.0 - li.rho() * li.rho()) * (li.b() * li.b() - li.a() * li.a()) / (2.0 * s2);
    CHECK(std::abs(at0.iy - at0.ix - expect) < 1e-13);

    const auto ex = linear_specific_info(LinearInteraction(1.0, 2.0, 0.0), 0.0);
    CHECK(std::abs(ex.iy - ex.ix - kDiff0) < 1e-15);
  }

  TEST_CASE("I_Y(t) exceeds I_X(t) on a dense grid") {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
      const auto li = random_interaction(rng);
      for (int i = 0; i < 10000; ++i) {
        const double t = li.sigma_t() * (-8.0 + 16.0 * i / 9999.0);
        const auto s = linear_specific_info(li, t);
        REQUIRE(s.iy > s.ix);
      }
    }
  }

  TEST_CASE("specific information averages to the mutual information") {
    namespace q = boost::math::quadrature;
    std::mt19937_64 rng(13);
    for (int k = 0; k < 20; ++k) {
      const auto li = random_interaction(rng);
      const double st = li.sigma_t();
      const auto mi = linear_mi(li);
      const double ex = q::gauss_kronrod<double, 61>::integrate(
          [&](double t) { return normal_pdf(t, st) * linear_specific_info(li, t).ix; }, -8.0 * st,
          8.0 * st, 15, 1e-13);
      const double ey = q::gauss_kronrod<double, 61>::integrate(
          [&](double t) { return normal_pdf(t, st) * linear_specific_info(li, t).iy; }, -8.0 * st,
          8.0 * st, 15, 1e-13);
      CHECK(std::abs(ex - mi.i_tx) < 1e-8);
      CHECK(std::abs(ey - mi.i_ty) < 1e-8);
    }
  }

  TEST_CASE("unsigned decomposition") {
    const auto p = linear_imin_pid(LinearInteraction(1.0, 2.0, 0.0));
    CHECK(std::abs(p.r.value() - kItx125) < 1e-15);
    CHECK(p.u_x.value() == 0.0);
    CHECK(std::abs(p.u_y.value() - ln2) < 1e-15);
    CHECK(p.s.is_pos_inf());
    CHECK(p.mi_xy.is_pos_inf());

    const auto close = linear_imin_pid(LinearInteraction(1.0 - 1e-12, 1.0, 0.2));
    CHECK(std::abs(close.u_y.value()) < 1e-11);
  }

  TEST_CASE("signed decomposition") {
    const auto p = linear_ipm_pid(LinearInteraction(1.0, 2.0, 0.0));
    CHECK(std::abs(p.atoms.r.value() - kRpm125) < 1e-15);
    CHECK(std::abs(p.atoms.u_x.value() - kUxPm125) < 1e-15);
    CHECK(std::abs(p.atoms.u_y.value() - 1.0 / pi) < 1e-15);
    CHECK(p.atoms.s.is_pos_inf());

    const auto& sl = p.sublattices;
    CHECK(std::abs(sl.r_plus.value() - kRPlus0) < 1e-15);
    CHECK(std::abs(sl.u_x_plus.value() - 1.0 / pi) < 1e-15);
    CHECK(std::abs(sl.u_y_plus.value() - 1.0 / pi) < 1e-15);
    CHECK(sl.s_minus.is_neg_inf());
    CHECK(std::abs(gaussian_unique_specificity(0.6) - 0.8 / pi) < 1e-16);
    CHECK(std::abs(standard_normal_entropy() - 0.5 * std::log(2.0 * pi * std::numbers::e)) < 1e-15);
  }

  TEST_CASE("signed lattice: atom equals plus minus minus") {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 200; ++k) {
      const auto p = linear_ipm_pid(random_interaction(rng));
      const auto& s = p.sublattices;
      CHECK(std::abs((s.r_plus - s.r_minus).value() - p.atoms.r.value()) < 1e-12);
      CHECK(std::abs((s.u_x_plus - s.u_x_minus).value() - p.atoms.u_x.value()) < 1e-12);
      CHECK(std::abs((s.u_y_plus - s.u_y_minus).value() - p.atoms.u_y.value()) < 1e-12);
      CHECK((s.s_plus - s.s_minus).is_pos_inf());
    }
  }

  TEST_CASE("random parameters: partial identities and conservation") {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 1000; ++k) {
      const auto li = random_interaction(rng);
      const auto mi = linear_mi(li);
      const auto m = linear_imin_pid(li);
      const auto p = linear_ipm_pid(li).atoms;
      CHECK(std::abs((m.r + m.u_x).value() - mi.i_tx) < 1e-12);
      CHECK(std::abs((m.r + m.u_y).value() - mi.i_ty) < 1e-12);
      CHECK(std::abs((p.r + p.u_x).value() - mi.i_tx) < 1e-12);
      CHECK(std::abs((p.r + p.u_y).value() - mi.i_ty) < 1e-12);

      const double shift = std::log(li.b() / li.a()) - gaussian_unique_specificity(li.rho());
      CHECK(std::abs((p.r - m.r).value() - shift) < 1e-12);
      CHECK(std::abs((p.u_x - m.u_x).value() + shift) < 1e-12);
      CHECK(std::abs((p.u_y - m.u_y).value() + shift) < 1e-12);
    }
  }

  TEST_CASE("sampling oracle for the unsigned redundancy") {
    for (const auto& li : {LinearInteraction(1.0, 2.0, 0.0), LinearInteraction(0.3, 1.0, 0.5),
                           LinearInteraction(0.8, 1.5, -0.6)}) {
      const auto est = mc_linear_redundancy_min(li, 1000000, 101);
      CHECK(est.std_error > 0.0);
      CHECK(std::abs(est.value - linear_imin_pid(li).r.value()) <= 3.0 * est.std_error);
    }
  }

  TEST_CASE("sampling oracle for the redundant specificity") {
    for (const double rho : {0.0, 0.5, -0.8}) {
      CAPTURE(rho);
      const auto est = mc_redundant_specificity(rho, 1000000, 202);
      const auto expect = linear_ipm_pid(LinearInteraction(0.5, 1.0, rho)).sublattices.r_plus.value();
      CHECK(std::abs(est.value - expect) <= 3.0 * est.std_error);
    }
  }
}

TEST_SUITE("limits") {
  TEST_CASE("unsigned redundancy approaches I(X;Y)") {
    const std::vector<double> a = {1e-6};
    const auto rows = linear_limits(1.0, 0.5, a);
    CHECK(std::abs(rows[0].imin.r.value() - (-std::log(std::sqrt(0.75)))) < 0.01);
  }

  TEST_CASE("ratios move monotonically toward their limits") {
    const std::vector<double> a = {0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9, 1e-12};
    const auto rows = linear_limits(1.0, 0.5, a);
    REQUIRE(rows.size() == a.size());
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const auto& p = rows[k - 1];
      const auto& c = rows[k];
      CHECK(c.a == a[k]);
      CHECK(std::abs(c.uy_min_over_ity - 1.0) < std::abs(p.uy_min_over_ity - 1.0));
      CHECK(std::abs(c.r_min_over_ity) < std::abs(p.r_min_over_ity));
      CHECK(std::abs(c.ux_pm_over_ity + 1.0) < std::abs(p.ux_pm_over_ity + 1.0));
      CHECK(std::abs(c.r_pm_over_ity - 1.0) < std::abs(p.r_pm_over_ity - 1.0));
      CHECK(std::abs(c.ux_pm_over_uy_min + 1.0) < std::abs(p.ux_pm_over_uy_min + 1.0));
    }
    CHECK(std::abs(rows.back().uy_min_over_ity - 1.0) < 0.01);
  }

  TEST_CASE("sequence preconditions") {
    const std::vector<double> up = {0.1, 0.2};
    const std::vector<double> big = {1.5};
    CHECK_THROWS_AS(linear_limits(1.0, 0.0, up), Error);
    CHECK_THROWS_AS(linear_limits(1.0, 0.0, big), Error);
  }

  TEST_CASE("special function") {
    CHECK(std::abs(f_gamma(1.0, 0.4)) < 1e-15);
    CHECK(std::abs(f_gamma(2.0, 0.0) - kDiff0) < 1e-15);
    CHECK_THROWS_AS(f_gamma(0.5, 0.0), Error);
    CHECK_THROWS_AS(f_gamma(2.0, 1.0), Error);
  }

  TEST_CASE("special function increases on a grid") {
    for (int r = -99; r <= 99; ++r) {
      const double rho = r / 100.0;
      double prev = f_gamma(1.0, rho);
      for (int g = 11; g <= 1000; ++g) {
        const double cur = f_gamma(g / 10.0, rho);
        REQUIRE(cur > prev);
        prev = cur;
      }
    }
  }
}
