#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <optional>
#include <vector>

#include "pidkit/error.hpp"
#include "pidkit/info.hpp"

namespace pidkit::testing {

inline const double kLn2 = std::numbers::ln2;

/// Flat Dirichlet table; every cell strictly positive.
inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) total += (x = g(rng) + 1e-300);
  for (auto& x : v) x /= total;
  return v;
}

/// Random trivariate joint with alphabet sizes drawn from [2, 4]; roughly a
/// fifth of the draws zero out some cells.
inline DiscreteJoint3 random_joint(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(2, 4);
  const std::size_t nx = size(rng), ny = size(rng), nt = size(rng);
  auto t = dirichlet(rng, nx * ny * nt);
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    std::bernoulli_distribution drop(0.3);
    double total = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (drop(rng)) t[i] = 0.0;
      total += t[i];
    }
    total += t[0];
    for (auto& x : t) x /= total;
  }
  return DiscreteJoint3::from_table(nx, ny, nt, std::move(t));
}

/// (x, y, t) with X, Y i.i.d. uniform bits and t = 2x + y.
inline DiscreteJoint3 two_bit_copy() {
  std::vector<double> t(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) t[(x * 2 + y) * 4 + (2 * x + y)] = 0.25;
  return DiscreteJoint3::from_table(2, 2, 4, std::move(t));
}

inline DiscreteJoint3 xor_joint() {
  std::vector<double> t(8, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) t[(x * 2 + y) * 2 + (x ^ y)] = 0.25;
  return DiscreteJoint3::from_table(2, 2, 2, std::move(t));
}

/// X = Y = T, uniform bit.
inline DiscreteJoint3 triple_copy() {
  std::vector<double> t(8, 0.0);
  t[0] = 0.5;
  t[7] = 0.5;
  return DiscreteJoint3::from_table(2, 2, 2, std::move(t));
}

/// X, Y, T independent uniform bits.
inline DiscreteJoint3 independent_bits() { return DiscreteJoint3::from_table(2, 2, 2, std::vector<double>(8, 0.125)); }

/// T = Y and X a random noisy channel of Y, so X is independent of T given Y.
inline DiscreteJoint3 ci_joint(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(2, 4);
  const std::size_t nx = size(rng), ny = size(rng);
  const auto py = dirichlet(rng, ny);
  std::vector<double> t(nx * ny * ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    const auto px_y = dirichlet(rng, nx);
    for (std::size_t x = 0; x < nx; ++x) t[(x * ny + y) * ny + y] = py[y] * px_y[x];
  }
  return DiscreteJoint3::from_table(nx, ny, ny, std::move(t));
}

/// Code of the pidkit::Error thrown by f, or nullopt if it returned.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace pidkit::testing
