#include "pidkit/ext_real.hpp"

#include <array>
#include <charconv>

namespace pidkit {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string to_string(const ExtReal& x) { return format_double(x.to_double()); }

bool near(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value()) <= tol;
  return a == b;
}

}  // namespace pidkit
