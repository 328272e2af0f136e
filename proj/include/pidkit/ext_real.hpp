#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace pidkit {

/// A real number extended with +inf, -inf and an absorbing indeterminate
/// state. Infinite atoms of continuous decompositions are carried
/// symbolically so that inf - inf surfaces as indeterminate rather than as
/// a silent NaN or a large float.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf, Indeterminate };

  constexpr ExtReal() = default;

  /// Implicit on purpose: finite doubles are the common case. IEEE infinities
  /// map to the symbolic infinities and NaN maps to indeterminate.
  ExtReal(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) {
      kind_ = Kind::Indeterminate;
    } else if (std::isinf(v)) {
      kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    } else {
      value_ = v;
    }
  }

  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }
  static ExtReal indeterminate() { return ExtReal(Kind::Indeterminate); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_indeterminate() const { return kind_ == Kind::Indeterminate; }

  /// IEEE view: +-inf for the infinities, quiet NaN when indeterminate.
  double to_double() const {
    switch (kind_) {
      case Kind::Finite: return value_;
      case Kind::PosInf: return std::numeric_limits<double>::infinity();
      case Kind::NegInf: return -std::numeric_limits<double>::infinity();
      case Kind::Indeterminate: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Finite value; callers must check is_finite() first.
  double value() const { return value_; }

  ExtReal operator-() const {
    switch (kind_) {
      case Kind::Finite: return ExtReal(-value_);
      case Kind::PosInf: return neg_inf();
      case Kind::NegInf: return pos_inf();
      case Kind::Indeterminate: break;
    }
    return indeterminate();
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.is_indeterminate() || b.is_indeterminate()) return indeterminate();
    if (a.is_finite() && b.is_finite()) return ExtReal(a.value_ + b.value_);
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    return a.kind_ == b.kind_ ? a : indeterminate();
  }

  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

  /// Scaling by a real factor; 0 * inf is indeterminate.
  friend ExtReal operator*(const ExtReal& a, double k) {
    if (a.is_indeterminate() || std::isnan(k)) return indeterminate();
    if (a.is_finite()) return ExtReal(a.value_ * k);
    if (k == 0.0) return indeterminate();
    return k > 0 ? a : -a;
  }

  friend ExtReal operator/(const ExtReal& a, double k) { return a * (1.0 / k); }

  /// Exact equality of kind and value; indeterminate equals nothing.
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.is_indeterminate() || b.is_indeterminate()) return false;
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }

 private:
  explicit constexpr ExtReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// "inf", "-inf", "nan" for the non-finite kinds, shortest round-trip
/// decimal otherwise.
std::string to_string(const ExtReal& x);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// True when both are finite and within tol, or both share the same
/// infinite kind.
bool near(const ExtReal& a, const ExtReal& b, double tol);

}  // namespace pidkit
