#pragma once

// Discrete probability containers and the elementary information measures.
// Every value is in nats; conversion to bits happens only at output time.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidkit/ext_real.hpp"

namespace pidkit {

/// Inputs whose total deviates from 1 by at most this much are renormalized;
/// anything further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

/// Symbols "0", "1", ..., "n-1".
std::vector<std::string> index_alphabet(std::size_t n);

class DiscreteDist {
 public:
  DiscreteDist(std::vector<std::string> support, std::vector<double> probs);

  static DiscreteDist uniform(std::size_t n);
  /// Support "0".."n-1".
  static DiscreteDist from_probs(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  const std::vector<std::string>& support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// Index of a support symbol; throws ErrorCode::Alphabet when absent.
  std::size_t index_of(std::string_view symbol) const;

 private:
  std::vector<std::string> support_;
  std::vector<double> probs_;
};

/// p(x, y) as a row-major nx-by-ny table.
class DiscreteJoint2 {
 public:
  DiscreteJoint2(std::vector<std::string> alphabet_x,
                 std::vector<std::string> alphabet_y,
                 std::vector<double> table);

  /// Index alphabets of the given sizes.
  static DiscreteJoint2 from_table(std::size_t nx, std::size_t ny,
                                   std::vector<double> table);

  std::size_t nx() const { return alphabet_x_.size(); }
  std::size_t ny() const { return alphabet_y_.size(); }
  const std::vector<std::string>& alphabet_x() const { return alphabet_x_; }
  const std::vector<std::string>& alphabet_y() const { return alphabet_y_; }
  double at(std::size_t x, std::size_t y) const { return table_[x * ny() + y]; }
  std::span<const double> table() const { return table_; }

  DiscreteDist marginal_x() const;
  DiscreteDist marginal_y() const;
  /// The same table with the roles of the two variables exchanged.
  DiscreteJoint2 transposed() const;

 private:
  std::vector<std::string> alphabet_x_;
  std::vector<std::string> alphabet_y_;
  std::vector<double> table_;
};

/// p(x, y, t) indexed as ((x * ny) + y) * nt + t.
class DiscreteJoint3 {
 public:
  DiscreteJoint3(std::vector<std::string> alphabet_x,
                 std::vector<std::string> alphabet_y,
                 std::vector<std::string> alphabet_t,
                 std::vector<double> table);

  static DiscreteJoint3 from_table(std::size_t nx, std::size_t ny, std::size_t nt,
                                   std::vector<double> table);

  std::size_t nx() const { return alphabet_x_.size(); }
  std::size_t ny() const { return alphabet_y_.size(); }
  std::size_t nt() const { return alphabet_t_.size(); }
  const std::vector<std::string>& alphabet_x() const { return alphabet_x_; }
  const std::vector<std::string>& alphabet_y() const { return alphabet_y_; }
  const std::vector<std::string>& alphabet_t() const { return alphabet_t_; }
  double at(std::size_t x, std::size_t y, std::size_t t) const {
    return table_[(x * ny() + y) * nt() + t];
  }
  std::span<const double> table() const { return table_; }

  DiscreteDist marginal_x() const;
  DiscreteDist marginal_y() const;
  DiscreteDist marginal_t() const;
  DiscreteJoint2 marginal_xy() const;
  DiscreteJoint2 marginal_xt() const;
  DiscreteJoint2 marginal_yt() const;
  /// The pair (X, Y) collapsed into one variable, jointly with T.
  DiscreteJoint2 pair_with_target() const;
  /// The same distribution with the X and Y roles exchanged.
  DiscreteJoint3 swapped_xy() const;

 private:
  std::vector<std::string> alphabet_x_;
  std::vector<std::string> alphabet_y_;
  std::vector<std::string> alphabet_t_;
  std::vector<double> table_;
};

double entropy(const DiscreteDist& dist);
double joint_entropy(const DiscreteJoint2& joint);
double joint_entropy(const DiscreteJoint3& joint);
/// H(X | Y) for the joint p(x, y).
double conditional_entropy(const DiscreteJoint2& joint);
double mutual_information(const DiscreteJoint2& joint);
/// I(T; X | Y).
double conditional_mi(const DiscreteJoint3& joint);
/// D(p || q); +inf when p is not absolutely continuous w.r.t. q. The two
/// supports must list the same symbols in the same order.
ExtReal kl_divergence(const DiscreteDist& p, const DiscreteDist& q);
/// I_X(t) = D(p(X | t) || p(X)) for a joint p(x, t); zero when p(t) = 0.
double specific_information(const DiscreteJoint2& joint_xt, std::size_t t);
double specific_information(const DiscreteJoint2& joint_xt, std::string_view t);
/// I(T; X | Y) - I(T; X). Positive for synergy-dominated triplets.
double interaction_information(const DiscreteJoint3& joint);

/// Text form of a trivariate joint:
///   alphabet x y t
///   <x> <y> <t> <prob>
///   ...
/// Symbols are whitespace-free tokens; alphabets follow first appearance;
/// absent cells have probability zero. '#' starts a comment. Errors name the
/// offending line.
DiscreteJoint3 parse_joint3(std::string_view text);
DiscreteJoint3 load_joint3(const std::string& path);

}  // namespace pidkit
