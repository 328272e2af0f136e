#pragma once

// Bivariate partial information decompositions of discrete trivariate
// distributions: the unsigned expected-minimum-specific-information PID and
// the signed pointwise PID built from specificity and ambiguity sublattices.

#include <span>
#include <string_view>

#include "pidkit/ext_real.hpp"
#include "pidkit/info.hpp"

namespace pidkit {

enum class PidKind { Imin, Ipm };

std::string_view to_string(PidKind kind);
/// Accepts "imin"/"min" and "ipm"/"pm" case-insensitively.
PidKind parse_pid_kind(std::string_view text);

/// The four atoms plus the three mutual informations they partition:
///   mi_x  = r + u_x
///   mi_y  = r + u_y
///   mi_xy = r + u_x + u_y + s
struct BivariatePid {
  ExtReal r, u_x, u_y, s;
  ExtReal mi_x, mi_y, mi_xy;
  PidKind kind = PidKind::Imin;
};

/// Specificity (plus) and ambiguity (minus) decompositions; each atom of the
/// signed PID is plus minus minus.
struct PmSublattices {
  ExtReal r_plus, u_x_plus, u_y_plus, s_plus;
  ExtReal r_minus, u_x_minus, u_y_minus, s_minus;
};

/// Builds the atoms from a redundancy value and the three MIs.
BivariatePid pid_from_redundancy(ExtReal redundancy, ExtReal mi_x, ExtReal mi_y,
                                 ExtReal mi_xy, PidKind kind);

/// E_T min_k I_{X_k}(T) over any number of sources, each given as its joint
/// with the common target (second variable). One source yields I(T; X).
double imin_redundancy(std::span<const DiscreteJoint2> source_target_joints);
double imin_redundancy(const DiscreteJoint3& joint);
BivariatePid imin_pid(const DiscreteJoint3& joint);

PmSublattices ipm_sublattices(const DiscreteJoint3& joint);
BivariatePid ipm_pid(const DiscreteJoint3& joint);

BivariatePid compute_pid(const DiscreteJoint3& joint, PidKind kind);

/// Two PIDs of the same distribution share their MIs, so any change in one
/// atom forces dR = dS = -dU_X = -dU_Y.
struct ConservationReport {
  double delta = 0.0;          ///< common dR
  double max_deviation = 0.0;  ///< largest departure from the identity
  bool holds = false;
};

/// Throws ErrorCode::InvalidArgument when the MI triples differ by more than
/// tol. Infinite atoms are skipped.
ConservationReport pid_conservation_check(const BivariatePid& p1, const BivariatePid& p2,
                                          double tol = 1e-10);

struct CiAuditReport {
  double cmi = 0.0;  ///< I(T; X | Y)
  ExtReal u_x;
  ExtReal s;
  bool conditionally_independent = false;  ///< cmi below the CI threshold
  bool violation = false;                  ///< CI holds but U_X or S is nonzero
};

inline constexpr double kCiThreshold = 1e-10;
inline constexpr double kCiAtomThreshold = 1e-8;

CiAuditReport conditional_independence_audit(const DiscreteJoint3& joint, PidKind kind);

}  // namespace pidkit
