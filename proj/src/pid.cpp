#include "pidkit/pid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "pidkit/error.hpp"

namespace pidkit {

std::string_view to_string(PidKind kind) { return kind == PidKind::Imin ? "imin" : "ipm"; }

PidKind parse_pid_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "imin" || s == "min") return PidKind::Imin;
  if (s == "ipm" || s == "pm") return PidKind::Ipm;
  throw Error(ErrorCode::InvalidArgument, "unknown PID kind '" + std::string(text) + "'");
}

BivariatePid pid_from_redundancy(ExtReal redundancy, ExtReal mi_x, ExtReal mi_y,
                                 ExtReal mi_xy, PidKind kind) {
  BivariatePid pid;
  pid.kind = kind;
  pid.mi_x = mi_x;
  pid.mi_y = mi_y;
  pid.mi_xy = mi_xy;
  pid.r = redundancy;
  pid.u_x = mi_x - redundancy;
  pid.u_y = mi_y - redundancy;
  pid.s = mi_xy - mi_x - mi_y + redundancy;
  return pid;
}

double imin_redundancy(std::span<const DiscreteJoint2> source_target_joints) {
  if (source_target_joints.empty()) {
    throw Error(ErrorCode::InvalidArgument, "redundancy needs at least one source");
  }
  const auto pt = source_target_joints.front().marginal_y();
  for (const auto& j : source_target_joints) {
    if (j.alphabet_y() != pt.support()) {
      throw Error(ErrorCode::Alphabet, "sources disagree on the target alphabet");
    }
  }
  double r = 0.0;
  for (std::size_t t = 0; t < pt.size(); ++t) {
    if (pt[t] <= 0.0) continue;
    double m = specific_information(source_target_joints.front(), t);
    for (const auto& j : source_target_joints.subspan(1)) {
      m = std::min(m, specific_information(j, t));
    }
    r += pt[t] * m;
  }
  return r;
}

double imin_redundancy(const DiscreteJoint3& joint) {
  const DiscreteJoint2 sources[] = {joint.marginal_xt(), joint.marginal_yt()};
  return imin_redundancy(std::span<const DiscreteJoint2>(sources));
}

BivariatePid imin_pid(const DiscreteJoint3& joint) {
  const double mi_x = mutual_information(joint.marginal_xt());
  const double mi_y = mutual_information(joint.marginal_yt());
  const double mi_xy = mutual_information(joint.pair_with_target());
  return pid_from_redundancy(imin_redundancy(joint), mi_x, mi_y, mi_xy, PidKind::Imin);
}

PmSublattices ipm_sublattices(const DiscreteJoint3& joint) {
  const auto px = joint.marginal_x();
  const auto py = joint.marginal_y();
  const auto pt = joint.marginal_t();
  const auto pxt = joint.marginal_xt();
  const auto pyt = joint.marginal_yt();

  // Expected pointwise minima of the marginal and target-conditional
  // surprisals.
  double r_plus = 0.0;
  double r_minus = 0.0;
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t y = 0; y < joint.ny(); ++y) {
      for (std::size_t t = 0; t < joint.nt(); ++t) {
        const double p = joint.at(x, y, t);
        if (p <= 0.0) continue;
        r_plus += p * std::min(-std::log(px[x]), -std::log(py[y]));
        r_minus += p * std::min(-std::log(pxt.at(x, t) / pt[t]),
                                -std::log(pyt.at(y, t) / pt[t]));
      }
    }
  }

  const double hx = entropy(px);
  const double hy = entropy(py);
  const double hxy = joint_entropy(joint.marginal_xy());
  const double ht = entropy(pt);
  const double hx_t = joint_entropy(pxt) - ht;
  const double hy_t = joint_entropy(pyt) - ht;
  const double hxy_t = joint_entropy(joint) - ht;

  PmSublattices s;
  s.r_plus = r_plus;
  s.u_x_plus = hx - r_plus;
  s.u_y_plus = hy - r_plus;
  s.s_plus = hxy - hx - hy + r_plus;
  s.r_minus = r_minus;
  s.u_x_minus = hx_t - r_minus;
  s.u_y_minus = hy_t - r_minus;
  s.s_minus = hxy_t - hx_t - hy_t + r_minus;
  return s;
}

BivariatePid ipm_pid(const DiscreteJoint3& joint) {
  const auto lat = ipm_sublattices(joint);
  BivariatePid pid;
  pid.kind = PidKind::Ipm;
  pid.r = lat.r_plus - lat.r_minus;
  pid.u_x = lat.u_x_plus - lat.u_x_minus;
  pid.u_y = lat.u_y_plus - lat.u_y_minus;
  pid.s = lat.s_plus - lat.s_minus;
  pid.mi_x = mutual_information(joint.marginal_xt());
  pid.mi_y = mutual_information(joint.marginal_yt());
  pid.mi_xy = mutual_information(joint.pair_with_target());
  return pid;
}

BivariatePid compute_pid(const DiscreteJoint3& joint, PidKind kind) {
  return kind == PidKind::Imin ? imin_pid(joint) : ipm_pid(joint);
}

ConservationReport pid_conservation_check(const BivariatePid& p1, const BivariatePid& p2,
                                          double tol) {
  if (!near(p1.mi_x, p2.mi_x, tol) || !near(p1.mi_y, p2.mi_y, tol) ||
      !near(p1.mi_xy, p2.mi_xy, tol)) {
    throw Error(ErrorCode::InvalidArgument,
                "conservation check needs two PIDs of the same distribution");
  }
  ConservationReport rep;
  if (!p1.r.is_finite() || !p2.r.is_finite()) {
    rep.holds = true;
    return rep;
  }
  rep.delta = p2.r.value() - p1.r.value();
  auto check = [&](const ExtReal& a, const ExtReal& b, double sign) {
    if (!a.is_finite() || !b.is_finite()) return;
    const double d = sign * (b.value() - a.value());
    rep.max_deviation = std::max(rep.max_deviation, std::abs(d - rep.delta));
  };
  check(p1.s, p2.s, 1.0);
  check(p1.u_x, p2.u_x, -1.0);
  check(p1.u_y, p2.u_y, -1.0);
  rep.holds = rep.max_deviation <= tol;
  return rep;
}

CiAuditReport conditional_independence_audit(const DiscreteJoint3& joint, PidKind kind) {
  const auto pid = compute_pid(joint, kind);
  CiAuditReport rep;
  rep.cmi = conditional_mi(joint);
  rep.u_x = pid.u_x;
  rep.s = pid.s;
  rep.conditionally_independent = rep.cmi < kCiThreshold;
  auto big = [](const ExtReal& v) {
    return !v.is_finite() || std::abs(v.value()) > kCiAtomThreshold;
  };
  rep.violation = rep.conditionally_independent && (big(pid.u_x) || big(pid.s));
  return rep;
}

}  // namespace pidkit
