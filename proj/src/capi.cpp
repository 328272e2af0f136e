#include "pidkit.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <numbers>
#include <string>
#include <vector>

#include "pidkit/error.hpp"
#include "pidkit/gaussian.hpp"
#include "pidkit/harness.hpp"
#include "pidkit/network.hpp"
#include "pidkit/nfbi.hpp"
#include "pidkit/pid.hpp"

#ifndef PIDKIT_VERSION
#define PIDKIT_VERSION "0.0.0"
#endif

struct pidkit_joint {
  pidkit::DiscreteJoint3 joint;
};

struct pidkit_kernel {
  pidkit::NfbiKernel kernel;
};

struct pidkit_network {
  std::shared_ptr<const pidkit::InteractionNetwork> network;
};

struct pidkit_experiment {
  pidkit::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

pidkit_status fail(pidkit_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping library exceptions to status codes.
template <class Fn>
pidkit_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PIDKIT_OK;
  } catch (const pidkit::Error& e) {
    return fail(static_cast<pidkit_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PIDKIT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PIDKIT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PIDKIT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw pidkit::Error(pidkit::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

pidkit::PidKind to_kind(pidkit_kind kind) {
  switch (kind) {
    case PIDKIT_IMIN: return pidkit::PidKind::Imin;
    case PIDKIT_IPM: return pidkit::PidKind::Ipm;
  }
  throw pidkit::Error(pidkit::ErrorCode::InvalidArgument, "unknown PID kind");
}

pidkit_pid to_c(const pidkit::BivariatePid& p) {
  return {p.r.to_double(),    p.u_x.to_double(),  p.u_y.to_double(), p.s.to_double(),
          p.mi_x.to_double(), p.mi_y.to_double(), p.mi_xy.to_double()};
}

pidkit_sublattices to_c(const pidkit::PmSublattices& s) {
  return {s.r_plus.to_double(),  s.u_x_plus.to_double(),  s.u_y_plus.to_double(),
          s.s_plus.to_double(),  s.r_minus.to_double(),   s.u_x_minus.to_double(),
          s.u_y_minus.to_double(), s.s_minus.to_double()};
}

pidkit_estimate to_c(const pidkit::McEstimate& e) {
  return {e.value, e.std_error, e.n_samples, e.seed, e.excluded};
}

void copy_out(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    const std::size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
}

const double kDefaultBetaGrid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
const double kDefaultAlphaGrid[] = {-4.0, -2.0, 0.0, 2.0, 4.0};

}  // namespace

extern "C" {

const char* pidkit_version(void) { return PIDKIT_VERSION; }

const char* pidkit_last_error(void) { return g_last_error.c_str(); }

const char* pidkit_status_name(pidkit_status status) {
  switch (status) {
    case PIDKIT_OK: return "ok";
    case PIDKIT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PIDKIT_ERR_VALIDITY: return "invalid distribution";
    case PIDKIT_ERR_ALPHABET: return "alphabet mismatch";
    case PIDKIT_ERR_PARSE: return "parse error";
    case PIDKIT_ERR_DEGENERATE_INPUT: return "degenerate input";
    case PIDKIT_ERR_NOT_POSITIVE_DEFINITE: return "covariance not positive definite";
    case PIDKIT_ERR_UNSUPPORTED: return "unsupported";
    case PIDKIT_ERR_ESTIMATION: return "estimation failure";
    case PIDKIT_ERR_IO: return "i/o error";
    case PIDKIT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pidkit_status pidkit_joint_from_table(size_t nx, size_t ny, size_t nt, const double* table,
                                      pidkit_joint** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    std::vector<double> cells(table, table + nx * ny * nt);
    *out = new pidkit_joint{pidkit::DiscreteJoint3::from_table(nx, ny, nt, std::move(cells))};
  });
}

pidkit_status pidkit_joint_parse(const char* text, pidkit_joint** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new pidkit_joint{pidkit::parse_joint3(text)};
  });
}

pidkit_status pidkit_joint_load(const char* path, pidkit_joint** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pidkit_joint{pidkit::load_joint3(path)};
  });
}

void pidkit_joint_free(pidkit_joint* joint) { delete joint; }

pidkit_status pidkit_joint_dims(const pidkit_joint* joint, size_t* nx, size_t* ny, size_t* nt) {
  return guarded([&] {
    require(joint, "joint");
    if (nx) *nx = joint->joint.nx();
    if (ny) *ny = joint->joint.ny();
    if (nt) *nt = joint->joint.nt();
  });
}

pidkit_status pidkit_compute_pid(const pidkit_joint* joint, pidkit_kind kind, pidkit_pid* out) {
  return guarded([&] {
    require(joint, "joint");
    require(out, "out");
    *out = to_c(pidkit::compute_pid(joint->joint, to_kind(kind)));
  });
}

pidkit_status pidkit_pm_sublattices(const pidkit_joint* joint, pidkit_sublattices* out) {
  return guarded([&] {
    require(joint, "joint");
    require(out, "out");
    *out = to_c(pidkit::ipm_sublattices(joint->joint));
  });
}

pidkit_status pidkit_ci_audit(const pidkit_joint* joint, pidkit_kind kind, pidkit_ci_report* out) {
  return guarded([&] {
    require(joint, "joint");
    require(out, "out");
    const auto r = pidkit::conditional_independence_audit(joint->joint, to_kind(kind));
    *out = {r.cmi, r.u_x.to_double(), r.s.to_double(), r.conditionally_independent ? 1 : 0,
            r.violation ? 1 : 0};
  });
}

pidkit_status pidkit_linear_analyze(double a, double b, double rho, pidkit_linear_report* out) {
  return guarded([&] {
    require(out, "out");
    const pidkit::LinearInteraction li(a, b, rho);
    const double seq[] = {a};
    const auto row = pidkit::linear_limits(b, rho, seq).front();
    pidkit_linear_report r{};
    r.sigma_t = li.sigma_t();
    r.i_xy = row.mi.i_xy;
    r.i_tx = row.mi.i_tx;
    r.i_ty = row.mi.i_ty;
    r.imin = to_c(row.imin);
    r.ipm = to_c(row.ipm.atoms);
    r.pm_lattice = to_c(row.ipm.sublattices);
    r.unique_specificity = pidkit::gaussian_unique_specificity(rho);
    r.uy_min_over_ity = row.uy_min_over_ity;
    r.r_min_over_ity = row.r_min_over_ity;
    r.ux_pm_over_ity = row.ux_pm_over_ity;
    r.r_pm_over_ity = row.r_pm_over_ity;
    r.ux_pm_over_uy_min = row.ux_pm_over_uy_min;
    *out = r;
  });
}

pidkit_status pidkit_f_gamma(double gamma, double rho, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pidkit::f_gamma(gamma, rho);
  });
}

pidkit_status pidkit_kernel_parse(const char* spec, pidkit_kernel** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new pidkit_kernel{pidkit::NfbiKernel::parse(spec)};
  });
}

void pidkit_kernel_free(pidkit_kernel* kernel) { delete kernel; }

pidkit_status pidkit_kernel_spec(const pidkit_kernel* kernel, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(kernel, "kernel");
    copy_out(kernel->kernel.spec(), buf, cap, needed);
  });
}

void pidkit_mc_options_default(pidkit_mc_options* options) {
  if (!options) return;
  options->n_samples = 1000000;
  options->seed = 0;
  options->t_bins = pidkit::kDefaultTBins;
  options->workers = 0;
}

pidkit_status pidkit_mc_run(const pidkit_kernel* kernel, double rho, const pidkit_mc_options* options,
                            pidkit_mc_report* out) {
  return guarded([&] {
    require(kernel, "kernel");
    require(options, "options");
    require(out, "out");
    const auto& k = kernel->kernel;
    const auto n = options->n_samples;
    const auto seed = options->seed;
    const auto w = options->workers;
    const auto umin = pidkit::mc_umin(k, rho, n, options->t_bins, seed, w);
    const auto amb_x = pidkit::mc_upm_ambiguity_x(k, rho, n, seed, w);
    const auto amb_y = pidkit::mc_upm_ambiguity_y(k, rho, n, seed, w);
    const double c = pidkit::gaussian_unique_specificity(rho);

    pidkit_mc_report r{};
    r.umin_x = to_c(umin.u_x);
    r.umin_y = to_c(umin.u_y);
    r.upm_x_ambiguity = to_c(amb_x);
    r.upm_y_ambiguity = to_c(amb_y);
    r.upm_x = r.upm_x_ambiguity;
    r.upm_x.value = c - amb_x.value;
    r.upm_y = r.upm_y_ambiguity;
    r.upm_y.value = c - amb_y.value;
    r.unique_specificity = c;
    r.t_bins_used = umin.t_bins_used;
    r.bins_reduced = umin.bins_reduced ? 1 : 0;
    r.mi_xy = pidkit::infinite_mi_flag(k).to_double();
    if (k.family() == pidkit::NfbiKernel::Family::Linear && k.coef_a() > 0.0 &&
        k.coef_a() < k.coef_b()) {
      const pidkit::LinearInteraction li(k.coef_a(), k.coef_b(), rho);
      const auto imin = pidkit::linear_imin_pid(li);
      const auto ipm = pidkit::linear_ipm_pid(li);
      r.has_closed_form = 1;
      r.closed_umin_x = imin.u_x.to_double();
      r.closed_umin_y = imin.u_y.to_double();
      r.closed_upm_x = ipm.atoms.u_x.to_double();
      r.closed_upm_y = ipm.atoms.u_y.to_double();
    }
    *out = r;
  });
}

pidkit_status pidkit_network_parse(const char* text, pidkit_network** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new pidkit_network{
        std::make_shared<const pidkit::InteractionNetwork>(pidkit::parse_network_spec(text))};
  });
}

pidkit_status pidkit_network_load(const char* path, pidkit_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pidkit_network{
        std::make_shared<const pidkit::InteractionNetwork>(pidkit::load_network_spec(path))};
  });
}

void pidkit_network_free(pidkit_network* network) { delete network; }

size_t pidkit_network_nodes(const pidkit_network* network) {
  return network ? network->network->n_nodes() : 0;
}

void pidkit_experiment_config_default(pidkit_experiment_config* config) {
  if (!config) return;
  const pidkit::ExperimentConfig d;
  config->batches = d.batches;
  config->n_per_batch = d.n_per_batch;
  config->bins = d.bins;
  config->rho = d.rho;
  config->alpha = d.alpha;
  config->k = d.k;
  config->beta_grid = kDefaultBetaGrid;
  config->n_beta = std::size(kDefaultBetaGrid);
  config->alpha_grid = kDefaultAlphaGrid;
  config->n_alpha = std::size(kDefaultAlphaGrid);
  config->seed = d.seed;
  config->workers = d.workers;
  config->network = nullptr;
}

pidkit_status pidkit_experiment_run(int id, const pidkit_experiment_config* config,
                                    pidkit_experiment** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    if (config->n_beta && !config->beta_grid) require(nullptr, "beta_grid");
    if (config->n_alpha && !config->alpha_grid) require(nullptr, "alpha_grid");
    pidkit::ExperimentConfig c;
    c.batches = config->batches;
    c.n_per_batch = config->n_per_batch;
    c.bins = config->bins;
    c.rho = config->rho;
    c.alpha = config->alpha;
    c.k = config->k;
    c.beta_grid.assign(config->beta_grid, config->beta_grid + config->n_beta);
    c.alpha_grid.assign(config->alpha_grid, config->alpha_grid + config->n_alpha);
    c.seed = config->seed;
    c.workers = config->workers;
    if (config->network) c.network = config->network->network;
    *out = new pidkit_experiment{pidkit::run_experiment(id, c)};
  });
}

void pidkit_experiment_free(pidkit_experiment* experiment) { delete experiment; }

size_t pidkit_experiment_rows(const pidkit_experiment* experiment) {
  if (!experiment) return 0;
  size_t n = 0;
  for (const auto& s : experiment->result.scans) n += s.pairs.size();
  return n;
}

pidkit_status pidkit_experiment_write(const pidkit_experiment* experiment, const char* dir,
                                      int units_bits) {
  return guarded([&] {
    require(experiment, "experiment");
    require(dir, "dir");
    pidkit::write_experiment_outputs(experiment->result, dir, units_bits ? std::numbers::ln2 : 1.0);
  });
}

pidkit_status pidkit_experiment_summary(const pidkit_experiment* experiment, int units_bits,
                                        char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(experiment, "experiment");
    const auto j = pidkit::summary_json(experiment->result, units_bits ? std::numbers::ln2 : 1.0);
    copy_out(j.dump(2), buf, cap, needed);
  });
}

}  // extern "C"
