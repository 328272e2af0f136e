// pidkit command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pidkit.h"

namespace {

struct CliError {
  pidkit_status status;
  std::string message;
};

void check(pidkit_status s) {
  if (s != PIDKIT_OK) throw CliError{s, pidkit_last_error()};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Resolved configuration echoed into every manifest, in the key=value form
// that --config reads back.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
  void add(const std::string& key, double v) { add(key, num(v)); }
  void add_count(const std::string& key, unsigned long long v) { add(key, std::to_string(v)); }

  std::string str(unsigned long long seed, bool has_seed) const {
    std::ostringstream out;
    out << "# pidkit " << pidkit_version() << '\n';
    if (has_seed) out << "# master seed " << seed << '\n';
    out << '[' << command_ << "]\n";
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
    return out.str();
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Units {
  std::string name = "nats";
  double scale() const { return name == "bits" ? std::numbers::ln2 : 1.0; }
};

// Writes text results and the manifest under out, or prints the manifest as
// comment lines ahead of the results when no directory was requested.
void emit(const std::string& out_dir, const std::string& manifest, const std::string& body) {
  if (out_dir.empty()) {
    std::istringstream lines(manifest);
    for (std::string line; std::getline(lines, line);) {
      std::cout << (line.rfind("# ", 0) == 0 ? line : "# " + line) << '\n';
    }
    std::cout << body;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw CliError{PIDKIT_ERR_IO, "cannot create '" + out_dir + "': " + ec.message()};
  const std::filesystem::path dir(out_dir);
  for (const auto& [name, text] : {std::pair{"manifest.ini", &manifest}, std::pair{"results.txt", &body}}) {
    std::ofstream f(dir / name, std::ios::binary);
    f << *text;
    if (!f) throw CliError{PIDKIT_ERR_IO, "cannot write " + (dir / name).string()};
  }
  std::cout << body;
}

void write_manifest_file(const std::string& out_dir, const std::string& manifest) {
  std::ofstream f(std::filesystem::path(out_dir) / "manifest.ini", std::ios::binary);
  f << manifest;
  if (!f) throw CliError{PIDKIT_ERR_IO, "cannot write manifest in " + out_dir};
}

void print_pid(std::ostream& out, const char* label, const pidkit_pid& p, double scale) {
  out << label << " R " << num(p.r / scale) << '\n'
      << label << " U_X " << num(p.u_x / scale) << '\n'
      << label << " U_Y " << num(p.u_y / scale) << '\n'
      << label << " S " << num(p.s / scale) << '\n'
      << label << " MI_X " << num(p.mi_x / scale) << '\n'
      << label << " MI_Y " << num(p.mi_y / scale) << '\n'
      << label << " MI_XY " << num(p.mi_xy / scale) << '\n';
}

void print_lattice(std::ostream& out, const pidkit_sublattices& s, double scale) {
  out << "ipm R+ " << num(s.r_plus / scale) << '\n'
      << "ipm U_X+ " << num(s.u_x_plus / scale) << '\n'
      << "ipm U_Y+ " << num(s.u_y_plus / scale) << '\n'
      << "ipm S+ " << num(s.s_plus / scale) << '\n'
      << "ipm R- " << num(s.r_minus / scale) << '\n'
      << "ipm U_X- " << num(s.u_x_minus / scale) << '\n'
      << "ipm U_Y- " << num(s.u_y_minus / scale) << '\n'
      << "ipm S- " << num(s.s_minus / scale) << '\n';
}

struct Joint {
  pidkit_joint* p = nullptr;
  ~Joint() { pidkit_joint_free(p); }
};
struct Kernel {
  pidkit_kernel* p = nullptr;
  ~Kernel() { pidkit_kernel_free(p); }
};
struct Network {
  pidkit_network* p = nullptr;
  ~Network() { pidkit_network_free(p); }
};
struct Experiment {
  pidkit_experiment* p = nullptr;
  ~Experiment() { pidkit_experiment_free(p); }
};

// ---------------------------------------------------------------------------

struct PidArgs {
  std::string file;
  std::string kind = "both";
  Units units;
  std::string out;
};

void run_pid(const PidArgs& a) {
  Joint joint;
  check(pidkit_joint_load(a.file.c_str(), &joint.p));
  std::ostringstream body;
  body << "units " << a.units.name << '\n';
  const bool want_min = a.kind == "both" || a.kind == "imin";
  const bool want_pm = a.kind == "both" || a.kind == "ipm";
  if (want_min) {
    pidkit_pid p;
    check(pidkit_compute_pid(joint.p, PIDKIT_IMIN, &p));
    print_pid(body, "imin", p, a.units.scale());
  }
  if (want_pm) {
    pidkit_pid p;
    pidkit_sublattices s;
    check(pidkit_compute_pid(joint.p, PIDKIT_IPM, &p));
    check(pidkit_pm_sublattices(joint.p, &s));
    print_pid(body, "ipm", p, a.units.scale());
    print_lattice(body, s, a.units.scale());
  }
  Manifest m("pid");
  m.add("file", quoted(a.file));
  m.add("kind", quoted(a.kind));
  m.add("units", quoted(a.units.name));
  m.add("out", quoted(a.out));
  emit(a.out, m.str(0, false), body.str());
}

struct LinearArgs {
  double a = 1.0;
  double b = 2.0;
  double rho = 0.0;
  Units units;
  std::string out;
};

void run_linear(const LinearArgs& a) {
  pidkit_linear_report r;
  check(pidkit_linear_analyze(a.a, a.b, a.rho, &r));
  const double k = a.units.scale();
  std::ostringstream body;
  body << "units " << a.units.name << '\n'
       << "sigma_T " << num(r.sigma_t) << '\n'
       << "I(X;Y) " << num(r.i_xy / k) << '\n'
       << "I(T;X) " << num(r.i_tx / k) << '\n'
       << "I(T;Y) " << num(r.i_ty / k) << '\n'
       << "unique_specificity " << num(r.unique_specificity / k) << '\n';
  print_pid(body, "imin", r.imin, k);
  print_pid(body, "ipm", r.ipm, k);
  print_lattice(body, r.pm_lattice, k);
  body << "ratio U_Y^min/I(T;Y) " << num(r.uy_min_over_ity) << '\n'
       << "ratio R^min/I(T;Y) " << num(r.r_min_over_ity) << '\n'
       << "ratio U_X^pm/I(T;Y) " << num(r.ux_pm_over_ity) << '\n'
       << "ratio R^pm/I(T;Y) " << num(r.r_pm_over_ity) << '\n'
       << "ratio U_X^pm/U_Y^min " << num(r.ux_pm_over_uy_min) << '\n';
  Manifest m("analytic-linear");
  m.add("a", a.a);
  m.add("b", a.b);
  m.add("rho", a.rho);
  m.add("units", quoted(a.units.name));
  m.add("out", quoted(a.out));
  emit(a.out, m.str(0, false), body.str());
}

struct McArgs {
  std::string kernel = "sigmoidal:0";
  double rho = 0.0;
  unsigned long long samples = 1000000;
  unsigned long long seed = 0;
  std::size_t t_bins = 50;
  unsigned workers = 0;
  Units units;
  std::string out;
};

void print_estimate(std::ostream& out, const char* name, const pidkit_estimate& e, double k) {
  out << name << ' ' << num(e.value / k) << " +- " << num(e.std_error / k) << " n=" << e.n_samples
      << " excluded=" << e.excluded << '\n';
}

void run_mc(const McArgs& a) {
  Kernel kernel;
  check(pidkit_kernel_parse(a.kernel.c_str(), &kernel.p));
  pidkit_mc_options opt;
  pidkit_mc_options_default(&opt);
  opt.n_samples = a.samples;
  opt.seed = a.seed;
  opt.t_bins = a.t_bins;
  opt.workers = a.workers;
  pidkit_mc_report r;
  check(pidkit_mc_run(kernel.p, a.rho, &opt, &r));

  char spec[128];
  std::size_t needed = 0;
  check(pidkit_kernel_spec(kernel.p, spec, sizeof spec, &needed));
  const double k = a.units.scale();
  std::ostringstream body;
  body << "units " << a.units.name << '\n' << "kernel " << spec << '\n' << "rho " << num(a.rho) << '\n';
  print_estimate(body, "U_X^min", r.umin_x, k);
  print_estimate(body, "U_Y^min", r.umin_y, k);
  print_estimate(body, "U_X^pm", r.upm_x, k);
  print_estimate(body, "U_Y^pm", r.upm_y, k);
  print_estimate(body, "U_X^pm_ambiguity", r.upm_x_ambiguity, k);
  print_estimate(body, "U_Y^pm_ambiguity", r.upm_y_ambiguity, k);
  body << "unique_specificity " << num(r.unique_specificity / k) << '\n'
       << "t_bins_used " << r.t_bins_used << (r.bins_reduced ? " (reduced)" : "") << '\n'
       << "I(T;X,Y) " << num(r.mi_xy) << '\n';
  if (r.has_closed_form) {
    body << "closed U_X^min " << num(r.closed_umin_x / k) << '\n'
         << "closed U_Y^min " << num(r.closed_umin_y / k) << '\n'
         << "closed U_X^pm " << num(r.closed_upm_x / k) << '\n'
         << "closed U_Y^pm " << num(r.closed_upm_y / k) << '\n';
  }
  Manifest m("mc");
  m.add("kernel", quoted(spec));
  m.add("rho", a.rho);
  m.add_count("samples", a.samples);
  m.add_count("seed", a.seed);
  m.add_count("t-bins", a.t_bins);
  m.add_count("workers", a.workers);
  m.add("units", quoted(a.units.name));
  m.add("out", quoted(a.out));
  emit(a.out, m.str(a.seed, true), body.str());
}

struct ExperimentArgs {
  int id = 1;
  std::size_t batches = 20;
  std::size_t samples = 200;
  std::size_t bins = 3;
  double rho = 0.3;
  double alpha = 0.0;
  std::size_t k = 1;
  std::vector<double> beta{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> alpha_grid{-4.0, -2.0, 0.0, 2.0, 4.0};
  unsigned long long seed = 0;
  unsigned workers = 0;
  std::string network;
  Units units;
  std::string out = "pidkit-out";
};

void run_experiment(const ExperimentArgs& a) {
  pidkit_experiment_config c;
  pidkit_experiment_config_default(&c);
  c.batches = a.batches;
  c.n_per_batch = a.samples;
  c.bins = a.bins;
  c.rho = a.rho;
  c.alpha = a.alpha;
  c.k = a.k;
  c.beta_grid = a.beta.data();
  c.n_beta = a.beta.size();
  c.alpha_grid = a.alpha_grid.data();
  c.n_alpha = a.alpha_grid.size();
  c.seed = a.seed;
  c.workers = a.workers;
  Network net;
  if (!a.network.empty()) {
    check(pidkit_network_load(a.network.c_str(), &net.p));
    c.network = net.p;
  }
  Experiment exp;
  check(pidkit_experiment_run(a.id, &c, &exp.p));
  check(pidkit_experiment_write(exp.p, a.out.c_str(), a.units.name == "bits"));

  Manifest m("experiment");
  m.add_count("id", static_cast<unsigned long long>(a.id));
  m.add_count("batches", a.batches);
  m.add_count("samples", a.samples);
  m.add_count("bins", a.bins);
  m.add("rho", a.rho);
  m.add("alpha", a.alpha);
  m.add_count("k", a.k);
  m.add("beta", num_list(a.beta));
  m.add("alpha-grid", num_list(a.alpha_grid));
  m.add_count("seed", a.seed);
  m.add_count("workers", a.workers);
  m.add("network", quoted(a.network));
  m.add("units", quoted(a.units.name));
  m.add("out", quoted(a.out));
  write_manifest_file(a.out, m.str(a.seed, true));

  std::size_t needed = 0;
  check(pidkit_experiment_summary(exp.p, a.units.name == "bits", nullptr, 0, &needed));
  std::string summary(needed + 1, '\0');
  check(pidkit_experiment_summary(exp.p, a.units.name == "bits", summary.data(), summary.size(), &needed));
  summary.resize(needed);
  std::cout << "experiment " << a.id << ": " << pidkit_experiment_rows(exp.p)
            << " rows per PID kind written to " << a.out << '\n'
            << summary << '\n';
}

void add_units(CLI::App* app, Units& units) {
  app->add_option("--units", units.name, "Output units")
      ->check(CLI::IsMember({"nats", "bits"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial information decompositions of discrete joints, linear Gaussian and "
               "noise-free interactions, and network edge-nomination experiments"};
  app.set_version_flag("--version", std::string("pidkit ") + pidkit_version());
  app.set_config("--config", "", "Read options from a manifest or config file");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  PidArgs pid;
  auto* pid_cmd = app.add_subcommand("pid", "PID of a discrete trivariate joint")->configurable();
  pid_cmd->add_option("file", pid.file, "Joint file: 'alphabet x y t' header, then 'x y t prob' lines")
      ->required();
  pid_cmd->add_option("--kind", pid.kind)->check(CLI::IsMember({"imin", "ipm", "both"}));
  add_units(pid_cmd, pid.units);
  pid_cmd->add_option("--out", pid.out, "Directory for results and manifest");

  LinearArgs lin;
  auto* lin_cmd =
      app.add_subcommand("analytic-linear", "Closed-form PIDs of T = aX + bY")->configurable();
  lin_cmd->add_option("--a", lin.a);
  lin_cmd->add_option("--b", lin.b);
  lin_cmd->add_option("--rho", lin.rho);
  add_units(lin_cmd, lin.units);
  lin_cmd->add_option("--out", lin.out);

  McArgs mc;
  auto* mc_cmd =
      app.add_subcommand("mc", "Monte Carlo unique informations of a noise-free interaction")
          ->configurable();
  mc_cmd->add_option("--kernel", mc.kernel, "linear:A,B | sigmoidal:ALPHA | symmetric");
  mc_cmd->add_option("--rho", mc.rho);
  mc_cmd->add_option("--samples", mc.samples);
  mc_cmd->add_option("--seed", mc.seed);
  mc_cmd->add_option("--t-bins", mc.t_bins);
  mc_cmd->add_option("--workers", mc.workers, "0 = one per hardware thread");
  add_units(mc_cmd, mc.units);
  mc_cmd->add_option("--out", mc.out);

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Edge-nomination experiment 1, 2 or 3")->configurable();
  ex_cmd->add_option("id", ex.id)->required()->check(CLI::IsMember({1, 2, 3}));
  ex_cmd->add_option("--batches", ex.batches);
  ex_cmd->add_option("--samples", ex.samples, "Samples per batch");
  ex_cmd->add_option("--bins", ex.bins);
  ex_cmd->add_option("--rho", ex.rho, "Edge correlation of the built-in networks");
  ex_cmd->add_option("--alpha", ex.alpha, "Kernel parameter (experiments 1 and 2)");
  ex_cmd->add_option("--k", ex.k, "Interactions on hub 1 (experiment 2)");
  ex_cmd->add_option("--beta", ex.beta, "Linear coefficient grid (experiment 2)");
  ex_cmd->add_option("--alpha-grid", ex.alpha_grid, "Kernel parameter grid (experiment 3)");
  ex_cmd->add_option("--seed", ex.seed);
  ex_cmd->add_option("--workers", ex.workers, "0 = one per hardware thread");
  ex_cmd->add_option("--network", ex.network, "Network spec file replacing network A (experiment 1)");
  add_units(ex_cmd, ex.units);
  ex_cmd->add_option("--out", ex.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pid_cmd->parsed()) run_pid(pid);
    if (lin_cmd->parsed()) run_linear(lin);
    if (mc_cmd->parsed()) run_mc(mc);
    if (ex_cmd->parsed()) run_experiment(ex);
  } catch (const CliError& e) {
    std::cerr << "error (" << pidkit_status_name(e.status) << "): " << e.message << '\n';
    return e.status == PIDKIT_OK ? 1 : static_cast<int>(e.status);
  }
  return 0;
}
