// swfde: certify, simulate and stress-test switched functional differential equations.
//
// Exit codes: 0 success/feasible, 1 input error, 2 infeasible or failed
// verification, 3 divergence.

#include "swfde/builtins.hpp"
#include "swfde/certify.hpp"
#include "swfde/errors.hpp"
#include "swfde/io.hpp"
#include "swfde/simulate.hpp"
#include "swfde/switching.hpp"
#include "swfde/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace fs = std::filesystem;
using namespace swfde;

namespace {

enum Exit : int { kOk = 0, kInput = 1, kInfeasible = 2, kDivergence = 3 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("swfde");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SWFDE_LOG")) {
    const std::string v = env;
    if (v == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (v == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (v == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      spdlog::warn("SWFDE_LOG='{}' not one of error, info, debug; using warn", v);
    }
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpecError(path + ": cannot open for writing");
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << '\n';
  } else {
    auto out = open_out(path);
    out << text << '\n';
  }
}

InitialHistory resolve_phi(const SystemSpec& spec, const std::string& phi) {
  const auto& sys = spec.system;
  const std::string name = phi.empty() ? spec.phi_name.value_or("") : phi;
  if (name.empty()) throw SpecError("no initial history: pass --phi or set 'phi' in the spec");
  if (auto h = builtins::history(name, sys.dimension(), sys.horizon_delay())) return *h;
  if (fs::exists(name)) {
    std::ifstream in(name);
    return read_history_csv(in, sys.dimension(), sys.horizon_delay());
  }
  throw SpecError("--phi: '" + name + "' is neither a built-in history nor a file");
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string spec;
  std::string out;
};

int cmd_certify(const CertifyArgs& a) {
  const auto spec = load_system_spec(a.spec);
  spdlog::info("certifying {} ({} modes, n = {})", a.spec, spec.system.mode_count(), spec.system.dimension());
  const auto report = certify_system(spec.system);
  const auto& primary = report.primary();
  emit(certificate_to_json(primary), a.out);
  std::ostream& human = a.out.empty() ? std::cerr : std::cout;
  if (!primary.feasible) {
    human << "infeasible: no certificate found\n";
    for (const auto& n : primary.notes) human << "  " << n << '\n';
    return kInfeasible;
  }
  const auto& c = *primary.certificate;
  human.precision(6);
  human << "criterion: " << to_string(c.theorem) << '\n'
        << "alpha = " << c.alpha << ", gamma = " << c.gamma << '\n'
        << "tau* = " << c.tau_star << '\n'
        << "verdict: " << report.verdict(spec.system.all_sector_modes()) << '\n';
  if (c.conditional) human << "note: conditional on declared bounds\n";
  return kOk;
}

struct SimulateArgs {
  std::string spec;
  std::string signal;
  std::optional<double> periodic;
  std::optional<double> adt;
  double n0 = 0.0;
  std::uint64_t seed = 0;
  std::string phi;
  double horizon = 30.0;
  double dt = 1e-3;
  std::string out;
  std::string plot_data;
  std::size_t plot_points = 2000;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto spec = load_system_spec(a.spec);
  const auto& sys = spec.system;
  const int sources = !a.signal.empty() + a.periodic.has_value() + a.adt.has_value();
  if (sources != 1) throw ArgumentError("give exactly one of --signal, --periodic, --adt");

  std::optional<SwitchingSignal> sig;
  if (!a.signal.empty()) {
    std::ifstream in(a.signal);
    if (!in) throw SpecError(a.signal + ": cannot open file");
    sig = read_signal_csv(in);
  } else if (a.periodic) {
    sig = periodic_signal(*a.periodic, sys.mode_count(), a.horizon);
  } else {
    sig = generate_adt_signal({*a.adt, a.n0}, sys.mode_count(), a.horizon, a.seed);
  }
  const auto phi = resolve_phi(spec, a.phi);
  spdlog::info("simulating {} switches over [0, {}] with dt = {}", sig->instants().size(), a.horizon, a.dt);
  const auto traj = simulate(sys, *sig, phi, {a.dt, a.horizon});
  for (const auto& w : traj.warnings) spdlog::warn("{}", w);

  auto out = open_out(a.out);
  write_trajectory_csv(out, traj);
  if (!a.plot_data.empty()) {
    auto pd = open_out(a.plot_data);
    const std::size_t stride = std::max<std::size_t>(1, traj.size() / std::max<std::size_t>(1, a.plot_points));
    write_trajectory_csv(pd, traj, stride);
  }
  const auto norms = traj.norms();
  std::cout.precision(6);
  std::cout << "steps: " << traj.size() - 1 << ", |x(0)| = " << norms.front() << ", |x(" << traj.times.back()
            << ")| = " << norms.back() << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string spec;
  std::string cert;
  double tau_a = 0.0;
  double n0 = 0.0;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double horizon = 30.0;
  double dt = 1e-3;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  const auto spec = load_system_spec(a.spec);
  const auto report = load_certificate(a.cert);
  if (!report.feasible || !report.certificate) throw ArgumentError(a.cert + ": certificate is not feasible");
  const auto& cert = *report.certificate;
  if (cert.xi.size() != spec.system.mode_count()) {
    throw ArgumentError(a.cert + ": certificate has " + std::to_string(cert.xi.size()) + " vectors for " +
                        std::to_string(spec.system.mode_count()) + " modes");
  }
  if (!(a.tau_a > cert.tau_star)) {
    throw ArgumentError("tau_a = " + std::to_string(a.tau_a) + " does not exceed tau* = " +
                        std::to_string(cert.tau_star) + "; the stability guarantee does not apply");
  }
  MonteCarloOptions opt;
  opt.trials = a.trials;
  opt.seed = a.seed;
  opt.jobs = a.jobs;
  opt.simulation = {a.dt, a.horizon};
  spdlog::info("running {} trials on {} threads", a.trials, a.jobs);
  const auto s = monte_carlo_ges(spec.system, cert, {a.tau_a, a.n0}, opt);
  emit(summary_to_json(s), a.out);
  for (const auto& f : s.failures) spdlog::warn("{}", f);
  std::ostream& human = a.out.empty() ? std::cerr : std::cout;
  human << s.passes << "/" << s.trials << " trials consistent with the certified envelope\n";
  if (s.passes == s.trials) return kOk;
  for (const auto& f : s.failures) {
    if (f.find("diverged") != std::string::npos) return kDivergence;
  }
  return kInfeasible;
}

struct GenSignalArgs {
  double tau_a = 0.0;
  double n0 = 0.0;
  std::size_t modes = 2;
  double horizon = 30.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_signal(const GenSignalArgs& a) {
  const AdtSpec spec{a.tau_a, a.n0};
  const auto sig = generate_adt_signal(spec, a.modes, a.horizon, a.seed);
  const auto check = validate_adt(sig, spec, a.horizon);
  if (!check.valid) {
    spdlog::error("generated signal violates the ADT bound at t = {}", *check.first_violation);
    return kInput;
  }
  if (a.out.empty()) {
    write_signal_csv(std::cout, sig);
  } else {
    auto out = open_out(a.out);
    write_signal_csv(out, sig);
  }
  spdlog::info("{} switches", sig.instants().size());
  return kOk;
}

int cmd_compare(const std::string& path) {
  const auto spec = load_system_spec(path);
  std::vector<SectorSubsystem> modes;
  for (const auto& m : spec.system.modes()) {
    const auto* s = std::get_if<SectorSubsystem>(&m);
    if (s == nullptr) throw ArgumentError("compare: every mode must be a sector mode");
    modes.push_back(*s);
  }
  const auto t = compare_criteria(modes);
  std::cout << comparison_to_json(t) << '\n';
  return t.this_criterion ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Stability certificates and simulation for switched functional differential equations"};
  app.require_subcommand(1);

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "Search for a positive-vector stability certificate");
  certify->add_option("spec", certify_args.spec, "System spec (JSON)")->required();
  certify->add_option("--out", certify_args.out, "Write certificate JSON here (default: stdout)");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Integrate the switched system and write a trajectory CSV");
  sim->add_option("spec", sim_args.spec, "System spec (JSON)")->required();
  auto* sig_file = sim->add_option("--signal", sim_args.signal, "Switching signal CSV (t,mode)");
  auto* periodic = sim->add_option("--periodic", sim_args.periodic, "Round-robin switching with this period");
  auto* adt = sim->add_option("--adt", sim_args.adt, "Random switching with this average dwell time");
  sig_file->excludes(periodic, adt);
  periodic->excludes(adt);
  sim->add_option("--n0", sim_args.n0, "Chatter bound N_0 for --adt")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", sim_args.seed, "Seed for --adt");
  sim->add_option("--phi", sim_args.phi, "Initial history: built-in name or CSV (theta,x1,..,xn)");
  sim->add_option("--horizon", sim_args.horizon, "Final time")->check(CLI::PositiveNumber);
  sim->add_option("--dt", sim_args.dt, "Maximum step")->check(CLI::PositiveNumber);
  sim->add_option("--out", sim_args.out, "Trajectory CSV")->required();
  sim->add_option("--plot-data", sim_args.plot_data, "Downsampled trajectory CSV for plotting");
  sim->add_option("--plot-points", sim_args.plot_points, "Approximate row count of --plot-data");

  VerifyArgs ver_args;
  ver_args.jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* ver = app.add_subcommand("verify", "Monte-Carlo check of the certified decay envelope");
  ver->add_option("spec", ver_args.spec, "System spec (JSON)")->required();
  ver->add_option("--cert", ver_args.cert, "Certificate JSON from 'certify'")->required();
  ver->add_option("--tau-a", ver_args.tau_a, "Average dwell time of the random signals")->required();
  ver->add_option("--n0", ver_args.n0, "Chatter bound N_0")->check(CLI::NonNegativeNumber);
  ver->add_option("--trials", ver_args.trials, "Number of random trials");
  ver->add_option("--seed", ver_args.seed, "Base seed");
  ver->add_option("--jobs", ver_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  ver->add_option("--horizon", ver_args.horizon, "Simulation horizon")->check(CLI::PositiveNumber);
  ver->add_option("--dt", ver_args.dt, "Maximum step")->check(CLI::PositiveNumber);
  ver->add_option("--out", ver_args.out, "Summary JSON (default: stdout)");

  GenSignalArgs gen_args;
  auto* gen = app.add_subcommand("gen-signal", "Generate a random switching signal with average dwell time");
  gen->add_option("--tau-a", gen_args.tau_a, "Average dwell time")->required();
  gen->add_option("--n0", gen_args.n0, "Chatter bound N_0")->check(CLI::NonNegativeNumber);
  gen->add_option("--modes", gen_args.modes, "Number of modes")->check(CLI::PositiveNumber);
  gen->add_option("--horizon", gen_args.horizon, "Signal horizon")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_args.seed, "Seed");
  gen->add_option("--out", gen_args.out, "Signal CSV (default: stdout)");

  std::string compare_spec;
  auto* cmp = app.add_subcommand("compare", "Compare common-vector criteria on a sector system");
  cmp->add_option("spec", compare_spec, "System spec (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*certify) return cmd_certify(certify_args);
    if (*sim) return cmd_simulate(sim_args);
    if (*ver) return cmd_verify(ver_args);
    if (*gen) return cmd_gen_signal(gen_args);
    if (*cmp) return cmd_compare(compare_spec);
  } catch (const DivergenceError& e) {
    spdlog::error("divergence at t = {}: {}", e.time(), e.what());
    return kDivergence;
  } catch (const SpecError& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const MissingBoundsError& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const UnsupportedError& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const std::domain_error& e) {
    spdlog::error("{}", e.what());
    return kInput;
  }
  return kInput;
}
