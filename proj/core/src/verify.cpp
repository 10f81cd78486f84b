#include "swfde/verify.hpp"

#include "swfde/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <thread>

namespace swfde {

EnvelopeReport envelope_check(const Trajectory& traj, double lambda_target, const EnvelopeOptions& options) {
  if (!(traj.history_norm > 0.0)) {
    throw ArgumentError("envelope_check: initial history has zero norm");
  }
  if (traj.size() == 0) throw ArgumentError("envelope_check: empty trajectory");
  EnvelopeReport r;
  r.lambda_target = lambda_target;
  const auto norms = traj.norms();
  for (std::size_t j = 0; j < norms.size(); ++j) {
    // log domain keeps large lambda * t from overflowing before the product.
    const double v = norms[j] == 0.0
                         ? 0.0
                         : std::exp(std::log(norms[j]) + lambda_target * traj.times[j] - std::log(traj.history_norm));
    r.m_emp = std::max(r.m_emp, v);
  }
  r.lambda_fit = fit_decay_rate(traj.times, norms);
  r.pass = std::isfinite(r.m_emp) && r.m_emp <= options.cap &&
           r.lambda_fit >= lambda_target - options.fit_tolerance;
  return r;
}

double fit_decay_rate(std::span<const double> times, std::span<const double> norms) {
  if (times.size() != norms.size()) throw DimensionError("fit_decay_rate: size mismatch");
  if (times.size() < 2) throw ArgumentError("fit_decay_rate: need at least two samples");

  std::vector<double> envelope(norms.size());
  double running = 0.0;
  for (std::size_t j = norms.size(); j-- > 0;) {
    running = std::max(running, norms[j]);
    envelope[j] = running;
  }

  const double mid = 0.5 * (times.front() + times.back());
  double n = 0.0;
  double st = 0.0;
  double sy = 0.0;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < mid || envelope[j] < 1e-300) continue;
    const double y = std::log(envelope[j]);
    n += 1.0;
    st += times[j];
    sy += y;
    stt += times[j] * times[j];
    sty += times[j] * y;
  }
  if (n < 2.0) throw ArgumentError("fit_decay_rate: trajectory vanishes on the fitting window");
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) throw ArgumentError("fit_decay_rate: degenerate time window");
  const double slope = (n * sty - st * sy) / denom;
  return -slope;
}

double fit_decay_rate(const Trajectory& traj) {
  const auto norms = traj.norms();
  return fit_decay_rate(traj.times, norms);
}

namespace {

InitialHistory random_history(Eigen::Index n, double h, std::size_t knots, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const std::size_t count = std::max<std::size_t>(knots, 2);
  std::vector<double> thetas(count);
  std::vector<Vector> values(count, Vector(n));
  for (std::size_t j = 0; j < count; ++j) {
    thetas[j] = j + 1 == count ? 0.0 : -h + h * static_cast<double>(j) / static_cast<double>(count - 1);
    for (Eigen::Index i = 0; i < n; ++i) values[j](i) = value(rng);
  }
  return InitialHistory::piecewise_linear(std::move(thetas), std::move(values), h);
}

struct TrialOutcome {
  bool pass = false;
  double m_emp = 0.0;
  double lambda_fit = std::numeric_limits<double>::infinity();
  std::string failure;
};

}  // namespace

MonteCarloSummary monte_carlo_ges(const SwitchedSystem& sys, const Certificate& cert, const AdtSpec& spec,
                                  const MonteCarloOptions& options) {
  spec.validate();
  if (options.trials == 0) throw ArgumentError("monte_carlo_ges: trials must be > 0");
  if (!(spec.tau_a > cert.tau_star)) {
    throw ArgumentError("monte_carlo_ges: tau_a must exceed tau* = " + std::to_string(cert.tau_star));
  }
  if (!(cert.alpha > 0.0)) throw ArgumentError("monte_carlo_ges: certificate alpha must be > 0");

  MonteCarloSummary summary;
  summary.trials = options.trials;
  summary.lambda_target = cert.alpha - std::log(cert.gamma) / spec.tau_a;

  auto run_trial = [&](std::size_t trial) -> TrialOutcome {
    // Per-trial stream: independent of scheduling order.
    std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(trial),
                      static_cast<std::uint64_t>(0x5157u)};
    std::mt19937_64 rng(seq);
    TrialOutcome out;
    try {
      const SwitchingSignal sig =
          generate_adt_signal(spec, sys.mode_count(), options.simulation.horizon, rng());
      const InitialHistory phi = options.history
                                     ? options.history(trial, rng)
                                     : random_history(sys.dimension(), sys.horizon_delay(),
                                                      options.history_knots, rng);
      const Trajectory traj = simulate(sys, sig, phi, options.simulation);
      if (!(phi.norm_inf() > 0.0)) {
        const auto norms = traj.norms();
        out.pass = std::all_of(norms.begin(), norms.end(), [](double v) { return v == 0.0; });
        out.lambda_fit = std::numeric_limits<double>::infinity();
        if (!out.pass) out.failure = "trial " + std::to_string(trial) + ": zero history gave a nonzero solution";
        return out;
      }
      const EnvelopeReport env = envelope_check(traj, summary.lambda_target, options.envelope);
      out.pass = env.pass;
      out.m_emp = env.m_emp;
      out.lambda_fit = env.lambda_fit;
      if (!env.pass) {
        out.failure = "trial " + std::to_string(trial) + ": M_emp = " + std::to_string(env.m_emp) +
                      ", lambda_fit = " + std::to_string(env.lambda_fit);
      }
    } catch (const DivergenceError& e) {
      out.failure = "trial " + std::to_string(trial) + ": " + e.what();
    } catch (const ArgumentError& e) {
      out.failure = "trial " + std::to_string(trial) + ": " + e.what();
    }
    return out;
  };

  std::vector<TrialOutcome> outcomes(options.trials);
  const unsigned jobs = sys.thread_safe() ? std::max(1u, options.jobs) : 1u;
  if (jobs == 1) {
    for (std::size_t t = 0; t < options.trials; ++t) outcomes[t] = run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t t = next++; t < options.trials; t = next++) outcomes[t] = run_trial(t);
      });
    }
    for (auto& w : workers) w.join();
  }

  summary.min_lambda_fit = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.pass) ++summary.passes;
    summary.max_m_emp = std::max(summary.max_m_emp, o.m_emp);
    summary.min_lambda_fit = std::min(summary.min_lambda_fit, o.lambda_fit);
    if (!o.failure.empty()) summary.failures.push_back(o.failure);
  }
  return summary;
}

}  // namespace swfde
