#pragma once

// Empirical checks of exponential-stability claims on simulated trajectories.
// Passing runs are consistent with the certified decay; they do not prove it.

#include "swfde/certify.hpp"
#include "swfde/simulate.hpp"
#include "swfde/switching.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace swfde {

struct EnvelopeOptions {
  double cap = 1e6;             // largest acceptable empirical constant M
  double fit_tolerance = 1e-2;  // slack on lambda_fit >= lambda_target
};

struct EnvelopeReport {
  double m_emp = 0.0;
  double lambda_target = 0.0;
  double lambda_fit = 0.0;
  bool pass = false;
};

/// M_emp = max_j ||x(t_j)|| e^{lambda_target t_j} / ||phi||. Throws
/// ArgumentError when ||phi|| == 0.
[[nodiscard]] EnvelopeReport envelope_check(const Trajectory& traj, double lambda_target,
                                            const EnvelopeOptions& options = {});

/// Decay rate from a least-squares line through log s(t) on the second half of
/// the time span, where s(t) = max_{u >= t} ||x(u)|| is the tail envelope.
/// Points where s < 1e-300 are dropped.
[[nodiscard]] double fit_decay_rate(std::span<const double> times, std::span<const double> norms);
[[nodiscard]] double fit_decay_rate(const Trajectory& traj);

struct MonteCarloOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t history_knots = 6;  // random piecewise-linear phi with this many knots
  SimulationOptions simulation;
  EnvelopeOptions envelope;
  /// Optional override of the random initial history of each trial.
  std::function<InitialHistory(std::size_t trial, std::mt19937_64& rng)> history;
};

struct MonteCarloSummary {
  std::size_t trials = 0;
  std::size_t passes = 0;
  double max_m_emp = 0.0;
  double min_lambda_fit = 0.0;
  double lambda_target = 0.0;
  std::vector<std::string> failures;
};

/// Random ADT signals and random initial histories, each simulated and checked
/// against lambda_target = alpha - ln(gamma) / tau_a. Throws ArgumentError
/// unless tau_a > tau* and trials > 0.
[[nodiscard]] MonteCarloSummary monte_carlo_ges(const SwitchedSystem& sys, const Certificate& cert,
                                                const AdtSpec& spec, const MonteCarloOptions& options);

}  // namespace swfde
