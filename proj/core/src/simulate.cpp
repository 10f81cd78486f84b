#include "swfde/simulate.hpp"

#include "swfde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace swfde {

namespace {

// Cubic Hermite on [t0, t1] evaluated at s (extrapolates outside).
Vector hermite(double t0, const Vector& x0, const Vector& d0, double t1, const Vector& x1,
               const Vector& d1, double s) {
  const double h = t1 - t0;
  const double u = (s - t0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * x0 + (h10 * h) * d0 + h01 * x1 + (h11 * h) * d1;
}

Vector apply_psi(const Nonlinearity& psi, const Vector& x) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = psi[static_cast<std::size_t>(i)](x(i));
  return out;
}

std::optional<double> smallest_lag(const SwitchedSystem& sys) {
  std::optional<double> best;
  auto offer = [&](double v) { best = best ? std::min(*best, v) : v; };
  for (const auto& mode : sys.modes()) {
    if (const auto* lin = std::get_if<LinearDelaySubsystem>(&mode)) {
      for (const auto& term : lin->delay.terms()) {
        if (auto lo = term.lag.min_value()) offer(std::max(*lo, DelayOperator::kMinLag));
      }
      if (lin->delay.kernel()) offer(lin->delay.kernel()->dtheta);
    } else if (std::holds_alternative<SectorSubsystem>(mode)) {
      offer(sys.horizon_delay());
    }
  }
  return best;
}

}  // namespace

std::vector<double> Trajectory::norms() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& x : states) out.push_back(x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff());
  return out;
}

// ---------------------------------------------------------------------------
// HistoryBuffer

HistoryBuffer::HistoryBuffer(const InitialHistory& phi, double keep) : phi_(phi), keep_(keep) {}

void HistoryBuffer::push(double t, const Vector& x, const Vector& slope_left, const Vector& slope_right) {
  samples_.push_back({t, x, slope_left, slope_right});
  while (samples_.size() > 2 && samples_[1].t < t - keep_) samples_.pop_front();
}

void HistoryBuffer::set_last_right_slope(const Vector& slope) {
  if (samples_.empty()) throw std::logic_error("HistoryBuffer: no sample to update");
  samples_.back().right = slope;
}

double HistoryBuffer::last_time() const {
  return samples_.empty() ? 0.0 : samples_.back().t;
}

Vector HistoryBuffer::at(double s) const {
  const double h = phi_.horizon_delay();
  if (s <= 0.0) {
    if (s < -h * (1.0 + 1e-12) - 1e-12) {
      throw std::logic_error("HistoryBuffer: query before -h");
    }
    return phi_(std::max(s, -h));
  }
  if (samples_.empty()) return phi_(0.0);
  if (s < samples_.front().t) {
    throw std::logic_error("HistoryBuffer: history gap at t = " + std::to_string(s));
  }
  const Sample& last = samples_.back();
  if (s >= last.t) {
    if (s == last.t) return last.x;
    if (samples_.size() < 2 || last.left != last.right) return last.x + (s - last.t) * last.right;
    const Sample& prev = samples_[samples_.size() - 2];
    return hermite(prev.t, prev.x, prev.right, last.t, last.x, last.left, s);
  }
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                                   [](double v, const Sample& smp) { return v < smp.t; });
  const Sample& right = *it;
  const Sample& left = *(it - 1);
  if (s == left.t) return left.x;
  return hermite(left.t, left.x, left.right, right.t, right.x, right.left, s);
}

// ---------------------------------------------------------------------------

Vector rhs_eval(const SwitchedSystem& sys, std::size_t mode, double t, const Vector& x,
                const History& past) {
  if (mode >= sys.mode_count()) throw ArgumentError("rhs_eval: mode index out of range");
  if (x.size() != sys.dimension()) throw DimensionError("rhs_eval: state has wrong dimension");
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearDelaySubsystem>) {
          Vector dx = m.a(t) * x;
          const auto& terms = m.delay.terms();
          for (std::size_t i = 0; i < terms.size(); ++i) {
            dx += terms[i].coefficient(t) * past.at(t - m.delay.lag(i, t));
          }
          if (const auto& kernel = m.delay.kernel()) {
            const auto w = m.delay.kernel_weights();
            const double h = m.delay.horizon();
            for (std::size_t j = 0; j < w.size(); ++j) {
              const double theta = -h + static_cast<double>(j) * kernel->dtheta;
              dx += w[j] * (kernel->samples[j] * past.at(t + std::min(theta, 0.0)));
            }
          }
          return dx;
        } else if constexpr (std::is_same_v<T, SectorSubsystem>) {
          if (sys.psi().empty()) throw ArgumentError("rhs_eval: sector mode needs a nonlinearity psi");
          const Vector delayed = past.at(t - sys.horizon_delay());
          return m.p(t) * apply_psi(sys.psi(), x) + m.b(t) * apply_psi(sys.psi(), delayed);
        } else {
          Vector dx = m.rhs(t, x, past);
          if (dx.size() != x.size()) throw DimensionError("rhs_eval: black-box returned wrong dimension");
          return dx;
        }
      },
      sys.mode(mode));
}

Trajectory simulate(const SwitchedSystem& sys, const SwitchingSignal& sig, const InitialHistory& phi,
                    const SimulationOptions& options) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw ArgumentError("simulate: dt must be > 0");
  if (!(options.horizon > 0.0) || !std::isfinite(options.horizon)) {
    throw ArgumentError("simulate: horizon must be > 0");
  }
  if (phi.dimension() != sys.dimension()) throw DimensionError("simulate: initial history dimension");
  if (std::abs(phi.horizon_delay() - sys.horizon_delay()) > 1e-12 * sys.horizon_delay()) {
    throw ArgumentError("simulate: initial history must be defined on [-h, 0]");
  }
  if (sig.mode_span() > sys.mode_count()) throw ArgumentError("simulate: signal uses an unknown mode");

  Trajectory traj;
  traj.history_norm = phi.norm_inf();
  if (const auto lag = smallest_lag(sys); lag && options.dt > *lag) {
    traj.warnings.push_back("dt exceeds the smallest lag; delayed values inside a step are extrapolated");
  }

  // Interval breakpoints: 0, instants below the horizon, horizon.
  std::vector<double> breaks{0.0};
  for (double s : sig.instants()) {
    if (s < options.horizon) breaks.push_back(s);
  }
  breaks.push_back(options.horizon);

  const auto estimated = static_cast<std::size_t>(options.horizon / options.dt) + breaks.size() + 1;
  traj.times.reserve(estimated);
  traj.states.reserve(estimated);
  traj.modes.reserve(estimated);

  HistoryBuffer hist(phi, sys.horizon_delay() + 4.0 * options.dt);
  Vector x = phi(0.0);
  std::size_t mode = sig.initial_mode();
  Vector k1 = rhs_eval(sys, mode, 0.0, x, hist);
  hist.push(0.0, x, k1, k1);
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.modes.push_back(mode);

  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const std::size_t active = sig.mode_at(a);
    if (active != mode) {
      mode = active;
      k1 = rhs_eval(sys, mode, a, x, hist);
      hist.set_last_right_slope(k1);
    }
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / options.dt - 1e-9)));
    const double step = (b - a) / static_cast<double>(steps);
    for (std::size_t j = 1; j <= steps; ++j) {
      const double t0 = a + static_cast<double>(j - 1) * step;
      const double t1 = (j == steps) ? b : a + static_cast<double>(j) * step;
      const double hh = t1 - t0;
      const Vector k2 = rhs_eval(sys, mode, t0 + 0.5 * hh, x + (0.5 * hh) * k1, hist);
      const Vector k3 = rhs_eval(sys, mode, t0 + 0.5 * hh, x + (0.5 * hh) * k2, hist);
      const Vector k4 = rhs_eval(sys, mode, t1, x + hh * k3, hist);
      x += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite() || x.cwiseAbs().maxCoeff() > options.blowup_threshold) {
        throw DivergenceError("simulate: solution diverged at t = " + std::to_string(t1), t1);
      }
      k1 = rhs_eval(sys, mode, t1, x, hist);
      hist.push(t1, x, k1, k1);
      traj.times.push_back(t1);
      traj.states.push_back(x);
      traj.modes.push_back(j == steps && p + 2 < breaks.size() ? sig.mode_at(t1) : mode);
    }
  }
  return traj;
}

Trajectory simulate(const Subsystem& mode, Eigen::Index n, double h, const InitialHistory& phi,
                    const SimulationOptions& options, Nonlinearity psi) {
  const SwitchedSystem sys(n, h, {mode}, std::move(psi));
  return simulate(sys, SwitchingSignal(0), phi, options);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride) {
  if (stride == 0) throw ArgumentError("write_trajectory_csv: stride must be >= 1");
  const auto old_precision = os.precision(17);
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  os << ",mode\n";
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (j % stride != 0 && j + 1 != traj.size()) continue;
    os << traj.times[j];
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << traj.states[j](i);
    os << ',' << traj.modes[j] + 1 << '\n';
  }
  os.precision(old_precision);
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw SpecError("trajectory CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 3 || header.front() != "t" || header.back() != "mode") {
    throw SpecError("trajectory CSV line 1: expected header 't,x1,...,xn,mode'");
  }
  const auto n = static_cast<Eigen::Index>(header.size() - 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (header[static_cast<std::size_t>(i + 1)] != "x" + std::to_string(i + 1)) {
      throw SpecError("trajectory CSV line 1: column " + std::to_string(i + 2) + " must be x" +
                      std::to_string(i + 1));
    }
  }

  Trajectory traj;
  for (int lineno = 2; std::getline(is, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw SpecError("trajectory CSV line " + std::to_string(lineno) + ": wrong column count");
    }
    try {
      traj.times.push_back(std::stod(cells.front()));
      Vector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = std::stod(cells[static_cast<std::size_t>(i + 1)]);
      traj.states.push_back(std::move(x));
      const long m = std::stol(cells.back());
      if (m < 1) throw SpecError("trajectory CSV line " + std::to_string(lineno) + ": modes are 1-based");
      traj.modes.push_back(static_cast<std::size_t>(m - 1));
    } catch (const std::logic_error&) {
      throw SpecError("trajectory CSV line " + std::to_string(lineno) + ": cannot parse numbers");
    }
  }
  if (traj.times.empty()) throw SpecError("trajectory CSV: no rows");
  // The file does not carry the initial history; ||x(0)|| stands in for ||phi||.
  traj.history_norm = traj.states.front().cwiseAbs().maxCoeff();
  traj.warnings.emplace_back("history norm taken from x(0); the CSV does not store phi");
  return traj;
}

}  // namespace swfde
