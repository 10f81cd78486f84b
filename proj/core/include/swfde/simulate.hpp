#pragma once

// Method-of-steps integration of switched functional differential equations.
//
// Fixed-step classical RK4. The step grid on each switching interval is
// uniform with spacing <= dt and contains every switching instant, so the
// state is carried across a switch at a shared grid point. Delayed values come
// from a cubic Hermite interpolant over stored (t, x, x') samples, or from the
// initial history for times <= 0. Stages that reach past the last stored
// sample (lags shorter than the step) extrapolate the last Hermite segment.

#include "swfde/linalg.hpp"
#include "swfde/switching.hpp"
#include "swfde/system.hpp"

#include <deque>
#include <iosfwd>
#include <string>
#include <vector>

namespace swfde {

struct SimulationOptions {
  double dt = 1e-3;
  double horizon = 30.0;
  double blowup_threshold = 1e12;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::size_t> modes;  // active mode at each grid time (right-continuous)
  double history_norm = 0.0;       // sup-norm of the initial history
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// ||x(t_j)||_inf for every grid point.
  [[nodiscard]] std::vector<double> norms() const;
};

/// Stored solution samples plus the initial history. Samples older than
/// `keep` time units behind the newest one are discarded.
class HistoryBuffer final : public History {
 public:
  HistoryBuffer(const InitialHistory& phi, double keep);

  /// Appends a sample; `slope_left` is x' from the step that ended here,
  /// `slope_right` is x' of the mode active from here on.
  void push(double t, const Vector& x, const Vector& slope_left, const Vector& slope_right);
  /// Replaces the right slope of the newest sample (after a mode switch).
  void set_last_right_slope(const Vector& slope);

  [[nodiscard]] Vector at(double s) const override;
  [[nodiscard]] double last_time() const;
  [[nodiscard]] std::size_t stored() const noexcept { return samples_.size(); }

 private:
  struct Sample {
    double t;
    Vector x;
    Vector left;
    Vector right;
  };

  const InitialHistory& phi_;
  double keep_;
  std::deque<Sample> samples_;
};

/// Right-hand side of the given mode at (t, x) using `past` for delayed values.
[[nodiscard]] Vector rhs_eval(const SwitchedSystem& sys, std::size_t mode, double t, const Vector& x,
                              const History& past);

/// Throws DivergenceError on blow-up; a step larger than the smallest lag is
/// recorded in Trajectory::warnings.
[[nodiscard]] Trajectory simulate(const SwitchedSystem& sys, const SwitchingSignal& sig,
                                  const InitialHistory& phi, const SimulationOptions& options = {});

/// Single subsystem, no switching.
[[nodiscard]] Trajectory simulate(const Subsystem& mode, Eigen::Index n, double h,
                                  const InitialHistory& phi, const SimulationOptions& options = {},
                                  Nonlinearity psi = {});

/// Header `t,x1,...,xn,mode`, 17 significant digits, 1-based modes. A stride
/// above 1 keeps every stride-th row plus the last one.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1);
[[nodiscard]] Trajectory read_trajectory_csv(std::istream& is);

}  // namespace swfde
