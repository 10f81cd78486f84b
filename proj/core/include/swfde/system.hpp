#pragma once

// Constituent subsystems and switched systems.
//
// Three kinds of mode are supported:
//   * linear with discrete and distributed delays
//       x' = A(t) x + sum_i B_i(t) x(t - lag_i(t)) + int_{-h}^0 C(s) x(t+s) ds
//   * sector nonlinearity
//       x' = P(t) psi(x) + B(t) psi(x(t-h)),  0 < x_i psi_i(x_i) <= beta_i x_i^2
//   * black box: a user right-hand side plus declared constant bounds
//     (Ahat, Vhat) on its Jacobian and delay operator.
//
// Time-varying coefficients are either constant, uniformly sampled (linear
// interpolation, held constant outside the sampled range) or a callable with a
// list of probe times. Suprema over t are taken over those samples/probes.

#include "swfde/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace swfde {

/// Read access to the past of a trajectory, x(s) for s <= current time.
class History {
 public:
  virtual ~History() = default;
  [[nodiscard]] virtual Vector at(double s) const = 0;
};

class MatrixFunction {
 public:
  using Callable = std::function<Matrix(double)>;

  static MatrixFunction constant(Matrix m);
  static MatrixFunction sampled(double t0, double dt, std::vector<Matrix> samples);
  static MatrixFunction callable(Callable f, std::vector<double> probe_times,
                                 Eigen::Index rows, Eigen::Index cols);

  [[nodiscard]] Matrix operator()(double t) const;
  [[nodiscard]] bool is_constant() const noexcept { return kind_ == Kind::constant; }
  [[nodiscard]] Eigen::Index rows() const noexcept { return rows_; }
  [[nodiscard]] Eigen::Index cols() const noexcept { return cols_; }

  /// Times at which suprema are evaluated (a single 0 for constants).
  [[nodiscard]] std::vector<double> probe_times() const;

  /// Entrywise sup over the probe times of op(F(t)).
  template <class Op>
  [[nodiscard]] Matrix sup(Op op) const {
    Matrix out;
    bool first = true;
    for (double t : probe_times()) {
      const Matrix v = op((*this)(t));
      out = first ? v : Matrix(out.cwiseMax(v));
      first = false;
    }
    return out;
  }

  /// Every value taken over the probe times (used for sign checks).
  [[nodiscard]] bool all_of(const std::function<bool(const Matrix&)>& pred) const;

 private:
  enum class Kind { constant, sampled, callable };
  Kind kind_ = Kind::constant;
  Matrix value_;
  double t0_ = 0.0;
  double dt_ = 0.0;
  std::vector<Matrix> samples_;
  Callable fn_;
  std::vector<double> probes_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

/// Scalar lag h_i(t); same representations as MatrixFunction.
class LagFunction {
 public:
  static LagFunction constant(double lag);
  static LagFunction sampled(double t0, double dt, std::vector<double> samples);
  static LagFunction callable(std::function<double(double)> f);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] bool is_constant() const noexcept { return kind_ == 0; }
  /// Smallest known value (the constant, or the minimum sample); nullopt for callables.
  [[nodiscard]] std::optional<double> min_value() const;
  [[nodiscard]] std::optional<double> max_value() const;

 private:
  int kind_ = 0;
  double value_ = 0.0;
  double t0_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> samples_;
  std::function<double(double)> fn_;
};

struct DelayTerm {
  MatrixFunction coefficient;
  LagFunction lag;
};

/// Uniform grid of kernel samples C(theta_j), theta_j = -h + j * dtheta.
struct DistributedKernel {
  double dtheta = 0.0;
  std::vector<Matrix> samples;
};

/// Discrete delays plus an optional distributed kernel on [-h, 0].
class DelayOperator {
 public:
  static constexpr double kMinLag = 1e-9;

  DelayOperator(Eigen::Index n, double h, std::vector<DelayTerm> terms = {},
                std::optional<DistributedKernel> kernel = std::nullopt);

  [[nodiscard]] Eigen::Index dimension() const noexcept { return n_; }
  [[nodiscard]] double horizon() const noexcept { return h_; }
  [[nodiscard]] const std::vector<DelayTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] const std::optional<DistributedKernel>& kernel() const noexcept { return kernel_; }

  /// Lag of term i at time t, clamped into [kMinLag, h].
  [[nodiscard]] double lag(std::size_t i, double t) const;
  [[nodiscard]] bool is_time_invariant() const;

  /// Trapezoid weights over the kernel grid (empty without a kernel).
  [[nodiscard]] std::vector<double> kernel_weights() const;

  /// Sorted union of the probe times of every coefficient.
  [[nodiscard]] std::vector<double> probe_times() const;

 private:
  Eigen::Index n_;
  double h_;
  std::vector<DelayTerm> terms_;
  std::optional<DistributedKernel> kernel_;
};

/// Sum_i |B_i(t)| + int_{-h}^0 |C(s)| ds (composite trapezoid).
[[nodiscard]] Matrix variation_bound(const DelayOperator& op, double t);

/// Sum_i B_i + int_{-h}^0 C(s) ds for a time-invariant operator.
[[nodiscard]] Matrix eta_at_zero(const DelayOperator& op);

struct LinearDelaySubsystem {
  MatrixFunction a;
  DelayOperator delay;
};

struct SectorSubsystem {
  MatrixFunction p;
  MatrixFunction b;
  Vector beta;
};

using RightHandSide = std::function<Vector(double t, const Vector& x, const History& past)>;

struct DeclaredBounds {
  Matrix a_hat;
  Matrix v_hat;
};

struct BlackBoxSubsystem {
  RightHandSide rhs;
  std::optional<DeclaredBounds> bounds;
  std::string name;
  bool thread_safe = true;
};

using Subsystem = std::variant<LinearDelaySubsystem, SectorSubsystem, BlackBoxSubsystem>;

/// Diagonal nonlinearity psi(x) = (psi_1(x_1), ..., psi_n(x_n)).
using Nonlinearity = std::vector<std::function<double(double)>>;

class SwitchedSystem {
 public:
  SwitchedSystem(Eigen::Index n, double h, std::vector<Subsystem> modes, Nonlinearity psi = {});

  [[nodiscard]] Eigen::Index dimension() const noexcept { return n_; }
  [[nodiscard]] double horizon_delay() const noexcept { return h_; }
  [[nodiscard]] std::size_t mode_count() const noexcept { return modes_.size(); }
  [[nodiscard]] const std::vector<Subsystem>& modes() const noexcept { return modes_; }
  [[nodiscard]] const Subsystem& mode(std::size_t k) const { return modes_.at(k); }
  [[nodiscard]] const Nonlinearity& psi() const noexcept { return psi_; }

  [[nodiscard]] bool has_sector_modes() const;
  [[nodiscard]] bool all_sector_modes() const;
  [[nodiscard]] bool all_linear_modes() const;
  [[nodiscard]] bool thread_safe() const;

 private:
  Eigen::Index n_;
  double h_;
  std::vector<Subsystem> modes_;
  Nonlinearity psi_;
};

struct ModeBounds {
  Matrix a_hat;  // Metzler
  Matrix v_hat;  // entrywise >= 0
};

struct BoundingData {
  std::vector<ModeBounds> modes;
  bool sampled = false;      // some mode was time-varying: sup over samples only
  bool conditional = false;  // some mode relied on user-declared bounds
};

/// Per-mode constant bounds (Ahat_k, Vhat_k). Throws MissingBoundsError for a
/// black-box mode without declared bounds.
[[nodiscard]] BoundingData bounding_data(const SwitchedSystem& sys);

/// For time-invariant linear modes: every A_k Metzler, every B_k^i and kernel
/// sample nonnegative. Throws UnsupportedError otherwise.
[[nodiscard]] bool check_positivity(const SwitchedSystem& sys);

/// Continuous initial function on [-h, 0].
class InitialHistory {
 public:
  using Callable = std::function<Vector(double)>;

  /// norm_inf is computed as the max over a uniform grid of `probe_points` plus the endpoints.
  InitialHistory(Callable phi, Eigen::Index n, double h, int probe_points = 2001);

  /// Piecewise-linear through (theta_j, x_j); thetas must increase and cover [-h, 0].
  static InitialHistory piecewise_linear(std::vector<double> thetas, std::vector<Vector> values,
                                         double h);

  [[nodiscard]] Vector operator()(double theta) const;
  [[nodiscard]] double norm_inf() const noexcept { return norm_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return n_; }
  [[nodiscard]] double horizon_delay() const noexcept { return h_; }

 private:
  InitialHistory(Callable phi, Eigen::Index n, double h, double norm);

  Callable phi_;
  Eigen::Index n_;
  double h_;
  double norm_ = 0.0;
};

}  // namespace swfde
