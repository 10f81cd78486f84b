#include "swfde/system.hpp"

#include "swfde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace swfde {

namespace {

// Linear interpolation into uniform samples, held constant outside the range.
template <class T>
T interpolate(const std::vector<T>& samples, double t0, double dt, double t) {
  if (samples.size() == 1 || t <= t0) return samples.front();
  const double u = (t - t0) / dt;
  const auto last = static_cast<double>(samples.size() - 1);
  if (u >= last) return samples.back();
  const auto j = static_cast<std::size_t>(std::floor(u));
  const double w = u - static_cast<double>(j);
  if (w == 0.0) return samples[j];
  return T((1.0 - w) * samples[j] + w * samples[j + 1]);
}

std::vector<double> sample_times(double t0, double dt, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = t0 + static_cast<double>(j) * dt;
  return out;
}

void require_square(const Matrix& m, Eigen::Index n, const std::string& what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(what + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

Matrix metzler_of(const Matrix& m) { return metzler_projection(m).matrix(); }

}  // namespace

// ---------------------------------------------------------------------------
// MatrixFunction

MatrixFunction MatrixFunction::constant(Matrix m) {
  if (!m.allFinite()) throw ArgumentError("MatrixFunction: non-finite entry");
  MatrixFunction f;
  f.kind_ = Kind::constant;
  f.rows_ = m.rows();
  f.cols_ = m.cols();
  f.value_ = std::move(m);
  return f;
}

MatrixFunction MatrixFunction::sampled(double t0, double dt, std::vector<Matrix> samples) {
  if (samples.empty()) throw ArgumentError("MatrixFunction: no samples");
  if (samples.size() > 1 && !(dt > 0.0)) throw ArgumentError("MatrixFunction: sample spacing must be > 0");
  for (const auto& s : samples) {
    if (s.rows() != samples.front().rows() || s.cols() != samples.front().cols()) {
      throw DimensionError("MatrixFunction: samples differ in shape");
    }
    if (!s.allFinite()) throw ArgumentError("MatrixFunction: non-finite sample");
  }
  if (samples.size() == 1) return constant(samples.front());
  MatrixFunction f;
  f.kind_ = Kind::sampled;
  f.rows_ = samples.front().rows();
  f.cols_ = samples.front().cols();
  f.t0_ = t0;
  f.dt_ = dt;
  f.samples_ = std::move(samples);
  return f;
}

MatrixFunction MatrixFunction::callable(Callable fn, std::vector<double> probe_times,
                                        Eigen::Index rows, Eigen::Index cols) {
  if (!fn) throw ArgumentError("MatrixFunction: empty callable");
  if (probe_times.empty()) throw ArgumentError("MatrixFunction: callable needs probe times");
  MatrixFunction f;
  f.kind_ = Kind::callable;
  f.fn_ = std::move(fn);
  f.probes_ = std::move(probe_times);
  f.rows_ = rows;
  f.cols_ = cols;
  return f;
}

Matrix MatrixFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::sampled:
      return interpolate(samples_, t0_, dt_, t);
    case Kind::callable:
      return fn_(t);
  }
  return value_;
}

std::vector<double> MatrixFunction::probe_times() const {
  switch (kind_) {
    case Kind::constant:
      return {0.0};
    case Kind::sampled:
      return sample_times(t0_, dt_, samples_.size());
    case Kind::callable:
      return probes_;
  }
  return {0.0};
}

bool MatrixFunction::all_of(const std::function<bool(const Matrix&)>& pred) const {
  const auto times = probe_times();
  return std::all_of(times.begin(), times.end(), [&](double t) { return pred((*this)(t)); });
}

// ---------------------------------------------------------------------------
// LagFunction

LagFunction LagFunction::constant(double lag) {
  if (!std::isfinite(lag)) throw ArgumentError("LagFunction: non-finite lag");
  LagFunction f;
  f.kind_ = 0;
  f.value_ = lag;
  return f;
}

LagFunction LagFunction::sampled(double t0, double dt, std::vector<double> samples) {
  if (samples.empty()) throw ArgumentError("LagFunction: no samples");
  if (samples.size() == 1) return constant(samples.front());
  if (!(dt > 0.0)) throw ArgumentError("LagFunction: sample spacing must be > 0");
  LagFunction f;
  f.kind_ = 1;
  f.t0_ = t0;
  f.dt_ = dt;
  f.samples_ = std::move(samples);
  return f;
}

LagFunction LagFunction::callable(std::function<double(double)> fn) {
  if (!fn) throw ArgumentError("LagFunction: empty callable");
  LagFunction f;
  f.kind_ = 2;
  f.fn_ = std::move(fn);
  return f;
}

double LagFunction::operator()(double t) const {
  switch (kind_) {
    case 0:
      return value_;
    case 1:
      return interpolate(samples_, t0_, dt_, t);
    default:
      return fn_(t);
  }
}

std::optional<double> LagFunction::min_value() const {
  if (kind_ == 0) return value_;
  if (kind_ == 1) return *std::min_element(samples_.begin(), samples_.end());
  return std::nullopt;
}

std::optional<double> LagFunction::max_value() const {
  if (kind_ == 0) return value_;
  if (kind_ == 1) return *std::max_element(samples_.begin(), samples_.end());
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DelayOperator

DelayOperator::DelayOperator(Eigen::Index n, double h, std::vector<DelayTerm> terms,
                             std::optional<DistributedKernel> kernel)
    : n_(n), h_(h), terms_(std::move(terms)), kernel_(std::move(kernel)) {
  if (n_ <= 0) throw DimensionError("DelayOperator: dimension must be positive");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ArgumentError("DelayOperator: h must be > 0");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& term = terms_[i];
    if (term.coefficient.rows() != n_ || term.coefficient.cols() != n_) {
      throw DimensionError("DelayOperator: delay term " + std::to_string(i) + " is not n x n");
    }
    const auto lo = term.lag.min_value();
    const auto hi = term.lag.max_value();
    if ((lo && !(*lo > 0.0)) || (hi && *hi > h_ * (1.0 + 1e-12))) {
      throw ArgumentError("DelayOperator: lag of term " + std::to_string(i) + " must lie in (0, h]");
    }
  }
  if (kernel_) {
    if (!(kernel_->dtheta > 0.0)) throw ArgumentError("DelayOperator: kernel dtheta must be > 0");
    if (kernel_->samples.size() < 2) throw ArgumentError("DelayOperator: kernel needs >= 2 samples");
    const double span = kernel_->dtheta * static_cast<double>(kernel_->samples.size() - 1);
    if (std::abs(span - h_) > 1e-9 * std::max(1.0, h_)) {
      throw ArgumentError("DelayOperator: kernel grid must cover [-h, 0] exactly");
    }
    for (const auto& s : kernel_->samples) require_square(s, n_, "DelayOperator kernel sample");
  }
}

double DelayOperator::lag(std::size_t i, double t) const {
  return std::clamp(terms_.at(i).lag(t), kMinLag, h_);
}

bool DelayOperator::is_time_invariant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const DelayTerm& term) {
    return term.coefficient.is_constant() && term.lag.is_constant();
  });
}

std::vector<double> DelayOperator::kernel_weights() const {
  if (!kernel_) return {};
  std::vector<double> w(kernel_->samples.size(), kernel_->dtheta);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<double> DelayOperator::probe_times() const {
  std::vector<double> out{0.0};
  for (const auto& term : terms_) {
    const auto times = term.coefficient.probe_times();
    out.insert(out.end(), times.begin(), times.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Matrix variation_bound(const DelayOperator& op, double t) {
  Matrix v = Matrix::Zero(op.dimension(), op.dimension());
  for (const auto& term : op.terms()) v += term.coefficient(t).cwiseAbs();
  if (op.kernel()) {
    const auto w = op.kernel_weights();
    for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * op.kernel()->samples[j].cwiseAbs();
  }
  return v;
}

Matrix eta_at_zero(const DelayOperator& op) {
  if (!op.is_time_invariant()) throw UnsupportedError("eta_at_zero: operator is time-varying");
  Matrix v = Matrix::Zero(op.dimension(), op.dimension());
  for (const auto& term : op.terms()) v += term.coefficient(0.0);
  if (op.kernel()) {
    const auto w = op.kernel_weights();
    for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * op.kernel()->samples[j];
  }
  return v;
}

// ---------------------------------------------------------------------------
// SwitchedSystem

SwitchedSystem::SwitchedSystem(Eigen::Index n, double h, std::vector<Subsystem> modes,
                               Nonlinearity psi)
    : n_(n), h_(h), modes_(std::move(modes)), psi_(std::move(psi)) {
  if (n_ <= 0) throw DimensionError("SwitchedSystem: dimension must be positive");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ArgumentError("SwitchedSystem: h must be > 0");
  if (modes_.empty()) throw ArgumentError("SwitchedSystem: at least one mode is required");
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const std::string where = "SwitchedSystem mode " + std::to_string(k + 1);
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, LinearDelaySubsystem>) {
            if (m.a.rows() != n_ || m.a.cols() != n_) throw DimensionError(where + ": A is not n x n");
            if (m.delay.dimension() != n_) throw DimensionError(where + ": delay operator dimension");
            if (std::abs(m.delay.horizon() - h_) > 1e-12 * h_) {
              throw ArgumentError(where + ": delay operator horizon differs from system h");
            }
          } else if constexpr (std::is_same_v<T, SectorSubsystem>) {
            if (m.p.rows() != n_ || m.p.cols() != n_) throw DimensionError(where + ": P is not n x n");
            if (m.b.rows() != n_ || m.b.cols() != n_) throw DimensionError(where + ": B is not n x n");
            if (m.beta.size() != n_) throw DimensionError(where + ": beta has wrong length");
            if ((m.beta.array() <= 0.0).any()) throw ArgumentError(where + ": beta entries must be > 0");
          } else {
            if (!m.rhs) throw ArgumentError(where + ": black-box mode without right-hand side");
            if (m.bounds) {
              require_square(m.bounds->a_hat, n_, where + " Ahat");
              require_square(m.bounds->v_hat, n_, where + " Vhat");
            }
          }
        },
        modes_[k]);
  }
  if (!psi_.empty() && static_cast<Eigen::Index>(psi_.size()) != n_) {
    throw DimensionError("SwitchedSystem: psi must have n components");
  }
}

bool SwitchedSystem::has_sector_modes() const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [](const Subsystem& m) { return std::holds_alternative<SectorSubsystem>(m); });
}

bool SwitchedSystem::all_sector_modes() const {
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const Subsystem& m) { return std::holds_alternative<SectorSubsystem>(m); });
}

bool SwitchedSystem::all_linear_modes() const {
  return std::all_of(modes_.begin(), modes_.end(), [](const Subsystem& m) {
    return std::holds_alternative<LinearDelaySubsystem>(m);
  });
}

bool SwitchedSystem::thread_safe() const {
  return std::all_of(modes_.begin(), modes_.end(), [](const Subsystem& m) {
    const auto* bb = std::get_if<BlackBoxSubsystem>(&m);
    return bb == nullptr || bb->thread_safe;
  });
}

BoundingData bounding_data(const SwitchedSystem& sys) {
  BoundingData out;
  out.modes.reserve(sys.mode_count());
  for (std::size_t k = 0; k < sys.mode_count(); ++k) {
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, LinearDelaySubsystem>) {
            Matrix a_hat = m.a.sup(metzler_of);
            Matrix v_hat;
            bool first = true;
            for (double t : m.delay.probe_times()) {
              const Matrix v = variation_bound(m.delay, t);
              v_hat = first ? v : Matrix(v_hat.cwiseMax(v));
              first = false;
            }
            if (!m.a.is_constant() || !m.delay.is_time_invariant()) out.sampled = true;
            out.modes.push_back({std::move(a_hat), std::move(v_hat)});
          } else if constexpr (std::is_same_v<T, SectorSubsystem>) {
            const auto d_beta = m.beta.asDiagonal();
            Matrix a_hat = m.p.sup(metzler_of) * d_beta;
            Matrix v_hat = m.b.sup([](const Matrix& b) { return Matrix(b.cwiseAbs()); }) * d_beta;
            if (!m.p.is_constant() || !m.b.is_constant()) out.sampled = true;
            out.modes.push_back({std::move(a_hat), std::move(v_hat)});
          } else {
            if (!m.bounds) {
              throw MissingBoundsError("bounding_data: black-box mode " + std::to_string(k + 1) +
                                       " has no declared bounds");
            }
            out.conditional = true;
            out.modes.push_back({m.bounds->a_hat, m.bounds->v_hat});
          }
        },
        sys.mode(k));
  }
  return out;
}

bool check_positivity(const SwitchedSystem& sys) {
  bool positive = true;
  for (std::size_t k = 0; k < sys.mode_count(); ++k) {
    const auto* lin = std::get_if<LinearDelaySubsystem>(&sys.mode(k));
    if (lin == nullptr) {
      throw UnsupportedError("check_positivity: mode " + std::to_string(k + 1) + " is not linear");
    }
    if (!lin->a.is_constant() || !lin->delay.is_time_invariant()) {
      throw UnsupportedError("check_positivity: mode " + std::to_string(k + 1) + " is time-varying");
    }
    const Matrix a = lin->a(0.0);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (i != j && a(i, j) < 0.0) positive = false;
      }
    }
    for (const auto& term : lin->delay.terms()) {
      if ((term.coefficient(0.0).array() < 0.0).any()) positive = false;
    }
    if (lin->delay.kernel()) {
      for (const auto& s : lin->delay.kernel()->samples) {
        if ((s.array() < 0.0).any()) positive = false;
      }
    }
  }
  return positive;
}

// ---------------------------------------------------------------------------
// InitialHistory

InitialHistory::InitialHistory(Callable phi, Eigen::Index n, double h, int probe_points)
    : phi_(std::move(phi)), n_(n), h_(h) {
  if (!phi_) throw ArgumentError("InitialHistory: empty callable");
  if (n_ <= 0) throw DimensionError("InitialHistory: dimension must be positive");
  if (!(h_ > 0.0)) throw ArgumentError("InitialHistory: h must be > 0");
  const int points = std::max(probe_points, 2);
  for (int j = 0; j < points; ++j) {
    const double theta = -h_ + h_ * static_cast<double>(j) / static_cast<double>(points - 1);
    const Vector v = phi_(j == points - 1 ? 0.0 : theta);
    if (v.size() != n_) throw DimensionError("InitialHistory: phi returned wrong dimension");
    if (!v.allFinite()) throw ArgumentError("InitialHistory: phi is not finite");
    norm_ = std::max(norm_, v.cwiseAbs().maxCoeff());
  }
}

InitialHistory::InitialHistory(Callable phi, Eigen::Index n, double h, double norm)
    : phi_(std::move(phi)), n_(n), h_(h), norm_(norm) {}

InitialHistory InitialHistory::piecewise_linear(std::vector<double> thetas,
                                                std::vector<Vector> values, double h) {
  if (thetas.size() != values.size() || thetas.empty()) {
    throw ArgumentError("InitialHistory: knot and value counts differ");
  }
  if (!(h > 0.0)) throw ArgumentError("InitialHistory: h must be > 0");
  const Eigen::Index n = values.front().size();
  double norm = 0.0;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    if (values[j].size() != n) throw DimensionError("InitialHistory: knot values differ in size");
    if (j > 0 && !(thetas[j] > thetas[j - 1])) throw ArgumentError("InitialHistory: knots must increase");
    norm = std::max(norm, values[j].cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12 * std::max(1.0, h);
  if (thetas.size() > 1 && (thetas.front() > -h + tol || thetas.back() < -tol)) {
    throw ArgumentError("InitialHistory: knots must cover [-h, 0]");
  }
  auto knots = std::make_shared<const std::vector<double>>(std::move(thetas));
  auto vals = std::make_shared<const std::vector<Vector>>(std::move(values));
  Callable fn = [knots, vals](double theta) -> Vector {
    const auto& k = *knots;
    const auto& v = *vals;
    if (theta <= k.front()) return v.front();
    if (theta >= k.back()) return v.back();
    const auto it = std::upper_bound(k.begin(), k.end(), theta);
    const auto j = static_cast<std::size_t>(it - k.begin());
    const double w = (theta - k[j - 1]) / (k[j] - k[j - 1]);
    return (1.0 - w) * v[j - 1] + w * v[j];
  };
  return InitialHistory(std::move(fn), n, h, norm);
}

Vector InitialHistory::operator()(double theta) const { return phi_(theta); }

}  // namespace swfde
