#include "swfde/builtins.hpp"

#include "swfde/errors.hpp"

#include <cmath>

namespace swfde::builtins {

namespace {

double sq(double v) { return v * v; }

void require_dim(const Vector& x, const char* who) {
  if (x.size() != 2) throw DimensionError(std::string(who) + ": state must have dimension 2");
}

}  // namespace

Vector example1_mode1(double t, const Vector& x, const History& past) {
  require_dim(x, "example1_mode1");
  const Vector d = past.at(t - 1.0);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double r = std::hypot(x(0), x(1));
  Vector out(2);
  out(0) = -6.0 * x(0) + r * s * s + 2.0 * s * d(0) + c * d(1);
  out(1) = x(0) * sq(std::sin(d(1))) - 5.0 * x(1) + x(1) * sq(std::sin(d(0))) + c * d(0) + 2.0 * c * d(1);
  return out;
}

Vector example1_mode2(double t, const Vector& x, const History& past) {
  require_dim(x, "example1_mode2");
  const Vector d = past.at(t - 1.0);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double r = std::hypot(x(0), x(1));
  Vector out(2);
  out(0) = -5.0 * x(0) + x(0) * sq(std::cos(d(0))) + x(1) * sq(std::sin(d(1))) + 2.0 * c * d(0) + c * d(1);
  out(1) = r * c * c - 6.0 * x(1) + s * d(0) + 2.0 * s * d(1);
  return out;
}

double example2_psi1(double x) {
  const double c = std::cos(x);
  const double s = std::sin(x);
  return 2.0 * x + x * c * c / (1.0 + s * s);
}

double example2_psi2(double x) { return x + x * std::exp(-x * x); }

std::optional<RightHandSide> right_hand_side(const std::string& name) {
  if (name == "example1_mode1") return RightHandSide(&example1_mode1);
  if (name == "example1_mode2") return RightHandSide(&example1_mode2);
  return std::nullopt;
}

std::optional<std::function<double(double)>> scalar_function(const std::string& name) {
  if (name == "example2_psi1") return std::function<double(double)>(&example2_psi1);
  if (name == "example2_psi2") return std::function<double(double)>(&example2_psi2);
  if (name == "identity") return std::function<double(double)>([](double v) { return v; });
  if (name == "tanh") return std::function<double(double)>([](double v) { return std::tanh(v); });
  return std::nullopt;
}

std::optional<InitialHistory> history(const std::string& name, Eigen::Index n, double h) {
  if (name == "ex1_phi" || name == "ex2_phi") {
    if (n != 2) throw DimensionError(name + " needs dimension 2");
    if (name == "ex1_phi") {
      return InitialHistory([](double th) { return Vector((Vector(2) << -1.0, std::cos(th)).finished()); }, n, h);
    }
    return InitialHistory([](double th) { return Vector((Vector(2) << std::sin(th), std::cos(th)).finished()); }, n, h);
  }
  if (name == "zero") {
    return InitialHistory([n](double) { return Vector(Vector::Zero(n)); }, n, h);
  }
  if (name == "ones") {
    return InitialHistory([n](double) { return Vector(Vector::Ones(n)); }, n, h);
  }
  return std::nullopt;
}

std::vector<std::string> right_hand_side_names() { return {"example1_mode1", "example1_mode2"}; }
std::vector<std::string> scalar_function_names() {
  return {"example2_psi1", "example2_psi2", "identity", "tanh"};
}
std::vector<std::string> history_names() { return {"ex1_phi", "ex2_phi", "zero", "ones"}; }

}  // namespace swfde::builtins
