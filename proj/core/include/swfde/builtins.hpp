#pragma once

// Named right-hand sides, scalar nonlinearities and initial histories that a
// JSON system spec can refer to by string.

#include "swfde/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swfde::builtins {

/// Two-mode nonlinear example with unit delay (modes 1 and 2).
[[nodiscard]] Vector example1_mode1(double t, const Vector& x, const History& past);
[[nodiscard]] Vector example1_mode2(double t, const Vector& x, const History& past);

/// Sector nonlinearities: 2x + x cos^2 x / (1 + sin^2 x) and x + x e^{-x^2}.
[[nodiscard]] double example2_psi1(double x);
[[nodiscard]] double example2_psi2(double x);

[[nodiscard]] std::optional<RightHandSide> right_hand_side(const std::string& name);
[[nodiscard]] std::optional<std::function<double(double)>> scalar_function(const std::string& name);

/// Initial history by name for dimension n and delay h: ex1_phi = (-1, cos theta),
/// ex2_phi = (sin theta, cos theta), zero, ones.
[[nodiscard]] std::optional<InitialHistory> history(const std::string& name, Eigen::Index n, double h);

[[nodiscard]] std::vector<std::string> right_hand_side_names();
[[nodiscard]] std::vector<std::string> scalar_function_names();
[[nodiscard]] std::vector<std::string> history_names();

}  // namespace swfde::builtins
