#pragma once

#include "swfde/linalg.hpp"

namespace swfde {

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  Vector x;
  double objective = 0.0;
};

/// Dense tableau simplex for
///   maximize c'x  subject to  A x <= b,  x >= 0,
/// with b >= 0 so the slack basis is an initial vertex. Pivots follow Bland's
/// rule, which rules out cycling on degenerate problems.
[[nodiscard]] LpResult maximize(const Matrix& a, const Vector& b, const Vector& c,
                                int max_iterations = 10000);

}  // namespace swfde
