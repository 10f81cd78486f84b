#include "swfde/simplex.hpp"

#include "swfde/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace swfde {

LpResult maximize(const Matrix& a, const Vector& b, const Vector& c, int max_iterations) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index vars = a.cols();
  if (b.size() != rows || c.size() != vars) {
    throw DimensionError("maximize: A, b, c shapes disagree");
  }
  if ((b.array() < 0.0).any()) {
    throw ArgumentError("maximize: right-hand side must be nonnegative");
  }

  // Tableau columns: [x (vars) | slack (rows) | rhs]; last row is the objective.
  const Eigen::Index width = vars + rows + 1;
  Matrix t = Matrix::Zero(rows + 1, width);
  t.topLeftCorner(rows, vars) = a;
  t.block(0, vars, rows, rows).setIdentity();
  t.col(width - 1).head(rows) = b;
  t.row(rows).head(vars) = -c.transpose();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = vars + i;

  const double scale = 1.0 + a.cwiseAbs().maxCoeff() + c.cwiseAbs().maxCoeff();
  const double eps = 1e-12 * scale;

  LpResult result;
  int iter = 0;
  for (;; ++iter) {
    if (iter >= max_iterations) {
      result.status = LpStatus::iteration_limit;
      break;
    }
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width - 1; ++j) {
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      result.status = LpStatus::optimal;
      break;
    }

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double coef = t(i, enter);
      if (coef <= eps) continue;
      const double ratio = t(i, width - 1) / coef;
      if (leave < 0) {
        best = ratio;
        leave = i;
        continue;
      }
      const double tie = 1e-15 * (1.0 + std::abs(best));
      // Bland: among (near-)ties leave on the smallest basic index.
      if (ratio < best - tie ||
          (ratio <= best + tie && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      result.status = LpStatus::unbounded;
      break;
    }

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  result.x = Vector::Zero(vars);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    if (v < vars) result.x(v) = std::max(0.0, t(i, width - 1));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace swfde
