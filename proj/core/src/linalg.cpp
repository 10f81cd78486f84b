#include "swfde/linalg.hpp"

#include "swfde/errors.hpp"
#include "swfde/simplex.hpp"

#include <cmath>
#include <string>

namespace swfde {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ArgumentError(std::string(what) + ": non-finite entry");
}

}  // namespace

MetzlerMatrix::MetzlerMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionError("MetzlerMatrix: matrix must be square and non-empty");
  }
  require_finite(m_, "MetzlerMatrix");
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (i != j && m_(i, j) < 0.0) {
        throw ArgumentError("MetzlerMatrix: negative off-diagonal entry at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

PositiveVector::PositiveVector(Vector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw DimensionError("PositiveVector: empty vector");
  if (!v_.allFinite() || (v_.array() <= 0.0).any()) {
    throw ArgumentError("PositiveVector: every entry must be finite and > 0");
  }
}

PositiveVector PositiveVector::normalized() const {
  return PositiveVector(v_ / v_.maxCoeff());
}

MetzlerMatrix metzler_projection(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("metzler_projection: matrix must be square");
  require_finite(a, "metzler_projection");
  Matrix m = a.cwiseAbs();
  m.diagonal() = a.diagonal();
  return MetzlerMatrix(std::move(m));
}

Matrix abs(const Matrix& a) { return a.cwiseAbs(); }

double feasibility_threshold(const Matrix& m, const Vector& xi) {
  const double norm_m = m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
  const double norm_xi = xi.size() == 0 ? 0.0 : xi.cwiseAbs().maxCoeff();
  return -1e-9 * (1.0 + norm_m * norm_xi);
}

bool strictly_negative(const Matrix& m, const Vector& xi) {
  if (m.cols() != xi.size()) throw DimensionError("strictly_negative: shape mismatch");
  const Vector r = m * xi;
  return (r.array() <= feasibility_threshold(m, xi)).all();
}

std::optional<PositiveVector> find_positive_vector(const MetzlerMatrix& m) {
  const Eigen::FullPivLU<Matrix> lu(m.matrix());
  if (!lu.isInvertible()) return std::nullopt;
  const Vector xi = lu.solve(-Vector::Ones(m.size()));
  if (!xi.allFinite() || (xi.array() <= 0.0).any()) return std::nullopt;
  if (!strictly_negative(m.matrix(), xi)) return std::nullopt;
  return PositiveVector(xi);
}

bool is_hurwitz_metzler(const MetzlerMatrix& m) { return find_positive_vector(m).has_value(); }

CommonSearchResult solve_common_positive_vector(std::span<const MetzlerMatrix> family,
                                                const CommonSearchOptions& options) {
  if (family.empty()) throw ArgumentError("find_common_positive_vector: empty family");
  if (!(options.box_bound > 1.0)) throw ArgumentError("find_common_positive_vector: box bound must exceed 1");
  const Eigen::Index n = family.front().size();
  for (const auto& m : family) {
    if (m.size() != n) throw DimensionError("find_common_positive_vector: dimension mismatch");
  }

  // Substitute xi = 1 + y (0 <= y <= U-1) and s = t - shift so the origin is a
  // vertex: rows M_k y + t <= shift - M_k 1, y_j <= U - 1.
  const auto count = static_cast<Eigen::Index>(family.size());
  const Eigen::Index ineq = count * n;
  double shift = 0.0;
  for (const auto& m : family) shift = std::max(shift, m.matrix().rowwise().sum().maxCoeff());

  Matrix a = Matrix::Zero(ineq + n, n + 1);
  Vector b(ineq + n);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Matrix& m = family[static_cast<std::size_t>(k)].matrix();
    a.block(k * n, 0, n, n) = m;
    a.block(k * n, n, n, 1).setOnes();
    b.segment(k * n, n) = (shift - m.rowwise().sum().array()).matrix();
  }
  a.block(ineq, 0, n, n).setIdentity();
  b.tail(n).setConstant(options.box_bound - 1.0);
  b = b.cwiseMax(0.0);

  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;

  const LpResult lp = maximize(a, b, c);
  CommonSearchResult out;
  if (lp.status != LpStatus::optimal) return out;

  const Vector xi = Vector::Ones(n) + lp.x.head(n);
  out.margin = lp.x(n) - shift;

  double tol = 0.0;
  for (const auto& m : family) tol = std::max(tol, -feasibility_threshold(m.matrix(), xi));
  if (out.margin <= tol) {
    out.degenerate = std::abs(out.margin) <= tol;
    return out;
  }
  for (const auto& m : family) {
    if (!strictly_negative(m.matrix(), xi)) return out;
  }
  out.vector = PositiveVector(xi);
  return out;
}

std::optional<PositiveVector> find_common_positive_vector(std::span<const MetzlerMatrix> family,
                                                          const CommonSearchOptions& options) {
  return solve_common_positive_vector(family, options).vector;
}

}  // namespace swfde
