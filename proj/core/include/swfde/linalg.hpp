#pragma once

// Dense small-matrix algebra for positive-vector certificates.
//
// A Metzler matrix M (nonnegative off-diagonal) is Hurwitz iff there is a
// vector xi >> 0 with M xi << 0. Everything in this header reduces to that
// equivalence: the Hurwitz test is the certificate search, and the common
// certificate for a family of Metzler matrices is a small LP.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace swfde {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Square matrix with nonnegative off-diagonal entries.
class MetzlerMatrix {
 public:
  /// Throws DimensionError for non-square input and ArgumentError when an
  /// off-diagonal entry is negative or any entry is non-finite.
  explicit MetzlerMatrix(Matrix m);

  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

/// Vector with every entry strictly positive.
class PositiveVector {
 public:
  explicit PositiveVector(Vector v);

  [[nodiscard]] const Vector& values() const noexcept { return v_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return v_.size(); }

  /// Rescaled copy with unit infinity norm.
  [[nodiscard]] PositiveVector normalized() const;

 private:
  Vector v_;
};

/// Keeps the diagonal and takes absolute values off the diagonal.
[[nodiscard]] MetzlerMatrix metzler_projection(const Matrix& a);

/// Entrywise absolute value.
[[nodiscard]] Matrix abs(const Matrix& a);

/// Scale-aware strictness threshold: -1e-9 * (1 + |M|_inf |xi|_inf).
[[nodiscard]] double feasibility_threshold(const Matrix& m, const Vector& xi);

/// True when every component of m * xi lies at or below feasibility_threshold.
[[nodiscard]] bool strictly_negative(const Matrix& m, const Vector& xi);

/// Canonical certificate: solves M xi = -1. Returns nullopt when M is
/// singular or the solution is not strictly positive (M not Hurwitz).
[[nodiscard]] std::optional<PositiveVector> find_positive_vector(const MetzlerMatrix& m);

[[nodiscard]] bool is_hurwitz_metzler(const MetzlerMatrix& m);

struct CommonSearchOptions {
  double box_bound = 1e6;  // xi_j in [1, box_bound]
};

struct CommonSearchResult {
  std::optional<PositiveVector> vector;
  double margin = 0.0;  // optimal s of max s s.t. M_k xi + s <= 0
  bool degenerate = false;  // margin == 0 up to tolerance
};

/// Searches for one xi >> 0 with M_k xi << 0 for every k by solving
///   max s  s.t.  (M_k xi)_i + s <= 0,  1 <= xi_j <= U.
/// Throws ArgumentError for an empty family, DimensionError on size mismatch.
[[nodiscard]] CommonSearchResult solve_common_positive_vector(
    std::span<const MetzlerMatrix> family, const CommonSearchOptions& options = {});

[[nodiscard]] std::optional<PositiveVector> find_common_positive_vector(
    std::span<const MetzlerMatrix> family, const CommonSearchOptions& options = {});

}  // namespace swfde
