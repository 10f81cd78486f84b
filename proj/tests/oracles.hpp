#pragma once

// Independent reference computations used by the tests. None of these go
// through the library's certificate machinery.

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace oracle {

// Hurwitz by spectrum: every eigenvalue has negative real part.
inline bool hurwitz_by_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return (es.eigenvalues().real().array() < 0.0).all();
}

// 2x2 closed form: trace < 0 and det > 0.
inline bool hurwitz_2x2(const Eigen::MatrixXd& m) {
  return m.trace() < 0.0 && m.determinant() > 0.0;
}

// Random Metzler matrix: off-diagonal in [0, off], diagonal in [dlo, dhi].
inline Eigen::MatrixXd random_metzler(std::mt19937_64& rng, Eigen::Index n, double off = 2.0,
                                      double dlo = -6.0, double dhi = 1.0) {
  std::uniform_real_distribution<double> o(0.0, off);
  std::uniform_real_distribution<double> d(dlo, dhi);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? d(rng) : o(rng);
  }
  return m;
}

// Smallest alpha > 0 with max_i g_i(alpha) >= 0 by a two-level grid scan:
// coarse step to bracket, then a fine step inside the bracket.
template <class G>
double grid_scan_root(G g, double coarse = 1e-2, double fine = 1e-6, double limit = 100.0) {
  double a = 0.0;
  while (a < limit && g(a + coarse) < 0.0) a += coarse;
  double b = a;
  while (b < a + coarse && g(b + fine) < 0.0) b += fine;
  return b + 0.5 * fine;
}

}  // namespace oracle
