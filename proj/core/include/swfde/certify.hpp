#pragma once

// Positive-vector stability certificates for switched systems.
//
// For per-mode bounds (Ahat_k, Vhat_k) and vectors xi_k >> 0 with
// (Ahat_k + Vhat_k) xi_k << 0, define
//   g_{k,i}(alpha) = (Ahat_k xi_k)_i + e^{alpha h} (Vhat_k xi_k)_i + alpha xi_{k,i}.
// Each g_{k,i} is strictly increasing with g(0) < 0, so it has one positive
// root; alpha_max is the smallest of them. With
//   gamma = max_{k,l,i} xi_{k,i} / xi_{l,i},   tau* = ln(gamma) / alpha_max,
// the switched system is exponentially stable under every switching signal
// with average dwell time tau_a > tau*. A single common xi gives gamma = 1 and
// stability under arbitrary switching.

#include "swfde/linalg.hpp"
#include "swfde/system.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swfde {

/// Which criterion produced a certificate.
enum class Criterion { thm1, thm2, cor1, cor3, cor5, cor6, thm4 };

[[nodiscard]] std::string_view to_string(Criterion c) noexcept;
[[nodiscard]] std::optional<Criterion> criterion_from_string(std::string_view s) noexcept;

struct Certificate {
  std::vector<Vector> xi;  // one per mode, unit infinity norm
  double alpha = 0.0;
  double gamma = 1.0;
  double tau_star = 0.0;
  Criterion theorem = Criterion::cor1;
  bool conditional = false;
};

struct CriterionReport {
  bool feasible = false;
  std::optional<Certificate> certificate;
  /// residuals[k][i] = (Ahat_k xi_k + e^{alpha h} Vhat_k xi_k + alpha xi_k)_i at the reported alpha.
  std::vector<Vector> residuals;
  std::vector<std::string> notes;
};

/// g_{k,i}(alpha) for one mode.
[[nodiscard]] Vector decay_margin(const ModeBounds& bounds, const Vector& xi, double alpha, double h);

/// Smallest positive root of the g_{k,i}. Bisection on [0, hi] with hi doubled
/// until g(hi) > 0, carried to machine precision; returns the lower bracket
/// end so the inequalities hold strictly at the result. Throws
/// PreconditionError when some g_{k,i}(0) >= 0.
[[nodiscard]] double compute_alpha_max(std::span<const ModeBounds> bounds,
                                       std::span<const Vector> xi, double h);

/// max over k, l, i of xi_{k,i} / xi_{l,i}; vectors are normalized first.
[[nodiscard]] double compute_gamma(std::span<const Vector> xi);

/// ln(gamma) / alpha; 0 when gamma == 1. Throws ArgumentError for alpha <= 0
/// or gamma < 1.
[[nodiscard]] double compute_tau_star(double gamma, double alpha);

/// Independent certificate per mode. When `candidates` is given those vectors
/// are validated rather than recomputed.
[[nodiscard]] CriterionReport certify_per_mode(std::span<const ModeBounds> bounds, double h,
                                               std::optional<std::span<const Vector>> candidates = {});

/// One common xi for every mode (gamma = 1, tau* = 0).
[[nodiscard]] CriterionReport certify_common(std::span<const ModeBounds> bounds, double h,
                                             const CommonSearchOptions& options = {});

/// Time-invariant positive linear systems: certificates from A_k + eta_k(0).
/// Throws UnsupportedError when check_positivity fails.
[[nodiscard]] CriterionReport certify_positive(const SwitchedSystem& sys);

/// Sector systems with shared beta: common certificate first, per-mode as fallback.
[[nodiscard]] CriterionReport certify_sector(std::span<const SectorSubsystem> modes, double h);

struct ComparisonTable {
  bool this_criterion = false;  // common zeta for M(P_k) + |B_k|
  bool dual_max = false;        // common zeta for (M(P_k) + Btilde)^T, Btilde = max_k |B_k|
  bool dual_pairs = false;      // common zeta for (M(P_k) + |B_s|)^T, all k, s
  std::optional<Vector> zeta;   // witness for this_criterion
};

[[nodiscard]] ComparisonTable compare_criteria(std::span<const SectorSubsystem> modes);

/// Full report for a system: both the per-mode and the common verdicts.
struct SystemReport {
  CriterionReport per_mode;
  CriterionReport common;
  /// The report to act on: common when feasible, else per-mode.
  [[nodiscard]] const CriterionReport& primary() const noexcept {
    return common.feasible ? common : per_mode;
  }
  /// Human-readable class of signals the primary report covers.
  [[nodiscard]] std::string verdict(bool sector) const;
};

[[nodiscard]] SystemReport certify_system(const SwitchedSystem& sys);

}  // namespace swfde
