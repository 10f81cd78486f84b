#include "swfde/certify.hpp"

#include "swfde/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace swfde {

namespace {

constexpr std::array<std::pair<Criterion, std::string_view>, 7> kCriterionNames{{
    {Criterion::thm1, "Thm1"},
    {Criterion::thm2, "Thm2"},
    {Criterion::cor1, "Cor1"},
    {Criterion::cor3, "Cor3"},
    {Criterion::cor5, "Cor5"},
    {Criterion::cor6, "Cor6"},
    {Criterion::thm4, "Thm4"},
}};

Eigen::Index validate_bounds(std::span<const ModeBounds> bounds, double h) {
  if (bounds.empty()) throw ArgumentError("certify: no modes");
  if (!(h >= 0.0) || !std::isfinite(h)) throw ArgumentError("certify: h must be >= 0");
  const Eigen::Index n = bounds.front().a_hat.rows();
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const auto& b = bounds[k];
    if (b.a_hat.rows() != n || b.a_hat.cols() != n || b.v_hat.rows() != n || b.v_hat.cols() != n) {
      throw DimensionError("certify: bounds of mode " + std::to_string(k + 1) + " are not n x n");
    }
    if ((b.v_hat.array() < 0.0).any()) {
      throw ArgumentError("certify: Vhat of mode " + std::to_string(k + 1) + " has a negative entry");
    }
  }
  return n;
}

MetzlerMatrix combined(const ModeBounds& b) { return MetzlerMatrix(b.a_hat + b.v_hat); }

std::vector<Vector> residuals_at(std::span<const ModeBounds> bounds, std::span<const Vector> xi,
                                 double alpha, double h) {
  std::vector<Vector> out;
  out.reserve(bounds.size());
  for (std::size_t k = 0; k < bounds.size(); ++k) out.push_back(decay_margin(bounds[k], xi[k], alpha, h));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Fill alpha/gamma/tau*/residuals for normalized vectors that already satisfy
// (Ahat + Vhat) xi << 0.
CriterionReport finish(std::span<const ModeBounds> bounds, std::vector<Vector> xi, double h,
                       Criterion tag) {
  CriterionReport report;
  const double alpha = compute_alpha_max(bounds, xi, h);
  if (!(alpha > 0.0)) {
    report.notes.emplace_back("decay rate underflows to 0; certificate rejected");
    return report;
  }
  Certificate cert;
  cert.gamma = compute_gamma(xi);
  cert.alpha = alpha;
  cert.tau_star = compute_tau_star(cert.gamma, alpha);
  cert.theorem = tag;
  report.residuals = residuals_at(bounds, xi, alpha, h);
  cert.xi = std::move(xi);
  report.feasible = true;
  report.certificate = std::move(cert);
  return report;
}

}  // namespace

std::string_view to_string(Criterion c) noexcept {
  for (const auto& [k, name] : kCriterionNames) {
    if (k == c) return name;
  }
  return "?";
}

std::optional<Criterion> criterion_from_string(std::string_view s) noexcept {
  for (const auto& [k, name] : kCriterionNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

Vector decay_margin(const ModeBounds& bounds, const Vector& xi, double alpha, double h) {
  return bounds.a_hat * xi + std::exp(alpha * h) * (bounds.v_hat * xi) + alpha * xi;
}

double compute_alpha_max(std::span<const ModeBounds> bounds, std::span<const Vector> xi, double h) {
  const Eigen::Index n = validate_bounds(bounds, h);
  if (xi.size() != bounds.size()) throw DimensionError("compute_alpha_max: one vector per mode required");
  double alpha_max = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    if (xi[k].size() != n) throw DimensionError("compute_alpha_max: vector length differs from n");
    const Vector av = bounds[k].a_hat * xi[k];
    const Vector vv = bounds[k].v_hat * xi[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = av(i);
      const double v = vv(i);
      const double x = xi[k](i);
      auto g = [&](double alpha) { return a + std::exp(alpha * h) * v + alpha * x; };
      if (!(g(0.0) < 0.0)) {
        throw PreconditionError("compute_alpha_max: g(0) >= 0 for mode " + std::to_string(k + 1) +
                                ", row " + std::to_string(i + 1) + " (certificate invalid)");
      }
      double lo = 0.0;
      double hi = 1.0;
      while (!(g(hi) > 0.0)) {
        if (g(hi) < 0.0) lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw PreconditionError("compute_alpha_max: root bracket overflow");
      }
      for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      alpha_max = std::min(alpha_max, lo);
    }
  }
  return alpha_max;
}

double compute_gamma(std::span<const Vector> xi) {
  if (xi.empty()) throw ArgumentError("compute_gamma: empty list");
  const Eigen::Index n = xi.front().size();
  std::vector<Vector> unit;
  unit.reserve(xi.size());
  for (const auto& v : xi) {
    if (v.size() != n) throw DimensionError("compute_gamma: vectors differ in length");
    unit.push_back(PositiveVector(v).normalized().values());
  }
  double gamma = 1.0;
  for (const auto& a : unit) {
    for (const auto& b : unit) gamma = std::max(gamma, (a.array() / b.array()).maxCoeff());
  }
  return gamma;
}

double compute_tau_star(double gamma, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("compute_tau_star: alpha must be > 0");
  if (!(gamma >= 1.0)) throw ArgumentError("compute_tau_star: gamma must be >= 1");
  if (gamma == 1.0) return 0.0;
  return std::log(gamma) / alpha;
}

CriterionReport certify_per_mode(std::span<const ModeBounds> bounds, double h,
                                 std::optional<std::span<const Vector>> candidates) {
  const Eigen::Index n = validate_bounds(bounds, h);
  if (candidates && candidates->size() != bounds.size()) {
    throw DimensionError("certify_per_mode: one candidate vector per mode required");
  }

  std::vector<Vector> xi;
  std::vector<std::string> notes;
  bool feasible = true;
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const MetzlerMatrix m = combined(bounds[k]);
    if (candidates) {
      const Vector& c = (*candidates)[k];
      if (c.size() != n) throw DimensionError("certify_per_mode: candidate has wrong length");
      if ((c.array() <= 0.0).any() || !strictly_negative(m.matrix(), c)) {
        feasible = false;
        notes.push_back("mode " + std::to_string(k + 1) + ": candidate xi does not satisfy (Ahat+Vhat) xi << 0");
        continue;
      }
      xi.push_back(PositiveVector(c).normalized().values());
    } else if (auto found = find_positive_vector(m)) {
      xi.push_back(found->normalized().values());
    } else {
      feasible = false;
      notes.push_back("mode " + std::to_string(k + 1) + ": Ahat+Vhat is not Hurwitz, no xi >> 0 exists");
    }
  }

  if (!feasible) {
    CriterionReport report;
    report.notes = std::move(notes);
    return report;
  }
  CriterionReport report = finish(bounds, std::move(xi), h, candidates ? Criterion::thm1 : Criterion::cor1);
  if (candidates) notes.emplace_back("candidate vectors validated, not recomputed");
  if (report.feasible) {
    const auto& c = *report.certificate;
    notes.push_back("GES over switching signals with average dwell time tau_a > tau* = " +
                    format_double(c.tau_star));
    notes.emplace_back("gamma uses unit-norm xi_k; per-mode rescaling to shrink tau* is not attempted");
  }
  report.notes.insert(report.notes.begin(), notes.begin(), notes.end());
  return report;
}

CriterionReport certify_common(std::span<const ModeBounds> bounds, double h,
                               const CommonSearchOptions& options) {
  validate_bounds(bounds, h);
  std::vector<MetzlerMatrix> family;
  family.reserve(bounds.size());
  for (const auto& b : bounds) family.push_back(combined(b));

  CommonSearchResult found;
  if (family.size() == 1) {
    found.vector = find_positive_vector(family.front());
  } else {
    found = solve_common_positive_vector(family, options);
  }
  if (!found.vector) {
    CriterionReport report;
    report.notes.emplace_back("no common xi >> 0 with (Ahat_k+Vhat_k) xi << 0 for every mode");
    if (found.degenerate) {
      report.notes.emplace_back("degenerate feasibility (optimal margin 0) classified infeasible");
    }
    return report;
  }
  const Vector unit = found.vector->normalized().values();
  std::vector<Vector> xi(bounds.size(), unit);
  CriterionReport report = finish(bounds, std::move(xi), h, Criterion::thm2);
  if (report.feasible) report.notes.emplace_back("common certificate: GES over every switching signal (any tau_a > 0)");
  return report;
}

CriterionReport certify_positive(const SwitchedSystem& sys) {
  if (!check_positivity(sys)) {
    throw UnsupportedError("certify_positive: system is not a positive linear system");
  }
  std::vector<ModeBounds> bounds;
  for (const auto& mode : sys.modes()) {
    const auto& lin = std::get<LinearDelaySubsystem>(mode);
    bounds.push_back({lin.a(0.0), eta_at_zero(lin.delay)});
  }
  const double h = sys.horizon_delay();
  CriterionReport report = certify_per_mode(bounds, h);
  if (!report.feasible) {
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      if (!is_hurwitz_metzler(MetzlerMatrix(bounds[k].a_hat + bounds[k].v_hat))) {
        report.notes.push_back("mode " + std::to_string(k + 1) +
                               ": A_k + eta_k(0) is not Hurwitz, so this positive subsystem is not GES");
      }
    }
    return report;
  }
  CriterionReport common = certify_common(bounds, h);
  CriterionReport& chosen = common.feasible ? common : report;
  chosen.certificate->theorem = Criterion::cor6;
  return std::move(chosen);
}

CriterionReport certify_sector(std::span<const SectorSubsystem> modes, double h) {
  if (modes.empty()) throw ArgumentError("certify_sector: no modes");
  const Vector& beta = modes.front().beta;
  for (const auto& m : modes) {
    if (m.beta.size() != beta.size() || (m.beta - beta).cwiseAbs().maxCoeff() != 0.0) {
      throw ArgumentError("certify_sector: modes use different sector slopes beta");
    }
  }
  std::vector<Subsystem> subs(modes.begin(), modes.end());
  const SwitchedSystem sys(beta.size(), h, std::move(subs));
  const BoundingData bd = bounding_data(sys);

  CriterionReport report = certify_common(bd.modes, h);
  if (report.feasible) {
    report.notes.emplace_back("AES over every switching signal and every admissible sector nonlinearity");
  } else {
    CriterionReport per_mode = certify_per_mode(bd.modes, h);
    per_mode.notes.insert(per_mode.notes.begin(), report.notes.begin(), report.notes.end());
    report = std::move(per_mode);
    if (report.feasible) {
      report.notes.emplace_back("AES over switching signals with tau_a > tau* for every admissible sector nonlinearity");
    }
  }
  if (report.certificate) report.certificate->theorem = Criterion::thm4;
  if (bd.sampled) report.notes.emplace_back("sampled-bound certificate");
  return report;
}

ComparisonTable compare_criteria(std::span<const SectorSubsystem> modes) {
  if (modes.empty()) throw ArgumentError("compare_criteria: no modes");
  auto m_of = [](const Matrix& p) { return metzler_projection(p).matrix(); };
  auto abs_of = [](const Matrix& b) { return Matrix(b.cwiseAbs()); };

  std::vector<Matrix> mp;
  std::vector<Matrix> bb;
  for (const auto& m : modes) {
    mp.push_back(m.p.sup(m_of));
    bb.push_back(m.b.sup(abs_of));
  }
  Matrix b_tilde = bb.front();
  for (const auto& b : bb) b_tilde = b_tilde.cwiseMax(b);

  auto feasible = [](const std::vector<Matrix>& ms, std::optional<Vector>* witness) {
    std::vector<MetzlerMatrix> family;
    family.reserve(ms.size());
    for (const auto& m : ms) family.emplace_back(m);
    auto v = find_common_positive_vector(family);
    if (witness != nullptr && v) *witness = v->values();
    return v.has_value();
  };

  ComparisonTable table;
  std::vector<Matrix> ours;
  std::vector<Matrix> dual_max;
  std::vector<Matrix> dual_pairs;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    ours.push_back(mp[k] + bb[k]);
    dual_max.push_back((mp[k] + b_tilde).transpose());
    for (std::size_t s = 0; s < bb.size(); ++s) dual_pairs.push_back((mp[k] + bb[s]).transpose());
  }
  table.this_criterion = feasible(ours, &table.zeta);
  table.dual_max = feasible(dual_max, nullptr);
  table.dual_pairs = feasible(dual_pairs, nullptr);
  return table;
}

std::string SystemReport::verdict(bool sector) const {
  const std::string kind = sector ? "AES" : "GES";
  if (common.feasible) return kind + " over Σ_+";
  if (per_mode.feasible) {
    return kind + " over Σ_{τ_a,N_0} for τ_a > τ* = " + format_double(per_mode.certificate->tau_star);
  }
  return "no certificate";
}

SystemReport certify_system(const SwitchedSystem& sys) {
  const BoundingData bd = bounding_data(sys);
  const double h = sys.horizon_delay();

  SystemReport out;
  out.per_mode = certify_per_mode(bd.modes, h);
  out.common = certify_common(bd.modes, h);

  Criterion per_tag = Criterion::cor1;
  Criterion common_tag = Criterion::thm2;
  if (sys.all_sector_modes()) {
    per_tag = common_tag = Criterion::thm4;
  } else if (sys.all_linear_modes()) {
    per_tag = Criterion::cor3;
    common_tag = Criterion::cor5;
  }
  for (auto* r : {&out.per_mode, &out.common}) {
    if (r->certificate) {
      r->certificate->theorem = (r == &out.per_mode) ? per_tag : common_tag;
      r->certificate->conditional = bd.conditional;
    }
    if (bd.sampled) r->notes.emplace_back("sampled-bound certificate");
    if (bd.conditional) r->notes.emplace_back("conditional on declared bounds");
  }
  return out;
}

}  // namespace swfde
