#pragma once

// JSON documents: system specs, certificate reports and Monte-Carlo summaries.
//
// System spec:
//   { "n": 2, "h": 1.0,
//     "modes": [ { "kind": "linear", "A": M, "delays": [{"B": M, "lag": L}],
//                  "kernel": {"dtheta": d, "samples": [M, ...]} },
//                { "kind": "sector", "P": M, "B": M, "beta": [..] },
//                { "kind": "blackbox", "rhs": name, "bounds": {"Ahat": M, "Vhat": M} } ],
//     "psi": [name, ...], "phi": name }
// A matrix M is a row-major nested array, or {"t0", "dt", "samples": [M, ...]}
// for a uniformly sampled coefficient. A lag L is a number or the same
// sampled object with scalar samples. A sector mode may give its delayed
// coefficient as a single-entry "delays" list instead of "B".

#include "swfde/certify.hpp"
#include "swfde/system.hpp"
#include "swfde/verify.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace swfde {

struct SystemSpec {
  SwitchedSystem system;
  std::vector<std::string> psi_names;
  std::optional<std::string> phi_name;
};

/// Throws SpecError naming the offending field (or the parse position).
[[nodiscard]] SystemSpec parse_system_spec(const std::string& text);
[[nodiscard]] SystemSpec load_system_spec(const std::filesystem::path& path);

/// {feasible, theorem, xi, alpha, gamma, tau_star, residuals, conditional, notes}.
[[nodiscard]] std::string certificate_to_json(const CriterionReport& report, int indent = 2);
[[nodiscard]] CriterionReport certificate_from_json(const std::string& text);
[[nodiscard]] CriterionReport load_certificate(const std::filesystem::path& path);

/// {trials, passes, max_M_emp, min_lambda_fit, lambda_target, failures}.
[[nodiscard]] std::string summary_to_json(const MonteCarloSummary& summary, int indent = 2);

/// {this_criterion, dual_max, dual_pairs, zeta}.
[[nodiscard]] std::string comparison_to_json(const ComparisonTable& table, int indent = 2);

/// Initial history as CSV `theta,x1,...,xn` with increasing theta covering [-h, 0].
[[nodiscard]] InitialHistory read_history_csv(std::istream& is, Eigen::Index n, double h);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace swfde
