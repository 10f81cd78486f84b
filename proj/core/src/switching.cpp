#include "swfde/switching.hpp"

#include "swfde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace swfde {

SwitchingSignal::SwitchingSignal(std::size_t initial_mode) : initial_(initial_mode) {}

SwitchingSignal::SwitchingSignal(std::size_t initial_mode, std::vector<double> instants,
                                 std::vector<std::size_t> modes)
    : initial_(initial_mode), instants_(std::move(instants)), modes_(std::move(modes)) {
  if (instants_.size() != modes_.size()) {
    throw ArgumentError("SwitchingSignal: one mode per switching instant required");
  }
  for (std::size_t p = 0; p < instants_.size(); ++p) {
    if (!std::isfinite(instants_[p]) || !(instants_[p] > 0.0)) {
      throw ArgumentError("SwitchingSignal: instants must be finite and > 0");
    }
    if (p > 0 && !(instants_[p] > instants_[p - 1])) {
      throw ArgumentError("SwitchingSignal: instants must be strictly increasing");
    }
  }
}

std::size_t SwitchingSignal::mode_at(double t) const {
  const auto it = std::upper_bound(instants_.begin(), instants_.end(), t);
  if (it == instants_.begin()) return initial_;
  return modes_[static_cast<std::size_t>(it - instants_.begin()) - 1];
}

std::size_t SwitchingSignal::mode_span() const {
  std::size_t m = initial_;
  for (auto k : modes_) m = std::max(m, k);
  return m + 1;
}

void AdtSpec::validate() const {
  if (!(tau_a > 0.0) || !std::isfinite(tau_a)) throw ArgumentError("AdtSpec: tau_a must be > 0");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw ArgumentError("AdtSpec: N_0 must be >= 0");
}

std::size_t count_switches(const SwitchingSignal& sig, double t) {
  if (t <= 0.0) return 0;
  const auto& s = sig.instants();
  return static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), t) - s.begin());
}

AdtCheck validate_adt(const SwitchingSignal& sig, const AdtSpec& spec, double horizon) {
  spec.validate();
  AdtCheck out;
  const auto& s = sig.instants();
  for (std::size_t p = 0; p < s.size() && s[p] <= horizon; ++p) {
    const auto count = static_cast<double>(p + 1);
    if (count > spec.n0 + s[p] / spec.tau_a) {
      out.valid = false;
      out.first_violation = s[p];
      break;
    }
  }
  return out;
}

SwitchingSignal generate_adt_signal(const AdtSpec& spec, std::size_t n_modes, double horizon,
                                    std::uint64_t seed) {
  spec.validate();
  if (n_modes == 0) throw ArgumentError("generate_adt_signal: at least one mode required");
  if (!(horizon > 0.0)) throw ArgumentError("generate_adt_signal: horizon must be > 0");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> first(0, n_modes - 1);
  const std::size_t initial = first(rng);
  if (n_modes == 1) return SwitchingSignal(initial);

  std::exponential_distribution<double> gap(1.0 / spec.tau_a);
  std::uniform_int_distribution<std::size_t> other(0, n_modes - 2);

  std::vector<double> instants;
  std::vector<std::size_t> modes;
  double t = 0.0;
  std::size_t current = initial;
  for (;;) {
    const auto p = static_cast<double>(instants.size() + 1);
    double next = t + std::max(gap(rng), kMinGap);
    // Earliest time at which a p-th switch is admissible.
    next = std::max(next, (p - spec.n0) * spec.tau_a);
    while (p > spec.n0 + next / spec.tau_a) next = std::nextafter(next, std::numeric_limits<double>::infinity());
    if (!(next < horizon)) break;
    std::size_t m = other(rng);
    if (m >= current) ++m;
    instants.push_back(next);
    modes.push_back(m);
    current = m;
    t = next;
  }
  return SwitchingSignal(initial, std::move(instants), std::move(modes));
}

SwitchingSignal periodic_signal(double period, std::size_t n_modes, double horizon) {
  if (!(period > 0.0)) throw ArgumentError("periodic_signal: period must be > 0");
  if (n_modes == 0) throw ArgumentError("periodic_signal: at least one mode required");
  if (n_modes == 1) return SwitchingSignal(0);
  std::vector<double> instants;
  std::vector<std::size_t> modes;
  for (std::size_t p = 1;; ++p) {
    const double t = static_cast<double>(p) * period;
    if (!(t < horizon)) break;
    instants.push_back(t);
    modes.push_back(p % n_modes);
  }
  return SwitchingSignal(0, std::move(instants), std::move(modes));
}

void write_signal_csv(std::ostream& os, const SwitchingSignal& sig) {
  const auto old_precision = os.precision(17);
  os << "t,mode\n";
  os << 0 << ',' << sig.initial_mode() + 1 << '\n';
  for (std::size_t p = 0; p < sig.instants().size(); ++p) {
    os << sig.instants()[p] << ',' << sig.modes()[p] + 1 << '\n';
  }
  os.precision(old_precision);
}

SwitchingSignal read_signal_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw SpecError("signal CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,mode") throw SpecError("signal CSV line 1: expected header 't,mode'");

  std::vector<double> times;
  std::vector<std::size_t> modes;
  for (int lineno = 2; std::getline(is, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw SpecError("signal CSV line " + std::to_string(lineno) + ": expected 't,mode'");
    }
    try {
      const double t = std::stod(line.substr(0, comma));
      const long m = std::stol(line.substr(comma + 1));
      if (m < 1) throw SpecError("signal CSV line " + std::to_string(lineno) + ": modes are 1-based");
      times.push_back(t);
      modes.push_back(static_cast<std::size_t>(m - 1));
    } catch (const std::logic_error&) {
      throw SpecError("signal CSV line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
  }
  if (times.empty()) throw SpecError("signal CSV: missing initial row");
  if (times.front() != 0.0) throw SpecError("signal CSV line 2: first row must be at t = 0");
  try {
    return SwitchingSignal(modes.front(), std::vector<double>(times.begin() + 1, times.end()),
                           std::vector<std::size_t>(modes.begin() + 1, modes.end()));
  } catch (const ArgumentError& e) {
    throw SpecError(std::string("signal CSV: ") + e.what());
  }
}

}  // namespace swfde
