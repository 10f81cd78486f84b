#pragma once

// Switching signals and average-dwell-time (ADT) constraints.
//
// A signal is piecewise constant and right-continuous: modes()[p] is active on
// [instants()[p], instants()[p+1]) and initial_mode() on [0, instants()[0]).
// ADT (tau_a, N_0) requires N(0, t] <= N_0 + t / tau_a for all t > 0; since
// the count only jumps at instants while the bound keeps growing, checking at
// instants is enough. Mode indices are 0-based here and 1-based in files.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace swfde {

class SwitchingSignal {
 public:
  /// Constant signal.
  explicit SwitchingSignal(std::size_t initial_mode);
  SwitchingSignal(std::size_t initial_mode, std::vector<double> instants,
                  std::vector<std::size_t> modes);

  [[nodiscard]] std::size_t initial_mode() const noexcept { return initial_; }
  [[nodiscard]] const std::vector<double>& instants() const noexcept { return instants_; }
  [[nodiscard]] const std::vector<std::size_t>& modes() const noexcept { return modes_; }

  /// Active mode at time t >= 0 (right-continuous).
  [[nodiscard]] std::size_t mode_at(double t) const;
  /// Largest mode index + 1.
  [[nodiscard]] std::size_t mode_span() const;

  friend bool operator==(const SwitchingSignal&, const SwitchingSignal&) = default;

 private:
  std::size_t initial_;
  std::vector<double> instants_;
  std::vector<std::size_t> modes_;
};

struct AdtSpec {
  double tau_a = 1.0;
  double n0 = 0.0;

  /// Throws ArgumentError unless tau_a > 0 and n0 >= 0.
  void validate() const;
};

struct AdtCheck {
  bool valid = true;
  std::optional<double> first_violation;
};

/// Number of instants in (0, t].
[[nodiscard]] std::size_t count_switches(const SwitchingSignal& sig, double t);

[[nodiscard]] AdtCheck validate_adt(const SwitchingSignal& sig, const AdtSpec& spec, double horizon);

/// Random signal in the ADT class, deterministic in `seed`. Gaps are drawn
/// from an exponential law with mean tau_a (floored at kMinGap), and any
/// instant that would break the ADT bound is pushed back to the earliest
/// admissible time. Modes are uniform with no immediate repeats.
[[nodiscard]] SwitchingSignal generate_adt_signal(const AdtSpec& spec, std::size_t n_modes,
                                                  double horizon, std::uint64_t seed);

/// Round-robin modes, one switch every `period`, instants strictly below horizon.
[[nodiscard]] SwitchingSignal periodic_signal(double period, std::size_t n_modes, double horizon);

inline constexpr double kMinGap = 1e-6;

/// CSV with header `t,mode`: (0, initial) then one row per instant; 1-based modes.
void write_signal_csv(std::ostream& os, const SwitchingSignal& sig);
/// Throws SpecError on malformed input.
[[nodiscard]] SwitchingSignal read_signal_csv(std::istream& is);

}  // namespace swfde
