#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "hyperlab/dyadic.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/turing.hpp"

namespace hyperlab::zeno {

/// Accelerated machine timing: step i (counting from 0) lasts base·2^(-k·i).
/// The ratio is restricted to powers of two so every partial sum stays an
/// exact binary fraction.
struct ZenoSchedule {
  Dyadic base = 1;
  unsigned ratio_log2 = 1;

  double ratio() const { return std::ldexp(1.0, -static_cast<int>(ratio_log2)); }

  /// base / (1 − ratio), the total time of infinitely many steps.
  double limit() const {
    return base.to_double() / (1.0 - ratio());
  }

  /// Exact test t ≥ base/(1−2^-k), i.e. t·(2^k − 1) ≥ base·2^k.
  bool at_or_past_limit(const Dyadic& t) const {
    const Dyadic two_k = Dyadic::power_of_two(ratio_log2);
    return t * (two_k - 1) >= base * two_k;
  }
};

inline void validate(const ZenoSchedule& s) {
  if (s.base.sign() <= 0) fail(ErrorKind::domain, "base step time must be positive");
  if (s.ratio_log2 == 0) fail(ErrorKind::domain, "ratio must lie in (0,1)");
}

/// t(n) = Σ_{i=0..n} base·ratio^i, exactly.
inline Dyadic zeno_time(std::uint64_t n, const ZenoSchedule& s = {}) {
  validate(s);
  const auto k = s.ratio_log2;
  // Σ_{i=0..n} 2^{k(n-i)} = (2^{k(n+1)} − 1)/(2^k − 1), an exact integer.
  BigInt repunit = (BigInt(1) << static_cast<unsigned>(k * (n + 1))) - 1;
  if (k > 1) repunit /= (BigInt(1) << k) - 1;
  return s.base * Dyadic(std::move(repunit), -static_cast<std::int64_t>(k * n));
}

struct StepBudget {
  enum class Kind { below_first_step, finite, unbounded };
  Kind kind = Kind::below_first_step;
  std::uint64_t steps = 0;  // meaningful when kind == finite

  friend bool operator==(const StepBudget&, const StepBudget&) = default;
};

/// Largest n with zeno_time(n) ≤ t; Unbounded once t reaches the limit.
inline StepBudget steps_within_budget(const Dyadic& t, const ZenoSchedule& s = {}) {
  validate(s);
  if (t.sign() <= 0) fail(ErrorKind::domain, "time budget must be positive");
  if (s.at_or_past_limit(t)) return {StepBudget::Kind::unbounded, 0};
  if (t < s.base) return {StepBudget::Kind::below_first_step, 0};

  // Remaining gap limit − t(n) = limit·2^{-k(n+1)}; estimate n from logs and
  // settle it with exact comparisons.
  const Dyadic two_k = Dyadic::power_of_two(s.ratio_log2);
  const Dyadic scaled_limit = s.base * two_k;
  const Dyadic scaled_gap = scaled_limit - t * (two_k - 1);
  const double bits = scaled_limit.log2_abs() - scaled_gap.log2_abs();
  const double estimate = std::floor(bits / s.ratio_log2) - 1.0;
  std::uint64_t n = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
  while (n > 0 && zeno_time(n, s) > t) --n;
  while (zeno_time(n + 1, s) <= t) ++n;
  return {StepBudget::Kind::finite, n};
}

/// Number of steps whose duration stays at or above `min_step_duration` when
/// the first step takes `first_step`. Lengthening the first step only buys
/// log₂ more steps before the physical floor is hit.
inline std::uint64_t realizable_steps(const Dyadic& first_step, const Dyadic& min_step_duration,
                                      unsigned ratio_log2 = 1) {
  if (first_step.sign() <= 0 || min_step_duration.sign() <= 0)
    fail(ErrorKind::domain, "step durations must be positive");
  if (ratio_log2 == 0) fail(ErrorKind::domain, "ratio must lie in (0,1)");
  if (first_step < min_step_duration) return 0;
  // Largest j with first·2^{-kj} ≥ floor; the count is j + 1.
  const double bits = first_step.log2_abs() - min_step_duration.log2_abs();
  const double estimate = std::floor(bits / ratio_log2);
  std::uint64_t j = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
  auto fits = [&](std::uint64_t jj) {
    return first_step >= min_step_duration * Dyadic::power_of_two(static_cast<std::int64_t>(ratio_log2 * jj));
  };
  while (j > 0 && !fits(j)) --j;
  while (fits(j + 1)) ++j;
  return j + 1;
}

// ---------------------------------------------------------------------------

enum class LampState { on, off, undefined };

constexpr std::string_view to_string(LampState s) noexcept {
  switch (s) {
    case LampState::on: return "On";
    case LampState::off: return "Off";
    case LampState::undefined: return "Undefined";
  }
  return "?";
}

struct LampConvention {
  bool on_at_start = true;  // state on [0, first toggle)
};

struct LampReading {
  LampState state = LampState::undefined;
  std::uint64_t toggles = 0;  // toggles at or before t
};

/// Lamp switched at t = 0, toggled at every zeno_time(n). Only defined on
/// [0, limit): nothing fixes its value from the limit on.
inline LampReading thomson_lamp(const Dyadic& t, const ZenoSchedule& s = {},
                                LampConvention conv = {}) {
  validate(s);
  if (t.sign() < 0) fail(ErrorKind::domain, "lamp time must be non-negative");
  if (s.at_or_past_limit(t)) return {LampState::undefined, 0};
  std::uint64_t toggles = 0;
  if (!t.is_zero()) {
    const auto budget = steps_within_budget(t, s);
    toggles = budget.kind == StepBudget::Kind::finite ? budget.steps + 1 : 0;
  }
  const bool on = conv.on_at_start != (toggles % 2 == 1);
  return {on ? LampState::on : LampState::off, toggles};
}

// ---------------------------------------------------------------------------

/// Fuel-bounded stand-in for the accelerated halting construction: the flag
/// square starts at 0 and is set to 1 when the simulated machine halts. A
/// genuine supertask would need unbounded fuel; this one stops at `fuel`.
struct HaltingFlagResult {
  int flag = 0;
  tm::Outcome outcome = tm::Outcome::out_of_fuel;
  std::uint64_t steps = 0;
  Dyadic elapsed;  // zeno_time(steps)
};

inline HaltingFlagResult atm_halting_flag(const tm::TuringMachine& m, std::string_view input,
                                          std::uint64_t fuel, const ZenoSchedule& s = {}) {
  tm::RunOptions opts;
  opts.fuel = fuel;
  const auto run = tm::run(m, input, opts);
  HaltingFlagResult r;
  r.outcome = run.kind;
  r.flag = run.kind == tm::Outcome::halted ? 1 : 0;
  r.steps = run.final.steps;
  r.elapsed = zeno_time(r.steps, s);
  return r;
}

// ---------------------------------------------------------------------------

inline constexpr std::int64_t kSpeedOfLight = 299'792'458;  // m/s

/// Step n (from 1) covers one cell in 2^{-k(n-1)} of the first step's time,
/// so the head speed is v₁·2^{k(n-1)}. Returns the least n whose speed
/// exceeds c.
inline std::uint64_t first_superluminal_step(double head_speed_step1, double cell_pitch,
                                             unsigned ratio_log2 = 1) {
  if (!(head_speed_step1 > 0.0) || !(cell_pitch > 0.0))
    fail(ErrorKind::domain, "head speed and cell pitch must be positive");
  if (ratio_log2 == 0) fail(ErrorKind::domain, "ratio must lie in (0,1)");
  const Dyadic v1 = Dyadic::from_double(head_speed_step1);
  const Dyadic c = kSpeedOfLight;
  auto exceeds = [&](std::uint64_t j) {
    return v1 * Dyadic::power_of_two(static_cast<std::int64_t>(ratio_log2 * j)) > c;
  };
  const double estimate = std::floor((c.log2_abs() - v1.log2_abs()) / ratio_log2);
  std::uint64_t j = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
  while (j > 0 && exceeds(j - 1)) --j;
  while (!exceeds(j)) ++j;
  return j + 1;
}

/// Threshold quoted in the literature for 1 m/s heads; its counting origin
/// differs from ours by one step.
inline constexpr std::uint64_t kQuotedSuperluminalStep = 29;

}  // namespace hyperlab::zeno
