#pragma once

#include <cmath>
#include <numbers>

#include "hyperlab/error.hpp"

namespace hyperlab::limits {

struct PhysicalConstants {
  double c = 299'792'458.0;       // m/s
  double h = 6.62607015e-34;      // J·s
  double a = 5.29177210903e-11;   // m, hydrogen (Bohr) radius
};

inline constexpr PhysicalConstants kSI{};

/// Literature value of (a/c)⁻¹ used when bounding f·z^{1/3}.
inline constexpr double kQuotedInverseLightCrossing = 5.655e18;

/// f² ≤ 2πW/h
inline double max_frequency_from_power(double watts, const PhysicalConstants& k = kSI) {
  if (!(watts > 0.0)) fail(ErrorKind::domain, "power must be positive");
  return std::sqrt(2.0 * std::numbers::pi * watts / k.h);
}

/// ΔE ≥ h/(2πΔt); the energy spent on one step must exceed this.
inline double min_step_energy(double step_seconds, const PhysicalConstants& k = kSI) {
  if (!(step_seconds > 0.0)) fail(ErrorKind::domain, "step duration must be positive");
  return k.h / (2.0 * std::numbers::pi * step_seconds);
}

inline void require_symbols(double z) {
  if (!(z >= 1.0)) fail(ErrorKind::domain, "symbol count must be at least 1");
}

/// V ≥ (4/3)πa³z
inline double min_symbol_volume(double z, const PhysicalConstants& k = kSI) {
  require_symbols(z);
  return 4.0 / 3.0 * std::numbers::pi * k.a * k.a * k.a * z;
}

/// d = 2r ≥ 2a·z^{1/3}
inline double min_symbol_distance(double z, const PhysicalConstants& k = kSI) {
  require_symbols(z);
  return 2.0 * k.a * std::cbrt(z);
}

/// f ≤ c/(2a·z^{1/3}) steps per second.
inline double max_frequency_from_alphabet(double z, const PhysicalConstants& k = kSI) {
  return k.c / min_symbol_distance(z, k);
}

/// (1/2)(a/c)⁻¹, the ceiling on f·z^{1/3}.
inline double frequency_symbol_ceiling(const PhysicalConstants& k = kSI) { return 0.5 * k.c / k.a; }

/// Checks f·z^{1/3} ≤ (1/2)(a/c)⁻¹ with a relative slack for rounding.
inline bool bound_product_holds(double f, double z, const PhysicalConstants& k = kSI,
                                double relative_slack = 1e-12) {
  require_symbols(z);
  return f * std::cbrt(z) <= frequency_symbol_ceiling(k) * (1.0 + relative_slack);
}

}  // namespace hyperlab::limits
