#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binary fraction m·2^e. Kept normalized (m odd, or m = 0 with e = 0),
/// so equality is structural. Every finite double is exactly representable.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt mantissa, std::int64_t exponent) : m_(std::move(mantissa)), e_(exponent) { normalize(); }
  Dyadic(std::int64_t v) : m_(v), e_(0) { normalize(); }  // NOLINT: implicit from integers

  static Dyadic from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::domain, "non-finite value has no exact binary fraction");
    if (x == 0.0) return {};
    int exp = 0;
    const double frac = std::frexp(x, &exp);  // x = frac·2^exp, |frac| ∈ [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    return Dyadic(BigInt(mant), static_cast<std::int64_t>(exp) - 53);
  }

  /// 2^k
  static Dyadic power_of_two(std::int64_t k) { return Dyadic(BigInt(1), k); }

  const BigInt& mantissa() const noexcept { return m_; }
  std::int64_t exponent() const noexcept { return e_; }
  bool is_zero() const noexcept { return m_.is_zero(); }
  int sign() const noexcept { return m_.sign(); }

  /// Nearest-ish double (truncates to 64 leading bits first).
  double to_double() const {
    if (m_.is_zero()) return 0.0;
    const BigInt mag = abs(m_);
    const auto bits = static_cast<std::int64_t>(msb(mag)) + 1;
    const std::int64_t drop = bits > 64 ? bits - 64 : 0;
    const auto top = static_cast<std::uint64_t>(mag >> static_cast<unsigned>(drop));
    const double v = std::ldexp(static_cast<double>(top), static_cast<int>(std::clamp<std::int64_t>(
                                                              e_ + drop, -100000, 100000)));
    return m_.sign() < 0 ? -v : v;
  }

  /// log₂|x| to double precision, valid far outside double's exponent range.
  double log2_abs() const {
    if (m_.is_zero()) return -INFINITY;
    const BigInt mag = abs(m_);
    const auto bits = static_cast<std::int64_t>(msb(mag)) + 1;
    const std::int64_t drop = bits > 64 ? bits - 64 : 0;
    const auto top = static_cast<std::uint64_t>(mag >> static_cast<unsigned>(drop));
    return std::log2(static_cast<double>(top)) + static_cast<double>(e_ + drop);
  }

  std::string to_string() const {
    return m_.str() + (e_ == 0 ? "" : "*2^" + std::to_string(e_));
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::int64_t e = std::min(a.e_, b.e_);
    return Dyadic(a.aligned(e) + b.aligned(e), e);
  }
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.m_, a.e_); }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.m_ * b.m_, a.e_ + b.e_); }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const std::int64_t e = std::min(a.e_, b.e_);
    const BigInt x = a.aligned(e), y = b.aligned(e);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  BigInt aligned(std::int64_t e) const { return m_ << static_cast<unsigned>(e_ - e); }

  void normalize() {
    if (m_.is_zero()) {
      e_ = 0;
      return;
    }
    const auto tz = lsb(abs(m_));
    if (tz > 0) {
      m_ >>= tz;
      e_ += static_cast<std::int64_t>(tz);
    }
  }

  BigInt m_{0};
  std::int64_t e_ = 0;
};

}  // namespace hyperlab
