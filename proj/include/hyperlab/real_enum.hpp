#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab::reals {

using Natural = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// a × 10^{-b}
struct FinitePrecisionReal {
  Natural a;
  Natural b;

  /// (0, 0) or a payload without a trailing decimal zero.
  bool canonical() const { return a.is_zero() ? b.is_zero() : a % 10 != 0; }

  friend bool operator==(const FinitePrecisionReal&, const FinitePrecisionReal&) = default;
};

inline void require_natural(const Natural& v, const char* what) {
  if (v.sign() < 0) fail(ErrorKind::domain, std::string(what) + " must be a natural number");
}

inline Rational real_value(const Natural& a, const Natural& b) {
  require_natural(a, "payload");
  require_natural(b, "shift");
  if (b > 1'000'000) fail(ErrorKind::resource, "decimal shift too large to expand");
  const Natural scale = boost::multiprecision::pow(Natural(10), b.convert_to<unsigned>());
  return Rational(a, scale);
}

/// x(x+1)/2, the index of the first pair on diagonal x.
inline Natural diag_start(const Natural& x) {
  require_natural(x, "diagonal");
  return x * (x + 1) / 2;
}

/// ⌊√v⌋ by Newton iteration from above, checked so that r² ≤ v < (r+1)².
inline Natural isqrt(const Natural& v) {
  require_natural(v, "radicand");
  if (v < 2) return v;
  Natural r = Natural(1) << (msb(v) / 2 + 1);  // > √v
  for (;;) {
    Natural next = (r + v / r) >> 1;
    if (next >= r) break;
    r = std::move(next);
  }
  if (!(r * r <= v && (r + 1) * (r + 1) > v)) fail(ErrorKind::numeric, "integer square root check failed");
  return r;
}

/// g(x, y): 0 when x = 0; g(x/10, y−1) when x ends in a decimal zero;
/// otherwise f(x+y) + y.
inline Natural pair_index(Natural x, Natural y) {
  require_natural(x, "payload");
  require_natural(y, "shift");
  while (!x.is_zero() && x % 10 == 0) {
    if (y.is_zero())
      fail(ErrorKind::domain,
           "pair has more trailing decimal zeros than its shift allows; no index exists");
    x /= 10;
    y -= 1;
  }
  if (x.is_zero()) return 0;
  return diag_start(x + y) + y;
}

/// h(i): with s = ⌊√(1+8i)⌋ and w = ⌊(s−1)/2⌋,
///   x = w·⌊(5+s)/2⌋/2 − i,  y = i − w·⌊(1+s)/2⌋/2.
/// Because √(1+8i) ∈ [s, s+1), each floor of an expression in the real root
/// equals the same floor taken with s.
inline std::pair<Natural, Natural> pair_decode(const Natural& idx) {
  require_natural(idx, "index");
  const Natural s = isqrt(1 + 8 * idx);
  const Natural w = (s - 1) / 2;
  const Natural x = w * ((5 + s) / 2) / 2 - idx;
  const Natural y = idx - w * ((1 + s) / 2) / 2;
  return {x, y};
}

enum class PairStatus { canonical, duplicate, unindexable };

struct EnumeratedReal {
  Natural index;
  FinitePrecisionReal pair;
  Rational value;
  PairStatus status = PairStatus::canonical;
  std::optional<Natural> canonical_index;  // index of the canonical twin for duplicates
};

/// Decodes indices 0..n−1. Non-canonical pairs are reported, not dropped.
inline std::vector<EnumeratedReal> enumerate(std::uint64_t n) {
  std::vector<EnumeratedReal> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [x, y] = pair_decode(Natural(i));
    EnumeratedReal e;
    e.index = i;
    e.value = real_value(x, y);
    e.pair = {x, y};
    if (!e.pair.canonical()) {
      try {
        e.canonical_index = pair_index(x, y);
        e.status = PairStatus::duplicate;
      } catch (const Error&) {
        e.status = PairStatus::unindexable;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace hyperlab::reals
