#include <gtest/gtest.h>

#include <map>
#include <set>

#include "hyperlab/real_enum.hpp"

using namespace hyperlab;
using namespace hyperlab::reals;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::io;
}

/// Diagonal walk: diagonal d lists (d,0), (d−1,1), …, (0,d).
std::vector<std::pair<std::uint64_t, std::uint64_t>> walk(std::uint64_t count) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t d = 0; out.size() < count; ++d)
    for (std::uint64_t y = 0; y <= d && out.size() < count; ++y) out.emplace_back(d - y, y);
  return out;
}

bool canonical_pair(std::uint64_t x, std::uint64_t y) { return x == 0 ? y == 0 : x % 10 != 0; }

}  // namespace

TEST(Value, Examples) {
  EXPECT_EQ(real_value(0, 5), Rational(0));
  EXPECT_EQ(real_value(15, 1), Rational(3, 2));
  EXPECT_EQ(real_value(123, 0), Rational(123));
  EXPECT_EQ(real_value(150, 2), real_value(15, 1));
  EXPECT_EQ(kind_of([] { real_value(1, 2'000'000); }), ErrorKind::resource);
  EXPECT_EQ(kind_of([] { real_value(-1, 0); }), ErrorKind::domain);
}

TEST(Canonical, Form) {
  EXPECT_TRUE((FinitePrecisionReal{0, 0}.canonical()));
  EXPECT_TRUE((FinitePrecisionReal{15, 3}.canonical()));
  EXPECT_FALSE((FinitePrecisionReal{150, 3}.canonical()));
  EXPECT_FALSE((FinitePrecisionReal{0, 2}.canonical()));
}

TEST(DiagStart, Values) {
  EXPECT_EQ(diag_start(0), 0);
  EXPECT_EQ(diag_start(3), 6);
  EXPECT_EQ(diag_start(1'000'000), Natural("500000500000"));
  Natural running = 0;
  for (std::uint64_t x = 0; x < 2000; ++x) {
    EXPECT_EQ(diag_start(x), running);
    EXPECT_EQ(diag_start(x + 1) - diag_start(x), x + 1);
    running += x + 1;
  }
}

TEST(Isqrt, ExactFloor) {
  for (std::uint64_t v = 0; v < 20000; ++v) {
    const auto r = isqrt(v);
    ASSERT_TRUE(r * r <= v && (r + 1) * (r + 1) > v) << v;
  }
  const Natural big = (Natural(1) << 400) + 12345;
  const auto r = isqrt(big * big + big);
  EXPECT_EQ(r, big);
  EXPECT_EQ(isqrt(big * big - 1), big - 1);
}

TEST(PairIndex, Examples) {
  EXPECT_EQ(pair_index(0, 0), 0);
  EXPECT_EQ(pair_index(0, 17), 0);
  EXPECT_EQ(pair_index(1, 1), 4);
  EXPECT_EQ(pair_index(10, 1), 1);
  EXPECT_EQ(pair_index(1500, 3), pair_index(15, 1));
  EXPECT_EQ(kind_of([] { pair_index(10, 0); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { pair_index(1000, 2); }), ErrorKind::domain);
}

TEST(PairDecode, Examples) {
  EXPECT_EQ(pair_decode(0), std::make_pair(Natural(0), Natural(0)));
  EXPECT_EQ(pair_decode(1), std::make_pair(Natural(1), Natural(0)));
  EXPECT_EQ(pair_decode(2), std::make_pair(Natural(0), Natural(1)));
  EXPECT_EQ(pair_decode(4), std::make_pair(Natural(1), Natural(1)));
}

TEST(PairDecode, MatchesDiagonalWalk) {
  const auto pairs = walk(100'000);
  for (std::uint64_t i = 0; i < pairs.size(); ++i) {
    const auto [x, y] = pair_decode(i);
    ASSERT_EQ(x, pairs[i].first) << i;
    ASSERT_EQ(y, pairs[i].second) << i;
  }
}

TEST(PairDecode, DiagonalEndpoints) {
  for (std::uint64_t s = 0; s <= 1000; ++s) {
    EXPECT_EQ(pair_decode(diag_start(s)), std::make_pair(Natural(s), Natural(0)));
    EXPECT_EQ(pair_decode(diag_start(s) + s), std::make_pair(Natural(0), Natural(s)));
  }
}

TEST(PairDecode, HugeIndices) {
  const Natural s = (Natural(1) << 300) + 7;
  EXPECT_EQ(pair_decode(diag_start(s) + 5), std::make_pair(Natural(s - 5), Natural(5)));
}

TEST(RoundTrip, CanonicalIndicesBelowOneHundredThousand) {
  std::uint64_t checked = 0;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    const auto [x, y] = pair_decode(i);
    if (!FinitePrecisionReal{x, y}.canonical()) continue;
    ASSERT_EQ(pair_index(x, y), i);
    ++checked;
  }
  EXPECT_GT(checked, 80'000u);
}

TEST(Enumerate, FirstTen) {
  const auto e = enumerate(10);
  ASSERT_EQ(e.size(), 10u);
  EXPECT_EQ(e[0].value, 0);
  const auto pairs = walk(10);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(e[i].pair.a, pairs[i].first);
    EXPECT_EQ(e[i].pair.b, pairs[i].second);
    EXPECT_EQ(e[i].value, real_value(pairs[i].first, pairs[i].second));
  }
  EXPECT_EQ(e[2].status, PairStatus::duplicate);
  EXPECT_EQ(e[2].canonical_index, Natural(0));
}

TEST(Enumerate, StatusesAndDuplicates) {
  const auto e = enumerate(static_cast<std::uint64_t>(diag_start(21)));
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> seen;
  for (const auto& r : e) {
    const auto x = r.pair.a.convert_to<std::uint64_t>(), y = r.pair.b.convert_to<std::uint64_t>();
    ++seen[{x, y}];
    if (canonical_pair(x, y)) {
      EXPECT_EQ(r.status, PairStatus::canonical);
    } else if (r.status == PairStatus::duplicate) {
      // A duplicate points at an earlier canonical pair of the same value.
      ASSERT_TRUE(r.canonical_index.has_value());
      ASSERT_LT(*r.canonical_index, r.index);
      EXPECT_EQ(e[r.canonical_index->convert_to<std::size_t>()].value, r.value);
      EXPECT_EQ(e[r.canonical_index->convert_to<std::size_t>()].status, PairStatus::canonical);
    } else {
      // More trailing zeros than shift, e.g. (10, 0).
      EXPECT_EQ(r.status, PairStatus::unindexable);
      EXPECT_GT(x, 0u);
      EXPECT_EQ(x % 10, 0u);
    }
  }
  for (std::uint64_t x = 0; x <= 20; ++x)
    for (std::uint64_t y = 0; x + y <= 20; ++y)
      if (canonical_pair(x, y)) { EXPECT_EQ((seen[{x, y}]), 1) << x << "," << y; }
  EXPECT_EQ(e[diag_start(10).convert_to<std::size_t>()].status, PairStatus::unindexable);
}

TEST(Enumerate, DistinctCanonicalValues) {
  std::set<Rational> values;
  for (const auto& r : enumerate(20'000))
    if (r.status == PairStatus::canonical) { EXPECT_TRUE(values.insert(r.value).second) << r.index; }
}
