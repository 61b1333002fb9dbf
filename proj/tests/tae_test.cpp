#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "hyperlab/trial_and_error.hpp"
#include "oracles.hpp"

using namespace hyperlab;
using namespace hyperlab::tae;

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

/// E[rounds] for case 3 by first-step analysis on the number of wheels still
/// spinning: E[k](1 − q^k) = 1 + Σ_{j=1}^{k−1} C(k,j) q^j p^{k−j} E[j].
double case3_markov(std::uint64_t n, double p) {
  const double q = 1.0 - p;
  std::vector<double> e(n + 1, 0.0);
  for (std::uint64_t k = 1; k <= n; ++k) {
    double acc = 1.0, binom = 1.0;
    for (std::uint64_t j = 1; j < k; ++j) {
      binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      acc += binom * std::pow(q, static_cast<double>(j)) * std::pow(p, static_cast<double>(k - j)) * e[j];
    }
    e[k] = acc / (1.0 - std::pow(q, static_cast<double>(k)));
  }
  return e[n];
}

}  // namespace

TEST(AnswerStream, CountsMindChanges) {
  AnswerStream s;
  s.emit(0, false);
  s.emit(1, false);
  s.emit(3, true);
  s.emit(4, false);
  EXPECT_EQ(s.mind_changes(), 2u);
  EXPECT_FALSE(s.final_verdict());
  EXPECT_EQ(kind_of([&] { s.emit(4, true); }), ErrorKind::validation);
  EXPECT_EQ(kind_of([] { AnswerStream{}.final_verdict(); }), ErrorKind::domain);
}

TEST(LimitPredicate, ParityKernelNeverSettles) {
  LimitPredicate pred{[](std::span<const std::uint64_t>, std::uint64_t y, FuelMeter&) { return int(y % 2); }, 0};
  const auto ev = evaluate_limit_predicate(pred, {}, 9);
  EXPECT_EQ(ev.mind_changes, 9u);
  EXPECT_TRUE(ev.verdict);
  EXPECT_TRUE(ev.unsettled);
  EXPECT_FALSE(within_k_trials(ev, 8));
}

TEST(LimitPredicate, ThresholdKernelIsOneTrial) {
  // f(x, y) = [y ≥ x]: one mind change at y = x.
  LimitPredicate pred{[](std::span<const std::uint64_t> a, std::uint64_t y, FuelMeter&) { return int(y >= a[0]); }};
  const std::uint64_t x[] = {5};
  const auto ev = evaluate_limit_predicate(pred, x, 20);
  EXPECT_TRUE(ev.verdict);
  EXPECT_EQ(ev.mind_changes, 1u);
  EXPECT_EQ(ev.stable_since, 5u);
  EXPECT_FALSE(ev.unsettled);
  EXPECT_TRUE(within_k_trials(ev, 1));
  EXPECT_FALSE(within_k_trials(ev, 0));
}

TEST(LimitPredicate, ErrorPaths) {
  LimitPredicate bad{[](std::span<const std::uint64_t>, std::uint64_t, FuelMeter&) { return 2; }, 0};
  EXPECT_EQ(kind_of([&] { evaluate_limit_predicate(bad, {}, 3); }), ErrorKind::domain);
  LimitPredicate greedy{[](std::span<const std::uint64_t>, std::uint64_t, FuelMeter& f) {
                          f.consume(11);
                          return 0;
                        },
                        0, 10};
  EXPECT_EQ(kind_of([&] { evaluate_limit_predicate(greedy, {}, 3); }), ErrorKind::kernel_divergence);
  const std::uint64_t two[] = {1, 2};
  EXPECT_EQ(kind_of([&] { evaluate_limit_predicate(greedy, two, 3); }), ErrorKind::shape);
  EXPECT_EQ(kind_of([&] { evaluate_limit_predicate(greedy, {}, 0); }), ErrorKind::domain);
}

TEST(LimitPredicate, MachineKernel) {
  // Accepts iff y ≥ 1: scans the blank separator then looks at the first mark of y.
  const auto m = tm::load_machine(nlohmann::json::parse(R"({
    "blank": "_", "alphabet": ["_", "1"], "states": ["skip", "look", "h"], "initial": "skip", "finals": ["h"],
    "transitions": [
      {"from": "skip", "read": "1", "to": "skip", "write": "1", "move": "r"},
      {"from": "skip", "read": "_", "to": "look", "write": "_", "move": "r"},
      {"from": "look", "read": "1", "to": "h", "write": "1", "move": "n"},
      {"from": "look", "read": "_", "to": "h", "write": "_", "move": "n"}]})"));
  LimitPredicate pred{machine_kernel(m), 1, 1000};
  const std::uint64_t x[] = {3};
  const auto ev = evaluate_limit_predicate(pred, x, 6);
  EXPECT_TRUE(ev.verdict);
  EXPECT_EQ(ev.mind_changes, 1u);
  EXPECT_EQ(ev.stream.answers().front(), (Answer{0, false}));

  LimitPredicate starved{machine_kernel(m), 1, 2};
  EXPECT_EQ(kind_of([&] { evaluate_limit_predicate(starved, x, 1); }), ErrorKind::kernel_divergence);
}

TEST(Goldbach, PrimalityAgreesWithSieve) {
  const auto sieve = oracle::sieve(20000);
  for (std::uint64_t n = 0; n <= 20000; ++n) ASSERT_EQ(is_prime(n), sieve[n]) << n;
}

TEST(Goldbach, WitnessesAreValid) {
  const auto sieve = oracle::sieve(10000);
  for (std::uint64_t n = 4; n <= 10000; n += 2) {
    const auto w = goldbach_witness(n);
    ASSERT_TRUE(w.has_value()) << n;
    EXPECT_TRUE(sieve[*w] && sieve[n - *w]) << n;
    // Smallest witness: no smaller prime p has n − p prime.
    for (std::uint64_t p = 2; p < *w; ++p) EXPECT_FALSE(sieve[p] && sieve[n - p]) << n;
  }
  EXPECT_FALSE(goldbach_witness(11).has_value());
}

TEST(Goldbach, StreamSettlesOnYesUpToTenThousand) {
  const auto run = goldbach_stream(10000);
  EXPECT_EQ(run.stream.mind_changes(), 0u);
  EXPECT_TRUE(run.stream.final_verdict());
  EXPECT_EQ(run.examined_up_to, 10000u);
  EXPECT_FALSE(run.counterexample.has_value());
}

TEST(Goldbach, InjectedCounterexampleFlipsOnce) {
  const auto run = goldbach_stream(100, [](std::uint64_t n) { return n != 38; });
  EXPECT_EQ(run.stream.mind_changes(), 1u);
  EXPECT_FALSE(run.stream.final_verdict());
  EXPECT_EQ(run.counterexample, 38u);
  EXPECT_EQ(run.examined_up_to, 38u);
}

TEST(Goldbach, RejectsBadHorizon) {
  EXPECT_EQ(kind_of([] { goldbach_stream(7); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { goldbach_stream(2); }), ErrorKind::domain);
  EXPECT_EQ(goldbach_stream(4).stream.answers().size(), 1u);
}

TEST(Bogosort, Unranking) {
  for (std::size_t n = 0; n <= 5; ++n) {
    std::set<std::vector<std::size_t>> seen;
    for (std::uint64_t r = 0; r < tae::detail::factorial(n); ++r) {
      const auto p = tae::detail::unrank_permutation(r, n);
      EXPECT_TRUE(std::is_permutation(p.begin(), p.end(), tae::detail::unrank_permutation(0, n).begin()));
      seen.insert(p);
    }
    EXPECT_EQ(seen.size(), tae::detail::factorial(n));
  }
}

TEST(Bogosort, EdgeCases) {
  EXPECT_EQ(bogosort({}, false, 0).tries, 1u);
  EXPECT_EQ(bogosort({7}, true, 0).tries, 1u);
  EXPECT_EQ(bogosort({1, 2, 3}, true, 0).tries, 1u);
  EXPECT_EQ(kind_of([] { bogosort(std::vector<std::int64_t>(11, 0), false, 0); }), ErrorKind::domain);
  const auto capped = bogosort({9, 8, 7, 6, 5, 4, 3, 2, 1, 0}, false, 3, 5);
  EXPECT_TRUE(capped.gave_up);
  EXPECT_EQ(capped.tries, 5u);
}

TEST(BogosortProperty, SortsAndRespectsBounds) {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.below(7);
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = static_cast<std::int64_t>(rng.below(5));  // duplicates allowed
    auto expected = v;
    std::sort(expected.begin(), expected.end());
    for (bool memo : {false, true}) {
      const auto r = bogosort(v, memo, rng.next());
      ASSERT_FALSE(r.gave_up);
      EXPECT_EQ(r.sequence, expected);
      if (memo) { EXPECT_LE(r.tries, tae::detail::factorial(n)); }
    }
  }
}

TEST(Bogosort, MemoizedMeanTriesForDistinctKeys) {
  // Distinct keys: the sorted arrangement is uniformly placed among the n!−1
  // non-input ranks, so E[tries] = 1 + n!/2.
  const std::vector<std::int64_t> v{4, 3, 2, 1};
  double total = 0.0;
  const int reps = 4000;
  for (int s = 0; s < reps; ++s) total += static_cast<double>(bogosort(v, true, static_cast<std::uint64_t>(s)).tries);
  EXPECT_NEAR(total / reps, 1.0 + 24.0 / 2.0, 0.5);
}

TEST(Bogosort, SeedDeterminism) {
  const std::vector<std::int64_t> v{5, 1, 4, 2, 3};
  EXPECT_EQ(bogosort(v, false, 17).tries, bogosort(v, false, 17).tries);
  EXPECT_EQ(bogosort(v, true, 17).tries, bogosort(v, true, 17).tries);
}

TEST(Ashby, ClosedForms) {
  EXPECT_DOUBLE_EQ(ashby_expected({1000, 0.5, Strategy::case1}).log2_expected, 1000.0);
  EXPECT_EQ(ashby_expected({1000, 0.5, Strategy::case1}).expected, std::ldexp(1.0, 1000));
  EXPECT_DOUBLE_EQ(ashby_expected({10, 0.5, Strategy::case1}).expected, 1024.0);
  EXPECT_DOUBLE_EQ(ashby_expected({1000, 0.5, Strategy::case2}).expected, 2000.0);
  EXPECT_NEAR(ashby_expected({1, 0.5, Strategy::case3}).expected, 2.0, 1e-8);
  EXPECT_NEAR(ashby_expected({1, 0.25, Strategy::case3}).expected, 4.0, 1e-7);
}

TEST(Ashby, Case3AgreesWithMarkovChain) {
  for (std::uint64_t n : {1u, 2u, 3u, 7u, 12u, 40u})
    for (double p : {0.05, 0.3, 0.5, 0.9})
      EXPECT_NEAR(ashby_expected({n, p, Strategy::case3}).expected, case3_markov(n, p),
                  1e-7 * case3_markov(n, p))
          << n << " " << p;
}

TEST(Ashby, Case3GrowsLogarithmically) {
  // For p = 1/2 the expectation is close to log2 N + 1.33.
  const double e = ashby_expected({1000, 0.5, Strategy::case3}).expected;
  EXPECT_GT(e, std::log2(1000.0));
  EXPECT_LT(e, std::log2(1000.0) + 2.0);
}

TEST(Ashby, DomainErrors) {
  EXPECT_EQ(kind_of([] { ashby_expected({0, 0.5, Strategy::case1}); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ashby_expected({3, 0.0, Strategy::case1}); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ashby_expected({3, 1.0, Strategy::case2}); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ashby_simulate({3, 0.5, Strategy::case2}, 0); }), ErrorKind::domain);
}

TEST(AshbyProperty, StrategyOrdering) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t n = 1 + rng.below(30);
    const double p = 0.01 + 0.98 * rng.uniform();
    const double c1 = ashby_expected({n, p, Strategy::case1}).expected;
    const double c2 = ashby_expected({n, p, Strategy::case2}).expected;
    const double c3 = ashby_expected({n, p, Strategy::case3}).expected;
    EXPECT_GE(c2 * (1 + 1e-9), c3) << n << " " << p;
    EXPECT_GE(c1 * (1 + 1e-9), c3) << n << " " << p;
    if (p <= 0.5) { EXPECT_GE(c1 * (1 + 1e-9), c2) << n << " " << p; }
  }
}

TEST(Ashby, SequentialCanBeatAllAtOnceForLikelyWheels) {
  // N = 2, p = 0.99: p^{-2} ≈ 1.0203 < 2/p ≈ 2.0202.
  EXPECT_LT(ashby_expected({2, 0.99, Strategy::case1}).expected, ashby_expected({2, 0.99, Strategy::case2}).expected);
}

TEST(AshbySimulation, MatchesAnalyticWithinThreeStandardErrors) {
  for (auto s : {Strategy::case1, Strategy::case2, Strategy::case3})
    for (std::uint64_t n : {1u, 5u, 10u}) {
      const WheelExperiment e{n, 0.5, s, 1234};
      const auto sim = ashby_simulate(e, 20000);
      EXPECT_NEAR(sim.mean, ashby_expected(e).expected, 3.0 * sim.standard_error)
          << static_cast<int>(s) << " N=" << n;
    }
}

TEST(AshbySimulation, IndependentOfThreadCount) {
  const WheelExperiment e{6, 0.4, Strategy::case3, 55};
  const auto one = ashby_simulate(e, 5000, 1);
  const auto four = ashby_simulate(e, 5000, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.standard_error, four.standard_error);
  EXPECT_EQ(one.trials, 5000u);
}
