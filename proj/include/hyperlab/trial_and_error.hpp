#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/turing.hpp"

namespace hyperlab::tae {

// ---------------------------------------------------------------------------
// Answer streams and limit predicates

struct Answer {
  std::uint64_t step;
  bool yes;

  friend bool operator==(const Answer&, const Answer&) = default;
};

class AnswerStream {
 public:
  void emit(std::uint64_t step, bool yes) {
    if (!answers_.empty() && step <= answers_.back().step)
      fail(ErrorKind::validation, "answer step indices must be strictly increasing");
    if (!answers_.empty() && answers_.back().yes != yes) ++mind_changes_;
    answers_.push_back({step, yes});
  }

  const std::vector<Answer>& answers() const noexcept { return answers_; }
  std::uint64_t mind_changes() const noexcept { return mind_changes_; }
  bool empty() const noexcept { return answers_.empty(); }

  /// The most recent answer is the one we posit.
  bool final_verdict() const {
    if (answers_.empty()) fail(ErrorKind::domain, "empty answer stream has no verdict");
    return answers_.back().yes;
  }

  std::uint64_t horizon = 0;

 private:
  std::vector<Answer> answers_;
  std::uint64_t mind_changes_ = 0;
};

/// Per-call step allowance for a kernel; running out means the kernel is
/// not total at that argument, as far as we can tell.
class FuelMeter {
 public:
  explicit FuelMeter(std::uint64_t fuel) : remaining_(fuel) {}

  void consume(std::uint64_t n = 1) {
    if (n > remaining_) fail(ErrorKind::kernel_divergence, "kernel exceeded its per-call fuel");
    remaining_ -= n;
  }

  std::uint64_t remaining() const noexcept { return remaining_; }

 private:
  std::uint64_t remaining_;
};

/// Kernel f(x₁..xₙ, y) ∈ {0, 1}. The predicate is the limit over y.
using Kernel = std::function<int(std::span<const std::uint64_t> args, std::uint64_t y, FuelMeter&)>;

struct LimitPredicate {
  Kernel kernel;
  std::size_t arity = 1;
  std::uint64_t fuel_per_call = 1'000'000;
};

struct LimitEvaluation {
  bool verdict = false;
  std::uint64_t mind_changes = 0;
  std::uint64_t stable_since = 0;
  /// Raised when the last value only appeared at the horizon itself: nothing
  /// observed so far suggests the stream has settled.
  bool unsettled = false;
  AnswerStream stream;
};

inline LimitEvaluation evaluate_limit_predicate(const LimitPredicate& pred,
                                                std::span<const std::uint64_t> args,
                                                std::uint64_t horizon) {
  if (horizon < 1) fail(ErrorKind::domain, "horizon must be at least 1");
  if (args.size() != pred.arity)
    fail(ErrorKind::shape, "predicate of arity " + std::to_string(pred.arity) + " given " +
                               std::to_string(args.size()) + " arguments");
  LimitEvaluation ev;
  ev.stream.horizon = horizon;
  std::optional<int> previous;
  for (std::uint64_t y = 0; y <= horizon; ++y) {
    FuelMeter fuel(pred.fuel_per_call);
    const int v = pred.kernel(args, y, fuel);
    if (v != 0 && v != 1) fail(ErrorKind::domain, "kernel values must be 0 or 1");
    if (previous && *previous != v) ev.stable_since = y;
    ev.stream.emit(y, v == 1);
    previous = v;
  }
  ev.verdict = ev.stream.final_verdict();
  ev.mind_changes = ev.stream.mind_changes();
  ev.unsettled = ev.stable_since == horizon;
  return ev;
}

/// A k-trial predicate changes its mind at most k times.
inline bool within_k_trials(const LimitEvaluation& ev, std::uint64_t k) noexcept {
  return ev.mind_changes <= k;
}

/// Kernel backed by a Turing machine. The arguments and y are written in
/// unary blocks separated by single blanks; the kernel value is 1 when the
/// machine halts scanning `accept`. Fuel exhaustion is divergence.
inline Kernel machine_kernel(tm::TuringMachine m, char mark = '1', char accept = '1') {
  return [m = std::move(m), mark, accept](std::span<const std::uint64_t> args, std::uint64_t y,
                                          FuelMeter& fuel) {
    std::string input;
    auto block = [&](std::uint64_t v) { input.append(v, mark); };
    for (auto a : args) {
      block(a);
      input.push_back(m.blank());
    }
    block(y);
    tm::RunOptions opts;
    opts.fuel = fuel.remaining();
    const auto out = tm::run(m, input, opts);
    fuel.consume(out.final.steps);
    if (out.kind == tm::Outcome::out_of_fuel)
      fail(ErrorKind::kernel_divergence, "kernel machine did not halt within its fuel");
    if (out.kind == tm::Outcome::stuck) return 0;
    return out.final.tapes[0].read(out.final.heads[0], m.blank()) == accept ? 1 : 0;
  };
}

// ---------------------------------------------------------------------------
// Goldbach stream

inline bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Smallest prime p with n − p also prime, if any.
inline std::optional<std::uint64_t> goldbach_witness(std::uint64_t n) {
  for (std::uint64_t p = 2; p <= n / 2; ++p)
    if (is_prime(p) && is_prime(n - p)) return p;
  return std::nullopt;
}

struct GoldbachRun {
  AnswerStream stream;
  std::uint64_t examined_up_to = 4;
  std::optional<std::uint64_t> counterexample;
};

/// Says "yes" at 4, then examines each following even number and switches to
/// "no" (and stops) at the first one that is not a sum of two primes.
/// `decomposes` defaults to the prime-pair search.
inline GoldbachRun goldbach_stream(std::uint64_t horizon_even,
                                   const std::function<bool(std::uint64_t)>& decomposes = {}) {
  if (horizon_even < 4 || horizon_even % 2 != 0)
    fail(ErrorKind::domain, "Goldbach horizon must be an even number ≥ 4");
  auto test = decomposes ? decomposes
                         : std::function<bool(std::uint64_t)>(
                               [](std::uint64_t n) { return goldbach_witness(n).has_value(); });
  GoldbachRun run;
  run.stream.horizon = horizon_even;
  run.stream.emit(4, true);
  for (std::uint64_t n = 6; n <= horizon_even; n += 2) {
    run.examined_up_to = n;
    if (!test(n)) {
      run.stream.emit(n, false);
      run.counterexample = n;
      break;
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Bogosort

struct BogosortResult {
  std::vector<std::int64_t> sequence;
  std::uint64_t tries = 0;  // sortedness checks performed
  bool gave_up = false;
};

inline constexpr std::size_t kBogosortMaxLength = 10;

namespace detail {
inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Permutation of positions with Lehmer rank `rank`; rank 0 is the identity.
inline std::vector<std::size_t> unrank_permutation(std::uint64_t rank, std::size_t n) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> perm;
  perm.reserve(n);
  for (std::size_t i = n; i > 0; --i) {
    const std::uint64_t f = factorial(i - 1);
    const auto digit = static_cast<std::size_t>(rank / f);
    rank %= f;
    perm.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return perm;
}
}  // namespace detail

/// `memoized` never revisits an arrangement, so at most len! checks happen.
/// The plain variant reshuffles blindly and gives up after `max_tries` checks.
inline BogosortResult bogosort(std::vector<std::int64_t> seq, bool memoized, std::uint64_t seed,
                               std::uint64_t max_tries = 10'000'000) {
  if (seq.size() > kBogosortMaxLength)
    fail(ErrorKind::domain, "bogosort input longer than " + std::to_string(kBogosortMaxLength));
  Rng rng(seed);
  BogosortResult r;
  auto sorted = [](const std::vector<std::int64_t>& v) { return std::is_sorted(v.begin(), v.end()); };

  if (!memoized) {
    r.sequence = std::move(seq);
    r.tries = 1;
    while (!sorted(r.sequence)) {
      if (r.tries >= max_tries) {
        r.gave_up = true;
        return r;
      }
      for (std::size_t i = r.sequence.size(); i > 1; --i)
        std::swap(r.sequence[i - 1], r.sequence[rng.below(i)]);
      ++r.tries;
    }
    return r;
  }

  // Draw arrangement ranks without replacement: a lazy Fisher–Yates over
  // ranks 1..n!−1 (rank 0, the input order, is checked first).
  const std::size_t n = seq.size();
  const std::uint64_t total = detail::factorial(n);
  r.tries = 1;
  if (sorted(seq)) {
    r.sequence = std::move(seq);
    return r;
  }
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto slot = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i + 1 : it->second;
  };
  const std::uint64_t remaining = total - 1;
  for (std::uint64_t i = 0; i < remaining; ++i) {
    const std::uint64_t j = i + rng.below(remaining - i);
    const std::uint64_t rank = slot(j);
    swapped[j] = slot(i);
    const auto perm = detail::unrank_permutation(rank, n);
    std::vector<std::int64_t> candidate(n);
    for (std::size_t k = 0; k < n; ++k) candidate[k] = seq[perm[k]];
    ++r.tries;
    if (sorted(candidate)) {
      r.sequence = std::move(candidate);
      return r;
    }
  }
  fail(ErrorKind::numeric, "exhausted every arrangement without finding a sorted one");
}

// ---------------------------------------------------------------------------
// Wheels: N independent events of success probability p, one spin-round per
// second.
//   Case 1: spin all N until one round shows all successes.
//   Case 2: spin wheel 1 until success, then wheel 2, and so on.
//   Case 3: spin all, keep the successes, respin the rest.

enum class Strategy { case1 = 1, case2 = 2, case3 = 3 };

struct WheelExperiment {
  std::uint64_t wheels = 1;
  double p = 0.5;
  Strategy strategy = Strategy::case1;
  std::uint64_t seed = 0;
};

inline void validate(const WheelExperiment& e) {
  if (e.wheels < 1) fail(ErrorKind::domain, "need at least one wheel");
  if (!(e.p > 0.0 && e.p < 1.0)) fail(ErrorKind::domain, "success probability must lie in (0,1)");
}

struct AshbyExpectation {
  double expected = 0.0;       // seconds; +inf when beyond double range
  double log2_expected = 0.0;  // log₂ of the same
};

/// Case 1: p^{-N}. Case 2: N/p. Case 3: E[max of N geometrics]
///   = Σ_{t≥0} (1 − (1 − (1−p)^t)^N), summed until the tail term falls under
/// 1e-9 of the running total.
inline AshbyExpectation ashby_expected(const WheelExperiment& e) {
  validate(e);
  const double n = static_cast<double>(e.wheels);
  AshbyExpectation r;
  switch (e.strategy) {
    case Strategy::case1:
      r.log2_expected = -n * std::log2(e.p);
      r.expected = std::exp2(r.log2_expected);
      break;
    case Strategy::case2:
      r.expected = n / e.p;
      r.log2_expected = std::log2(r.expected);
      break;
    case Strategy::case3: {
      const double log_q = std::log1p(-e.p);
      double sum = 0.0;
      for (std::uint64_t t = 0;; ++t) {
        const double qt = std::exp(static_cast<double>(t) * log_q);
        const double term = -std::expm1(n * std::log1p(-qt));
        sum += term;
        if (term < 1e-9 * sum) break;
      }
      r.expected = sum;
      r.log2_expected = std::log2(sum);
      break;
    }
  }
  return r;
}

struct AshbySimulation {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
};

/// Trials are cut into a fixed number of partitions, each with its own
/// derived seed, so the result does not depend on `threads`.
inline constexpr std::uint64_t kAshbyPartitions = 64;

namespace detail {
inline std::uint64_t simulate_trial(const WheelExperiment& e, Rng& rng) {
  std::uint64_t time = 0;
  switch (e.strategy) {
    case Strategy::case1:
      for (;;) {
        ++time;
        bool all = true;
        for (std::uint64_t w = 0; w < e.wheels && all; ++w) all = rng.bernoulli(e.p);
        if (all) return time;
      }
    case Strategy::case2:
      for (std::uint64_t w = 0; w < e.wheels; ++w) {
        do ++time;
        while (!rng.bernoulli(e.p));
      }
      return time;
    case Strategy::case3: {
      std::uint64_t left = e.wheels;
      while (left > 0) {
        ++time;
        std::uint64_t still = 0;
        for (std::uint64_t w = 0; w < left; ++w) still += rng.bernoulli(e.p) ? 0 : 1;
        left = still;
      }
      return time;
    }
  }
  return time;
}
}  // namespace detail

inline AshbySimulation ashby_simulate(const WheelExperiment& e, std::uint64_t trials,
                                      unsigned threads = 1) {
  validate(e);
  if (trials < 1) fail(ErrorKind::domain, "need at least one trial");
  const std::uint64_t parts = std::min(trials, kAshbyPartitions);
  std::vector<double> sums(parts), squares(parts);

  auto work = [&](std::uint64_t part) {
    const std::uint64_t begin = trials * part / parts, end = trials * (part + 1) / parts;
    Rng rng(derive_seed(e.seed, part));
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t t = begin; t < end; ++t) {
      const auto x = static_cast<double>(detail::simulate_trial(e, rng));
      s += x;
      s2 += x * x;
    }
    sums[part] = s;
    squares[part] = s2;
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(parts)));
  if (threads == 1) {
    for (std::uint64_t p = 0; p < parts; ++p) work(p);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t p = w; p < parts; p += threads) work(p);
      });
  }

  double s = 0.0, s2 = 0.0;
  for (std::uint64_t p = 0; p < parts; ++p) {
    s += sums[p];
    s2 += squares[p];
  }
  const auto n = static_cast<double>(trials);
  AshbySimulation r;
  r.trials = trials;
  r.mean = s / n;
  const double var = trials > 1 ? std::max(0.0, (s2 - n * r.mean * r.mean) / (n - 1.0)) : 0.0;
  r.standard_error = std::sqrt(var / n);
  return r;
}

}  // namespace hyperlab::tae
