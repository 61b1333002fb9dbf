#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperlab/diophantine.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/fock.hpp"
#include "hyperlab/linalg.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab::aqc {

using fock::Occupation;
using fock::TruncatedFockSpace;

/// Dense matrices above this dimension are refused.
inline constexpr std::uint64_t kMaxDenseDimension = 2048;

inline void require_dense(const TruncatedFockSpace& space) {
  if (space.dimension() > kMaxDenseDimension)
    fail(ErrorKind::resource, "Fock space dimension " + std::to_string(space.dimension()) +
                                  " exceeds the dense limit " + std::to_string(kMaxDenseDimension));
}

/// H_P = D(N₁..N_k)². Number operators are diagonal in the occupation basis,
/// so H_P is diagonal with D(n)² at basis tuple n.
inline ComplexMatrix build_problem_hamiltonian(const dioph::DiophantinePolynomial& d,
                                               const TruncatedFockSpace& space) {
  if (d.num_vars() != space.modes())
    fail(ErrorKind::shape, "polynomial has " + std::to_string(d.num_vars()) + " variables but the space has " +
                               std::to_string(space.modes()) + " modes");
  require_dense(space);
  const auto n = static_cast<std::size_t>(space.dimension());
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = d.energy(space.tuple(i));
    if (e > (std::int64_t{1} << 53)) fail(ErrorKind::numeric, "energy not exactly representable as a double");
    h(i, i) = static_cast<double>(e);
  }
  return h;
}

struct InitialHamiltonian {
  ComplexMatrix h;
  Ket ground;
};

/// H_I = I − |u⟩⟨u| with |u⟩ the uniform superposition: ground energy 0,
/// every other eigenvalue 1.
inline InitialHamiltonian build_initial_hamiltonian(const TruncatedFockSpace& space) {
  require_dense(space);
  const auto n = static_cast<std::size_t>(space.dimension());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  InitialHamiltonian out;
  out.ground = Ket::column(std::vector<Complex>(n, amp));
  out.h = ComplexMatrix::identity(n) - out.ground * bra_of(out.ground);
  return out;
}

struct AdiabaticProblem {
  TruncatedFockSpace space;
  ComplexMatrix h_i;
  ComplexMatrix h_p;
  double total_time = 1.0;
  double dt = 0.01;
  double spectral_bound = 0.0;  // ≥ max_s ‖H(s)‖₂
};

namespace detail {
inline double spectral_norm(const ComplexMatrix& h) {
  if (h.rows() <= 256) {
    const auto es = hermitian_eigensystem(h);
    return std::max(std::abs(es.eigenvalues.front()), std::abs(es.eigenvalues.back()));
  }
  double best = 0.0;  // row-sum norm bounds the spectral norm of a Hermitian matrix
  for (std::size_t i = 0; i < h.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < h.cols(); ++j) s += std::abs(h(i, j));
    best = std::max(best, s);
  }
  return best;
}
}  // namespace detail

/// Step-size rule: dt·max‖H(s)‖ at this value when the caller passes dt = 0.
inline constexpr double kAutoStepScale = 0.02;
/// Larger dt·max‖H(s)‖ is rejected as unstable.
inline constexpr double kMaxStepScale = 0.5;

inline AdiabaticProblem make_problem(TruncatedFockSpace space, ComplexMatrix h_i, ComplexMatrix h_p,
                                     double total_time, double dt = 0.0) {
  const auto n = space.dimension();
  if (h_i.rows() != n || !h_i.is_square() || h_p.rows() != n || !h_p.is_square())
    fail(ErrorKind::shape, "Hamiltonians must match the Fock space dimension");
  if (!is_hermitian(h_i)) fail(ErrorKind::domain, "initial Hamiltonian is not Hermitian");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = h_p(i, j);
      if (i != j && v != Complex{}) fail(ErrorKind::domain, "problem Hamiltonian must be diagonal");
      if (i == j && (v.imag() != 0.0 || v.real() < 0.0))
        fail(ErrorKind::domain, "problem Hamiltonian entries must be real and non-negative");
    }
  if (!(total_time >= 0.0)) fail(ErrorKind::domain, "total time must be non-negative");
  if (dt < 0.0) fail(ErrorKind::domain, "time step must be positive");

  double hp_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) hp_norm = std::max(hp_norm, h_p(i, i).real());
  // ‖·‖ is convex, so over the segment its maximum sits at an endpoint.
  const double bound = std::max(hp_norm, detail::spectral_norm(h_i));
  if (dt == 0.0) dt = bound > 0.0 ? kAutoStepScale / bound : 0.01;
  return {std::move(space), std::move(h_i), std::move(h_p), total_time, dt, bound};
}

/// H(s) = (1−s)·H_I + s·H_P
inline ComplexMatrix interpolate_hamiltonian(const AdiabaticProblem& p, double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::domain, "interpolation parameter must lie in [0,1]");
  if (s == 0.0) return p.h_i;
  if (s == 1.0) return p.h_p;
  return Complex(1.0 - s) * p.h_i + Complex(s) * p.h_p;
}

struct Evolution {
  Ket state;                // renormalized final state
  double norm_drift = 0.0;  // |‖ψ(T)‖ − 1| before renormalization
  std::uint64_t steps = 0;
  double step = 0.0;        // step actually used (T/steps)
};

/// Integrates i dψ/dt = H(t/T) ψ (ħ = 1) from 0 to T with classical RK4.
inline Evolution evolve(const AdiabaticProblem& p, const Ket& psi0) {
  const auto n = static_cast<std::size_t>(p.space.dimension());
  if (!psi0.is_column() || psi0.rows() != n) fail(ErrorKind::shape, "initial state has wrong dimension");
  if (std::abs(norm(psi0) - 1.0) > 1e-9) fail(ErrorKind::domain, "initial state must be normalized");
  if (p.dt * p.spectral_bound > kMaxStepScale)
    fail(ErrorKind::stability, "dt·max‖H‖ = " + std::to_string(p.dt * p.spectral_bound) +
                                   " exceeds " + std::to_string(kMaxStepScale) + "; use a smaller dt");

  Evolution out;
  out.state = psi0;
  if (p.total_time == 0.0) return out;

  const auto steps = static_cast<std::uint64_t>(std::ceil(p.total_time / p.dt - 1e-9));
  const double h = p.total_time / static_cast<double>(steps);
  out.steps = steps;
  out.step = h;

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = p.h_p(i, i).real();
  const auto hi = p.h_i.entries();

  // f(t, ψ) = −i H(t/T) ψ
  auto deriv = [&](double t, const std::vector<Complex>& psi, std::vector<Complex>& out_v) {
    const double s = t / p.total_time;
    for (std::size_t r = 0; r < n; ++r) {
      Complex acc{};
      const Complex* row = hi.data() + r * n;
      for (std::size_t c = 0; c < n; ++c) acc += row[c] * psi[c];
      const Complex hpsi = (1.0 - s) * acc + s * diag[r] * psi[r];
      out_v[r] = Complex(hpsi.imag(), -hpsi.real());
    }
  };

  std::vector<Complex> psi(psi0.entries().begin(), psi0.entries().end());
  std::vector<Complex> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    deriv(t, psi, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
    deriv(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
    deriv(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + h * k3[i];
    deriv(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  out.state = Ket::column(std::move(psi));
  const double nrm = norm(out.state);
  out.norm_drift = std::abs(nrm - 1.0);
  out.state = Complex(1.0 / nrm) * out.state;
  return out;
}

// ---------------------------------------------------------------------------

using Histogram = std::map<Occupation, std::uint64_t>;

/// Projective measurement in the occupation basis, repeated `shots` times on
/// fresh copies of ψ: outcome j has probability |ψ_j|².
inline Histogram measure_sample(const Ket& psi, const TruncatedFockSpace& space, std::uint64_t shots,
                                std::uint64_t seed) {
  if (shots == 0) fail(ErrorKind::domain, "need at least one shot");
  if (!psi.is_column() || psi.rows() != space.dimension()) fail(ErrorKind::shape, "state has wrong dimension");
  if (std::abs(norm(psi) - 1.0) > 1e-6) fail(ErrorKind::domain, "state must be normalized");
  std::vector<double> cumulative(psi.rows());
  double total = 0.0;
  for (std::size_t i = 0; i < psi.rows(); ++i) cumulative[i] = total += std::norm(psi[i]);

  Rng rng(seed);
  std::vector<std::uint64_t> counts(psi.rows(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {  // u rounded up to the total: take the last non-empty bin
      --it;
      while (it != cumulative.begin() && *it == *(it - 1)) --it;
    }
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  Histogram hist;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) hist.emplace(space.tuple(i), counts[i]);
  return hist;
}

/// Probability mass of ψ on the given basis tuples.
inline double overlap_with(const Ket& psi, const TruncatedFockSpace& space,
                           const std::vector<Occupation>& tuples) {
  double p = 0.0;
  for (const auto& t : tuples) p += std::norm(psi[space.index(t)]);
  return p;
}

// ---------------------------------------------------------------------------

enum class Verdict { solvable_with_witness, no_solution_up_to_cutoff };

constexpr std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::solvable_with_witness ? "SolvableWithWitness" : "NoSolutionUpToCutoff";
}

struct DecideOptions {
  std::uint64_t cutoff = 4;
  double total_time = 50.0;
  double dt = 0.0;  // 0: pick from the step-size rule
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
};

struct DecisionReport {
  Verdict verdict = Verdict::no_solution_up_to_cutoff;
  std::optional<Occupation> witness;
  Occupation most_frequent;
  std::int64_t ground_energy = 0;             // exact, from the lattice scan
  std::vector<Occupation> ground_tuples;      // exact minimizers
  double success_probability_estimate = 0.0;  // empirical frequency of most_frequent
  double ground_overlap = 0.0;                // final mass on the exact ground space
  double norm_drift = 0.0;
  double dt = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t cutoff = 0;
  double total_time = 0.0;
  std::uint64_t shots = 0;
  Histogram samples;
};

/// Build H_I and H_P, evolve from the ground state of H_I, sample, and judge
/// the most frequent outcome by substitution. A negative verdict only covers
/// occupations up to the cutoff, and the stopping rule is the caller's fixed
/// (T, shots): nothing here certifies that the evolution was adiabatic.
inline DecisionReport decide(const dioph::DiophantinePolynomial& d, const DecideOptions& o) {
  if (o.cutoff == 0 || !(o.total_time > 0.0) || o.shots == 0 || o.dt < 0.0)
    fail(ErrorKind::domain, "cutoff, time and shots must be positive");
  TruncatedFockSpace space(d.num_vars(), o.cutoff);
  auto init = build_initial_hamiltonian(space);
  auto hp = build_problem_hamiltonian(d, space);
  const auto problem = make_problem(space, std::move(init.h), std::move(hp), o.total_time, o.dt);
  const auto evo = evolve(problem, init.ground);
  const auto oracle = dioph::exact_ground_oracle(d, o.cutoff);

  DecisionReport r;
  r.samples = measure_sample(evo.state, space, o.shots, o.seed);
  auto best = std::max_element(r.samples.begin(), r.samples.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
  r.most_frequent = best->first;
  r.success_probability_estimate = static_cast<double>(best->second) / static_cast<double>(o.shots);
  if (d.evaluate(r.most_frequent) == 0) {
    r.verdict = Verdict::solvable_with_witness;
    r.witness = r.most_frequent;
  }
  r.ground_energy = oracle.ground_energy;
  r.ground_tuples = oracle.minimizers;
  r.ground_overlap = overlap_with(evo.state, space, oracle.minimizers);
  r.norm_drift = evo.norm_drift;
  r.dt = evo.step;
  r.steps = evo.steps;
  r.cutoff = o.cutoff;
  r.total_time = o.total_time;
  r.shots = o.shots;
  return r;
}

}  // namespace hyperlab::aqc
