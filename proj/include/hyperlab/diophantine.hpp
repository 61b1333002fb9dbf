#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab::dioph {

struct Term {
  std::int64_t coefficient = 0;
  std::vector<std::uint32_t> exponents;

  friend bool operator==(const Term&, const Term&) = default;
};

namespace detail {
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::numeric, "polynomial value overflows 64 bits");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::numeric, "polynomial value overflows 64 bits");
  return r;
}
}  // namespace detail

/// Integer polynomial D(x₁..x_k) as a sparse term list, evaluated exactly
/// over the naturals.
class DiophantinePolynomial {
 public:
  DiophantinePolynomial(std::size_t num_vars, std::vector<Term> terms) : num_vars_(num_vars) {
    if (num_vars == 0) fail(ErrorKind::validation, "polynomial needs at least one variable");
    std::set<std::vector<std::uint32_t>> seen;
    for (auto& t : terms) {
      if (t.exponents.size() != num_vars)
        fail(ErrorKind::validation, "term exponent vector has wrong length");
      if (!seen.insert(t.exponents).second)
        fail(ErrorKind::validation, "two terms share an exponent vector");
      if (t.coefficient != 0) terms_.push_back(std::move(t));
    }
    // Descending by exponent vector: leading terms first.
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exponents > b.exponents; });
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  std::int64_t evaluate(std::span<const std::uint64_t> x) const {
    if (x.size() != num_vars_) fail(ErrorKind::shape, "argument count does not match variable count");
    std::int64_t sum = 0;
    for (const auto& t : terms_) {
      std::int64_t v = t.coefficient;
      for (std::size_t j = 0; j < num_vars_; ++j) {
        const auto base = static_cast<std::int64_t>(x[j]);
        for (std::uint32_t e = 0; e < t.exponents[j]; ++e) v = detail::checked_mul(v, base);
      }
      sum = detail::checked_add(sum, v);
    }
    return sum;
  }

  /// D(x)², the problem-Hamiltonian eigenvalue at occupation x.
  std::int64_t energy(std::span<const std::uint64_t> x) const {
    const auto d = evaluate(x);
    return detail::checked_mul(d, d);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      const bool constant = std::all_of(t.exponents.begin(), t.exponents.end(), [](auto e) { return e == 0; });
      const std::int64_t mag = t.coefficient < 0 ? -t.coefficient : t.coefficient;
      if (i == 0)
        s += t.coefficient < 0 ? "-" : "";
      else
        s += t.coefficient < 0 ? " - " : " + ";
      if (mag != 1 || constant) s += std::to_string(mag);
      bool first = mag != 1 || constant;
      for (std::size_t j = 0; j < num_vars_; ++j) {
        if (t.exponents[j] == 0) continue;
        if (first) s += "*";
        s += "x" + std::to_string(j + 1);
        if (t.exponents[j] > 1) s += "^" + std::to_string(t.exponents[j]);
        first = true;
      }
    }
    return s;
  }

 private:
  std::size_t num_vars_;
  std::vector<Term> terms_;
};

/// {"vars":k,"terms":[[coeff,[e1..ek]],...]}
inline DiophantinePolynomial parse_polynomial(const nlohmann::json& doc) {
  try {
    const auto k = doc.at("vars").get<std::int64_t>();
    if (k <= 0) fail(ErrorKind::validation, "polynomial needs at least one variable");
    std::vector<Term> terms;
    for (const auto& t : doc.at("terms")) {
      if (!t.is_array() || t.size() != 2) fail(ErrorKind::validation, "term must be [coefficient, exponents]");
      terms.push_back({t.at(0).get<std::int64_t>(), t.at(1).get<std::vector<std::uint32_t>>()});
    }
    return DiophantinePolynomial(static_cast<std::size_t>(k), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, std::string("malformed polynomial document: ") + e.what());
  }
}

inline DiophantinePolynomial parse_polynomial_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open polynomial file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, "polynomial file is not valid JSON: " + std::string(e.what()));
  }
  return parse_polynomial(doc);
}

inline nlohmann::json to_document(const DiophantinePolynomial& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : d.terms()) terms.push_back(nlohmann::json::array({t.coefficient, t.exponents}));
  return {{"vars", d.num_vars()}, {"terms", terms}};
}

/// (x+1)³ + (y+1)³ + (z+1)³ + c·xyz, expanded.
inline DiophantinePolynomial cubic_family(std::int64_t c) {
  std::vector<Term> terms;
  for (std::uint32_t j = 0; j < 3; ++j) {
    for (std::uint32_t e = 1; e <= 3; ++e) {
      std::vector<std::uint32_t> ex(3, 0);
      ex[j] = e;
      terms.push_back({e == 2 || e == 1 ? 3 : 1, ex});
    }
  }
  terms.push_back({3, {0, 0, 0}});
  terms.push_back({c, {1, 1, 1}});
  return DiophantinePolynomial(3, std::move(terms));
}

struct GroundOracle {
  std::int64_t ground_energy = 0;
  std::vector<std::vector<std::uint64_t>> minimizers;  // lexicographic order
  std::uint64_t lattice_size = 0;
};

inline constexpr std::uint64_t kMaxOracleLattice = 10'000'000;

/// Exhaustive minimum of D² over {0..cutoff}^k.
inline GroundOracle exact_ground_oracle(const DiophantinePolynomial& d, std::uint64_t cutoff) {
  std::uint64_t size = 1;
  for (std::size_t j = 0; j < d.num_vars(); ++j) {
    if (size > kMaxOracleLattice / (cutoff + 1))
      fail(ErrorKind::resource, "oracle lattice exceeds " + std::to_string(kMaxOracleLattice) + " points");
    size *= cutoff + 1;
  }
  GroundOracle g;
  g.lattice_size = size;
  std::vector<std::uint64_t> x(d.num_vars(), 0);
  bool first = true;
  for (std::uint64_t i = 0; i < size; ++i) {
    const auto e = d.energy(x);
    if (first || e < g.ground_energy) {
      g.ground_energy = e;
      g.minimizers.clear();
      first = false;
    }
    if (e == g.ground_energy) g.minimizers.push_back(x);
    for (std::size_t j = x.size(); j > 0; --j) {  // odometer, last variable fastest
      if (++x[j - 1] <= cutoff) break;
      x[j - 1] = 0;
    }
  }
  return g;
}

}  // namespace hyperlab::dioph
