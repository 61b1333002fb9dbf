#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/linalg.hpp"

namespace hyperlab::fock {

using Occupation = std::vector<std::uint64_t>;

/// k bosonic modes, each truncated to occupations 0..cutoff. Basis tuples are
/// ordered lexicographically with mode 0 most significant, which matches the
/// Kronecker ordering of tensor_product(mode0, mode1, ...).
class TruncatedFockSpace {
 public:
  TruncatedFockSpace(std::size_t modes, std::uint64_t cutoff) : modes_(modes), cutoff_(cutoff) {
    if (modes == 0) fail(ErrorKind::validation, "Fock space needs at least one mode");
    dimension_ = 1;
    for (std::size_t j = 0; j < modes; ++j) {
      if (dimension_ > std::numeric_limits<std::uint64_t>::max() / (cutoff + 1))
        fail(ErrorKind::resource, "truncated Fock space dimension overflows");
      dimension_ *= cutoff + 1;
    }
  }

  std::size_t modes() const noexcept { return modes_; }
  std::uint64_t cutoff() const noexcept { return cutoff_; }
  std::uint64_t dimension() const noexcept { return dimension_; }

  Occupation tuple(std::uint64_t index) const {
    if (index >= dimension_) fail(ErrorKind::domain, "basis index out of range");
    Occupation n(modes_);
    for (std::size_t j = modes_; j > 0; --j) {
      n[j - 1] = index % (cutoff_ + 1);
      index /= cutoff_ + 1;
    }
    return n;
  }

  std::uint64_t index(std::span<const std::uint64_t> n) const {
    if (n.size() != modes_) fail(ErrorKind::shape, "occupation tuple has wrong arity");
    std::uint64_t idx = 0;
    for (auto nj : n) {
      if (nj > cutoff_) fail(ErrorKind::domain, "occupation above cutoff");
      idx = idx * (cutoff_ + 1) + nj;
    }
    return idx;
  }

 private:
  std::size_t modes_;
  std::uint64_t cutoff_;
  std::uint64_t dimension_ = 1;
};

/// a|n⟩ = √n |n−1⟩ on the single-mode space truncated at `cutoff`.
inline ComplexMatrix annihilation_operator(std::uint64_t cutoff) {
  const std::size_t d = cutoff + 1;
  ComplexMatrix a(d, d);
  for (std::size_t n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// N_j = I ⊗ … ⊗ a†a ⊗ … ⊗ I, built through explicit tensor products.
inline ComplexMatrix number_operator(const TruncatedFockSpace& space, std::size_t mode) {
  if (mode >= space.modes()) fail(ErrorKind::domain, "mode index out of range");
  const auto a = annihilation_operator(space.cutoff());
  const auto single = dagger(a) * a;
  const auto id = ComplexMatrix::identity(space.cutoff() + 1);
  ComplexMatrix out = mode == 0 ? single : id;
  for (std::size_t j = 1; j < space.modes(); ++j) out = tensor_product(out, j == mode ? single : id);
  return out;
}

}  // namespace hyperlab::fock
