#pragma once

// Dold-Kan at finite truncation. Level n of Gamma(C) is the direct sum of
// C_k over order-preserving surjections [n] -> [k]; a surjection is recorded
// by its jump set {j in 1..n : sigma(j) > sigma(j-1)}, a k-subset. Summands are
// ordered by k, then lexicographically by jump set.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "numa/homalg.hpp"

namespace numa {

struct SimplicialAbGroup {
  unsigned n_max = 0;
  std::vector<std::size_t> level_ranks;  // 0..n_max
  // (n, i): level n -> level n-1, a rank(n-1) x rank(n) matrix
  std::map<std::pair<unsigned, unsigned>, IntMatrix> faces;
  // (n, i): level n -> level n+1, for n < n_max
  std::map<std::pair<unsigned, unsigned>, IntMatrix> degeneracies;

  const IntMatrix& face(unsigned n, unsigned i) const;
  const IntMatrix& degeneracy(unsigned n, unsigned i) const;
};

/// One failed simplicial identity, e.g. "d_i d_j = d_{j-1} d_i" at level n.
struct IdentityViolation {
  std::string identity;
  unsigned n = 0, i = 0, j = 0;
};

std::vector<IdentityViolation> check_simplicial_identities(const SimplicialAbGroup& A);

/// Jump sets of all surjections [n] -> [k], in basis order.
std::vector<std::vector<unsigned>> surjections(unsigned n, unsigned k);

/// Throws TruncationTooSmall if C has nonzero rank above n_max, InvalidArgument
/// for negative degrees.
SimplicialAbGroup gamma(const FreeComplex& C, unsigned n_max);

/// N_n = intersection of ker d_i for i >= 1, differential induced by d_0.
FreeComplex normalize(const SimplicialAbGroup& A);

/// Constant simplicial group on Z^rank.
SimplicialAbGroup constant_simplicial(std::size_t rank, unsigned n_max);

}  // namespace numa
