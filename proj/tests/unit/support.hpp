#pragma once

// Shared generators for the property-style tests.

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "numa/binom.hpp"
#include "numa/homalg.hpp"

namespace numa::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261016);
  return gen;
}

inline long uniform(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng());
}

inline BinomialPoly random_poly(std::size_t nvars, unsigned max_degree, int max_terms,
                                long coeff_bound = 9) {
  BinomialPoly::TermMap terms;
  const int count = static_cast<int>(uniform(0, max_terms));
  for (int t = 0; t < count; ++t) {
    MultiIndex idx(nvars, 0);
    unsigned budget = static_cast<unsigned>(uniform(0, max_degree));
    for (std::size_t j = 0; j < nvars && budget > 0; ++j) {
      const unsigned e = static_cast<unsigned>(uniform(0, budget));
      idx[j] = e;
      budget -= e;
    }
    terms[idx] += uniform(-coeff_bound, coeff_bound);
  }
  return BinomialPoly(nvars, std::move(terms));
}

inline std::vector<Integer> random_point(std::size_t nvars, long bound) {
  std::vector<Integer> p(nvars);
  for (auto& v : p) v = uniform(-bound, bound);
  return p;
}

inline BinomialPoly poly(std::size_t nvars,
                         std::initializer_list<std::pair<MultiIndex, long>> terms) {
  BinomialPoly::TermMap m;
  for (const auto& [idx, c] : terms) m[idx] += c;
  return BinomialPoly(nvars, std::move(m));
}

inline RationalPoly rpoly(std::size_t nvars,
                          std::initializer_list<std::pair<MultiIndex, Rational>> terms) {
  RationalPoly::TermMap m;
  for (const auto& [idx, c] : terms) m[idx] += c;
  return RationalPoly(nvars, std::move(m));
}

inline IntMatrix random_matrix(std::size_t rows, std::size_t cols, long bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(-bound, bound);
  }
  return m;
}

// A random product of elementary matrices, returned with its inverse.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(std::size_t n, int steps = 12) {
  IntMatrix P = IntMatrix::identity(n), Pi = IntMatrix::identity(n);
  if (n < 2) return {P, Pi};
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1));
    auto j = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    const long c = uniform(-2, 2);
    IntMatrix E = IntMatrix::identity(n), Ei = IntMatrix::identity(n);
    E(i, j) = c;
    Ei(i, j) = -c;
    P = E * P;
    Pi = Pi * Ei;
  }
  return {P, Pi};
}

struct KnownComplex {
  FreeComplex complex;
  std::map<int, std::size_t> free_rank;
  std::map<int, std::vector<long>> cyclic;  // orders of the cyclic summands of H_n
};

// A complex in degrees 0..max_degree with ranks <= max_rank, built from
// split pieces Z --(d)--> Z and free summands, then scrambled by random
// base changes. The homology is known by construction.
inline KnownComplex random_complex(int max_degree, std::size_t max_rank) {
  struct Piece {
    int top;
    long d;
  };
  std::map<int, std::size_t> ranks;
  std::vector<Piece> pieces;
  std::map<int, std::size_t> free_part;
  for (int n = 0; n <= max_degree; ++n) {
    const auto budget = static_cast<std::size_t>(uniform(0, static_cast<long>(max_rank)));
    for (std::size_t k = 0; k < budget; ++k) {
      if (ranks[n] >= max_rank) break;
      if (n > 0 && ranks[n - 1] < max_rank && uniform(0, 1) == 1) {
        pieces.push_back({n, uniform(1, 4) * (uniform(0, 1) ? 1 : -1)});
        ++ranks[n];
        ++ranks[n - 1];
      } else {
        ++free_part[n];
        ++ranks[n];
      }
    }
  }
  for (int n = 0; n <= max_degree; ++n) ranks[n];
  FreeComplex C;
  C.ranks = ranks;
  std::map<int, std::size_t> used;
  for (int n = 1; n <= max_degree; ++n) C.diff[n] = IntMatrix(ranks[n - 1], ranks[n]);
  // Allocate basis slots: pieces first, free summands after.
  for (const auto& p : pieces) {
    const std::size_t col = used[p.top]++;
    const std::size_t row = used[p.top - 1]++;
    C.diff[p.top](row, col) = p.d;
  }
  KnownComplex out;
  for (int n = 0; n <= max_degree; ++n) out.free_rank[n] = free_part[n];
  for (const auto& p : pieces) {
    if (p.d != 1 && p.d != -1) out.cyclic[p.top - 1].push_back(p.d < 0 ? -p.d : p.d);
  }
  for (int n = 0; n <= max_degree; ++n) {
    const auto [P, Pi] = random_unimodular(ranks[n]);
    // d_n -> d_n P^{-1}, d_{n+1} -> P d_{n+1}
    if (n >= 1) C.diff[n] = C.diff[n] * Pi;
    if (n + 1 <= max_degree) C.diff[n + 1] = P * C.diff[n + 1];
  }
  out.complex = std::move(C);
  return out;
}

}  // namespace numa::testing
