#include "doctest.h"

#include "numa/dold_kan.hpp"
#include "support.hpp"

using namespace numa;
using numa::testing::random_complex;

namespace {

FreeComplex shifted_z(int k) {
  FreeComplex C;
  C.ranks[k] = 1;
  return C;
}

FreeComplex times2() {
  FreeComplex C;
  C.ranks = {{0, 1}, {1, 1}};
  C.diff[1] = IntMatrix{{2}};
  return C;
}

// Unnormalized Moore complex, d = sum (-1)^i d_i.
FreeComplex moore_complex(const SimplicialAbGroup& A) {
  FreeComplex M;
  for (unsigned n = 0; n <= A.n_max; ++n) M.ranks[static_cast<int>(n)] = A.level_ranks[n];
  for (unsigned n = 1; n <= A.n_max; ++n) {
    IntMatrix d(A.level_ranks[n - 1], A.level_ranks[n]);
    for (unsigned i = 0; i <= n; ++i) d = i % 2 ? d - A.face(n, i) : d + A.face(n, i);
    M.diff[static_cast<int>(n)] = d;
  }
  return M;
}

std::map<int, std::size_t> rank_function(const FreeComplex& C) {
  std::map<int, std::size_t> r;
  for (const auto& [n, rk] : C.ranks) {
    if (rk) r[n] = rk;
  }
  return r;
}

}  // namespace

TEST_CASE("surjections are enumerated by jump sets") {
  CHECK(surjections(3, 0) == std::vector<std::vector<unsigned>>{{}});
  CHECK(surjections(3, 2) == std::vector<std::vector<unsigned>>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(surjections(2, 3).empty());
  for (unsigned n = 0; n <= 7; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      Integer c;
      mpz_bin_uiui(c.get_mpz_t(), n, k);
      CHECK(surjections(n, k).size() == c.get_ui());
    }
  }
}

TEST_CASE("gamma of Z[1]") {
  const auto A = gamma(shifted_z(1), 5);
  for (unsigned n = 0; n <= 5; ++n) CHECK(A.level_ranks[n] == n);
  CHECK(A.face(1, 0).rows() == 0);
  CHECK(A.face(1, 0).cols() == 1);
  CHECK(A.face(1, 1).rows() == 0);
  CHECK(check_simplicial_identities(A).empty());
}

TEST_CASE("gamma of Z[0] is constant") {
  const auto A = gamma(shifted_z(0), 4);
  const auto K = constant_simplicial(1, 4);
  CHECK(A.level_ranks == K.level_ranks);
  CHECK(A.faces == K.faces);
  CHECK(A.degeneracies == K.degeneracies);
  const auto N = normalize(K);
  CHECK(N.rank(0) == 1);
  for (int n = 1; n <= 4; ++n) CHECK(N.rank(n) == 0);
}

TEST_CASE("gamma of Z --2--> Z") {
  const auto C = times2();
  const auto A = gamma(C, 5);
  for (unsigned n = 0; n <= 5; ++n) CHECK(A.level_ranks[n] == n + 1);
  CHECK(check_simplicial_identities(A).empty());
  // nondegenerate summand of level 1 maps to C_0 by d under d_0 and dies under d_1
  CHECK(A.face(1, 0) == IntMatrix{{1, 2}});
  CHECK(A.face(1, 1) == IntMatrix{{1, 0}});

  const auto N = normalize(A);
  for (int n = 0; n <= 4; ++n) {
    CHECK(N.rank(n) == C.rank(n));
    CHECK(homology(N, n) == homology(C, n));
  }
  CHECK(homology(N, 0) == FinAbGroup{0, {2}});
}

TEST_CASE("gamma of Z[2] normalizes back") {
  const auto A = gamma(shifted_z(2), 4);
  for (unsigned n = 0; n <= 4; ++n) CHECK(A.level_ranks[n] == n * (n - 1) / 2);
  CHECK(check_simplicial_identities(A).empty());
  const auto N = normalize(A);
  CHECK(N.rank(2) == 1);
  for (int n : {0, 1, 3, 4}) CHECK(N.rank(n) == 0);
}

TEST_CASE("truncation errors") {
  CHECK_THROWS_AS(gamma(shifted_z(3), 2), Error);
  try {
    gamma(shifted_z(3), 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooSmall);
  }
  CHECK_THROWS_AS(gamma(shifted_z(-1), 2), Error);
}

TEST_CASE("identity checker localizes a corrupted face") {
  auto A = gamma(times2(), 3);
  A.faces[{2, 1}](0, 0) += 1;
  const auto v = check_simplicial_identities(A);
  REQUIRE_FALSE(v.empty());
  bool mentions = false;
  for (const auto& x : v) mentions |= x.n == 2 || x.n == 3;
  CHECK(mentions);
  CHECK(v.front().identity == "d_i d_j = d_{j-1} d_i");
}

TEST_CASE("property: level ranks follow T and the simplicial identities hold") {
  for (int trial = 0; trial < 40; ++trial) {
    const auto C = random_complex(4, 2).complex;
    const auto A = gamma(C, 6);
    const auto r = rank_function(C);
    for (unsigned n = 0; n <= 6; ++n) CHECK(Integer(A.level_ranks[n]) == T_rank(r, n));
    CHECK(check_simplicial_identities(A).empty());
  }
}

TEST_CASE("property: N(Gamma C) and the Moore complex reproduce the homology of C") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto C = random_complex(3, 3).complex;
    const auto A = gamma(C, 5);
    const auto N = normalize(A);
    N.validate();
    const auto M = moore_complex(A);
    M.validate();
    for (int n = 0; n <= 4; ++n) {
      CHECK(N.rank(n) == C.rank(n));
      const auto H = homology(C, n);
      CHECK(homology(N, n) == H);
      CHECK(homology(M, n) == H);
    }
  }
}
