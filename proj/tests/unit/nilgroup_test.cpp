#include "doctest.h"

#include <random>

#include "numa/nilgroup.hpp"

using namespace numa;

namespace {

BinomialPoly var(std::size_t n, std::size_t j) { return BinomialPoly::variable(n, j); }

Rational random_rational(std::mt19937_64& rng, long bound = 20) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// sum_k (r choose k) N^k, the binomial series for g^r.
RationalMatrix binomial_series(const RationalMatrix& g, const Rational& r) {
  const std::size_t n = g.size();
  const RationalMatrix N = g - RationalMatrix::identity(n);
  RationalMatrix sum = RationalMatrix::identity(n), p = RationalMatrix::identity(n);
  for (unsigned k = 1; k < n; ++k) {
    p = p * N;
    sum = sum + p * binom(r, k);
  }
  return sum;
}

RationalMatrix random_unipotent(std::mt19937_64& rng, unsigned n) {
  std::uniform_int_distribution<long> e(-3, 3);
  RationalMatrix g = RationalMatrix::identity(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) g(i, j) = e(rng);
  }
  return g;
}

// sum_i f_i(x) g_i(y) as one polynomial in 2d variables
BinomialPoly recombine(const std::vector<std::pair<BinomialPoly, BinomialPoly>>& parts, std::size_t d) {
  std::vector<std::size_t> left(d), right(d);
  for (std::size_t j = 0; j < d; ++j) {
    left[j] = j;
    right[j] = d + j;
  }
  BinomialPoly sum(2 * d);
  for (const auto& [f, g] : parts) sum += mul(f.embedded(2 * d, left), g.embedded(2 * d, right));
  return sum;
}

}  // namespace

TEST_CASE("heisenberg law from matrix multiplication") {
  const auto H = heisenberg();
  REQUIRE(H.dim() == 3);
  CHECK(H.law.mult[0] == var(6, 0) + var(6, 3));
  CHECK(H.law.mult[1] == var(6, 1) + var(6, 4));
  CHECK(H.law.mult[2] == var(6, 2) + var(6, 5) + BinomialPoly::monomial({1, 0, 0, 0, 1, 0}));
  CHECK(H.law.inv[0] == -var(3, 0));
  CHECK(H.law.inv[1] == -var(3, 1));
  CHECK(H.law.inv[2] == -var(3, 2) + BinomialPoly::monomial({1, 1, 0}));
  CHECK(H.generators == std::vector<GroupElement>{{1, 0, 0}, {0, 1, 0}});
}

TEST_CASE("unipotent_group(2) is the integers under addition") {
  const auto G = unipotent_group(2);
  const auto Z = additive_group(1);
  CHECK(G.law.mult == Z.mult);
  CHECK(G.law.inv == Z.inv);
  CHECK(G.law.unit == Z.unit);
  CHECK_THROWS_AS(unipotent_group(1), Error);
}

TEST_CASE("malcev order is by superdiagonal distance then row") {
  using P = std::pair<unsigned, unsigned>;
  CHECK(malcev_positions(3) == std::vector<P>{{0, 1}, {1, 2}, {0, 2}});
  CHECK(malcev_positions(4) == std::vector<P>{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}});
}

TEST_CASE("group axioms") {
  const auto H = heisenberg();
  const auto rep = group_axioms(H, 6, 1);
  CHECK_FALSE(rep.law_failure);
  CHECK(rep.generators_checked);
  CHECK(rep.generators_ok);
  CHECK(rep.ok());
  CHECK(group_axioms(free_abelian(2), 4, 1).ok());
  CHECK(group_axioms(unipotent_group(4)).ok());

  auto bad = H;
  bad.law.mult[2] += BinomialPoly::monomial({2, 0, 0, 1, 0, 0});  // (x choose 2) x' is not a cocycle
  const auto broken = group_axioms(bad);
  REQUIRE(broken.law_failure);
  CHECK(*broken.law_failure == "associativity");

  auto missing = H;
  missing.generators.pop_back();
  CHECK_FALSE(group_axioms(missing, 6, 1).generators_ok);
}

TEST_CASE("matrix logarithm and exponential") {
  RationalMatrix g = RationalMatrix::identity(2);
  g(0, 1) = 1;
  RationalMatrix n(2);
  n(0, 1) = 1;
  CHECK(matrix_log(g) == n);

  const auto h = from_coordinates(3, {1, 1, 0});
  RationalMatrix expected(3);
  expected(0, 1) = 1;
  expected(1, 2) = 1;
  expected(0, 2) = Rational(-1, 2);
  CHECK(matrix_log(h) == expected);
  CHECK(matrix_exp(RationalMatrix(4)) == RationalMatrix::identity(4));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto u = random_unipotent(rng, 5);
    CHECK(matrix_exp(matrix_log(u)) == u);
    const auto N = u - RationalMatrix::identity(5);
    CHECK(matrix_log(matrix_exp(N)) == N);
  }
  CHECK_THROWS_AS(matrix_log(RationalMatrix(2)), Error);
}

TEST_CASE("rational powers") {
  RationalMatrix g = RationalMatrix::identity(2);
  g(0, 1) = 1;
  const auto half = power(g, Rational(1, 2));
  CHECK(half(0, 1) == Rational(1, 2));

  const auto h = from_coordinates(3, {1, 1, 0});
  CHECK(power(h, 0) == RationalMatrix::identity(3));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Rational r = random_rational(rng);
    const auto c = to_coordinates(power(h, r));
    CHECK(c[0] == r);
    CHECK(c[1] == r);
    CHECK(c[2] == r * (r - 1) / 2);
  }
}

TEST_CASE("property: power laws on random 4x4 unipotent matrices") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_unipotent(rng, 4);
    const Rational r = random_rational(rng, 6), s = random_rational(rng, 6);
    const auto gr = power(g, r);
    CHECK(gr == binomial_series(g, r));
    CHECK(power(gr, s) == power(g, r * s));
    CHECK(gr * power(g, s) == power(g, r + s));
  }
}

TEST_CASE("integer powers agree with the group law") {
  const auto H = heisenberg();
  const GroupElement g{2, -1, 3};
  GroupElement acc = H.law.unit;
  for (int k = 1; k <= 6; ++k) {
    acc = H.law.multiply(acc, g);
    const auto c = to_coordinates(power(from_coordinates(3, {2, -1, 3}), k));
    for (std::size_t j = 0; j < 3; ++j) CHECK(c[j] == Rational(acc[j]));
  }
}

TEST_CASE("p-adic powers") {
  const auto h = from_coordinates(3, {1, 1, 0});
  const Rational r(1, 3);
  const auto m = power_padic(h, PadicApprox::from_rational(2, r, 10));
  CHECK(m[0][1] == PadicApprox::from_rational(2, r, 10));
  // (r choose 2) costs v_2(2!) = 1 digit
  CHECK(m[0][2].precision() == 9);
  CHECK(m[0][2] == PadicApprox::from_rational(2, r * (r - 1) / 2, 9));
  CHECK(m[0][0] == PadicApprox(2, 1, 10));
  CHECK(m[1][0] == PadicApprox(2, 0, 10));

  const auto m3 = power_padic(h, PadicApprox::from_rational(3, Rational(1, 2), 8));
  CHECK(m3[0][2].precision() == 8);
  CHECK(m3[0][2] == PadicApprox::from_rational(3, Rational(-1, 8), 8));

  // agreement with the rational power on 4x4 matrices
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_unipotent(rng, 4);
    const Rational q(static_cast<long>(rng() % 41) - 20, 2 * static_cast<long>(rng() % 10) + 1);
    const auto exact = power(g, q);
    const auto approx = power_padic(g, PadicApprox::from_rational(2, q, 12));
    for (unsigned i = 0; i < 4; ++i) {
      for (unsigned j = 0; j < 4; ++j) {
        const auto& a = approx[i][j];
        CHECK(a == PadicApprox::from_rational(2, exact(i, j), a.precision()));
        CHECK(a.precision() >= 11);  // (r choose 3) costs v_2(3!) = 1
      }
    }
  }
  CHECK_THROWS_AS(power_padic(h, PadicApprox::from_rational(2, r, 1)), Error);
}

TEST_CASE("comultiplication examples") {
  const auto Z = free_abelian(1);
  const auto parts = comultiply(BinomialPoly::binomial(1, 0, 2), Z);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == std::pair{BinomialPoly::constant(1, 1), BinomialPoly::binomial(1, 0, 2)});
  CHECK(parts[1] == std::pair{var(1, 0), var(1, 0)});
  CHECK(parts[2] == std::pair{BinomialPoly::binomial(1, 0, 2), BinomialPoly::constant(1, 1)});

  const auto H = heisenberg();
  const auto px = comultiply(var(3, 0), H);
  REQUIRE(px.size() == 2);
  CHECK(px[0] == std::pair{BinomialPoly::constant(3, 1), var(3, 0)});
  CHECK(px[1] == std::pair{var(3, 0), BinomialPoly::constant(3, 1)});

  const auto one = comultiply(BinomialPoly::constant(3, 1), H);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::pair{BinomialPoly::constant(3, 1), BinomialPoly::constant(3, 1)});
}

TEST_CASE("property: comultiplication evaluates and is coassociative") {
  const auto H = heisenberg();
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), pt(-5, 5);
  for (int t = 0; t < 20; ++t) {
    BinomialPoly f(3);
    for (int k = 0; k < 4; ++k) {
      f += BinomialPoly::monomial({static_cast<unsigned>(deg(rng)), static_cast<unsigned>(deg(rng)),
                                   static_cast<unsigned>(deg(rng))},
                                  coef(rng));
    }
    const auto parts = comultiply(f, H);
    for (int s = 0; s < 10; ++s) {
      const GroupElement g{pt(rng), pt(rng), pt(rng)}, h{pt(rng), pt(rng), pt(rng)};
      Integer sum = 0;
      for (const auto& [a, b] : parts) sum += evaluate(a, std::span<const Integer>(g)) * evaluate(b, std::span<const Integer>(h));
      const auto gh = H.law.multiply(g, h);
      CHECK(sum == evaluate(f, std::span<const Integer>(gh)));
    }

    // (Delta x 1) Delta f and (1 x Delta) Delta f as polynomials in 9 variables
    BinomialPoly lhs(9), rhs(9);
    const std::vector<std::size_t> first{0, 1, 2, 3, 4, 5}, last{3, 4, 5, 6, 7, 8};
    const std::vector<std::size_t> x{0, 1, 2}, z{6, 7, 8};
    for (const auto& [a, b] : parts) {
      lhs += mul(recombine(comultiply(a, H), 3).embedded(9, first), b.embedded(9, z));
      rhs += mul(a.embedded(9, x), recombine(comultiply(b, H), 3).embedded(9, last));
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("passi degrees on heisenberg") {
  const auto H = heisenberg();
  const auto one = passi_degree(BinomialPoly::constant(3, 1), H);
  CHECK(one.degree == 1);
  CHECK(one.chain_ranks == std::vector<std::size_t>{1, 0});
  CHECK(passi_degree(var(3, 0), H).degree == 2);
  CHECK(passi_degree(var(3, 1), H).degree == 2);
  const auto z = passi_degree(var(3, 2), H);
  CHECK(z.degree == 3);
  CHECK(z.chain_ranks == std::vector<std::size_t>{1, 1, 1, 0});
  CHECK(z.module_basis.size() == 3);
  CHECK(z.module_chain_ranks == std::vector<std::size_t>{3, 2, 1, 0});
  CHECK(z.actions.size() == 2);
  CHECK(passi_degree(BinomialPoly(3), H).degree == 0);

  for (const auto& [f, k] : std::vector<std::pair<BinomialPoly, unsigned>>{
           {BinomialPoly::constant(3, 1), 1}, {var(3, 0), 2}, {var(3, 1), 2}, {var(3, 2), 3}}) {
    const auto cc = passi_cross_check(f, H, k, 500, 3, 23);
    CHECK(cc.failures_at_degree == 0);
    CHECK(cc.witness_below);
  }
}

TEST_CASE("certificate actions are unipotent and respect the commutator") {
  const auto H = heisenberg();
  const auto cert = passi_degree(var(3, 2) + BinomialPoly::monomial({1, 1, 0}), H);
  const std::size_t r = cert.module_basis.size();
  const IntMatrix id = IntMatrix::identity(r);
  for (const auto& A : cert.actions) {
    IntMatrix N = A - id, p = id;
    for (std::size_t k = 0; k < r; ++k) p = p * N;
    CHECK(p.is_zero());
  }
  // each action matrix reproduces left translation of the basis
  for (std::size_t g = 0; g < H.generators.size(); ++g) {
    for (std::size_t c = 0; c < r; ++c) {
      BinomialPoly image(3);
      for (std::size_t i = 0; i < r; ++i) image += cert.module_basis[i] * cert.actions[g](i, c);
      CHECK(image == left_translate(cert.module_basis[c], H, H.generators[g]));
    }
  }
}

TEST_CASE("passi degree detects a non-nilpotent action") {
  MalcevGroup G;
  G.law.dim = 1;
  G.law.mult = {var(2, 0) + var(2, 1) + BinomialPoly::monomial({1, 1})};  // translation by 1 doubles y
  G.law.inv = {-var(1, 0)};
  G.law.unit = {0};
  G.generators = {{1}};
  try {
    passi_degree(var(1, 0), G);
    FAIL("expected NonNilpotentAction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonNilpotentAction);
  }
}

TEST_CASE("on Z^d passi degree is binomial degree plus one") {
  for (std::size_t d = 1; d <= 2; ++d) {
    const auto G = free_abelian(d);
    for (unsigned a = 0; a <= 3; ++a) {
      for (unsigned b = 0; b <= (d == 2 ? 3 - a : 0); ++b) {
        const MultiIndex idx = d == 1 ? MultiIndex{a} : MultiIndex{a, b};
        CHECK(passi_degree(BinomialPoly::monomial(idx), G).degree == a + b + 1);
      }
    }
    // a mix takes the top degree
    const auto mix = BinomialPoly::binomial(d, 0, 2) + BinomialPoly::variable(d, d - 1) * Integer(5);
    CHECK(passi_degree(mix, G).degree == 3);
  }
}

TEST_CASE("coordinate passi degrees on U_4 grow with distance") {
  const auto U = unipotent_group(4);
  const auto pos = malcev_positions(4);
  for (std::size_t t = 0; t < pos.size(); ++t) {
    const unsigned dist = pos[t].second - pos[t].first;
    const auto k = passi_degree(var(6, t), U).degree;
    CHECK(k == dist + 1);
    CHECK(k <= 4);
  }
}
