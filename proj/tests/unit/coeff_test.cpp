#include "doctest.h"

#include <random>

#include "numa/coeff.hpp"
#include "numa/nilgroup.hpp"

using namespace numa;

namespace {

Integer pow_ui(unsigned long b, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

BinomialPoly random_poly(std::mt19937_64& rng, std::size_t nvars) {
  std::uniform_int_distribution<int> coef(-50, 50), deg(0, 4), count(1, 6);
  BinomialPoly b(nvars);
  for (int t = count(rng); t > 0; --t) {
    MultiIndex idx(nvars);
    for (auto& e : idx) e = static_cast<unsigned>(deg(rng));
    b += BinomialPoly::monomial(idx, coef(rng));
  }
  return b;
}

}  // namespace

TEST_CASE("valuations") {
  CHECK(valuation(48, 2) == 4u);
  CHECK(valuation(-81, 3) == 4u);
  CHECK_FALSE(valuation(0, 5));
  // Legendre against direct factorials
  for (unsigned k = 0; k <= 30; ++k) {
    Integer f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) CHECK(factorial_valuation(k, p) == *valuation(f, p));
  }
  CHECK(is_p_integral(Rational(1, 3), 2));
  CHECK_FALSE(is_p_integral(Rational(1, 2), 2));
}

TEST_CASE("p-adic approximations") {
  const auto third = PadicApprox::from_rational(2, Rational(1, 3), 8);
  CHECK(third.residue() == 171);  // 3 * 171 = 2 * 256 + 1
  CHECK((third * Integer(3)) == PadicApprox(2, 1, 8));
  CHECK_THROWS_AS(PadicApprox::from_rational(2, Rational(1, 2), 8), Error);
  CHECK_THROWS_AS(PadicApprox(2, 1, 0), Error);

  const auto a = PadicApprox(3, 5, 4), b = PadicApprox(3, 7, 6);
  CHECK((a + b).precision() == 4);
  CHECK((a * b).residue() == 35);
  CHECK((a - b).residue() == 79);  // -2 mod 81
  CHECK(a.truncated(2).residue() == 5);
  CHECK_THROWS_AS(a.truncated(5), Error);
  CHECK(PadicApprox(3, 5, 4).congruent(PadicApprox(3, 14, 2)));
}

TEST_CASE("p-adic binomials lose v_p(k!) digits") {
  const auto r = PadicApprox::from_rational(3, Rational(1, 2), 8);
  for (unsigned k = 0; k <= 8; ++k) {
    const auto c = binom(r, k);
    CHECK(c.precision() == 8 - factorial_valuation(k, 3));
    CHECK(c == PadicApprox::from_rational(3, binom(Rational(1, 2), k), c.precision()));
  }
  CHECK_THROWS_AS(binom(PadicApprox(3, 1, 4), 9), Error);  // v_3(9!) = 4
  try {
    binom(PadicApprox(2, 1, 1), 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
}

TEST_CASE("property: p-adic results are sound under extra precision") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> v(-100000, 100000);
  std::uniform_int_distribution<unsigned> kk(0, 6);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 200; ++t) {
      const Integer x = v(rng), y = v(rng);
      const unsigned k = kk(rng), N = 8;
      auto compute = [&](unsigned prec) {
        const PadicApprox a(p, x, prec), b(p, y, prec);
        return binom(a * b + a, k) - b;
      };
      const auto lo = compute(N), hi = compute(N + 5);
      CHECK(hi.precision() == lo.precision() + 5);
      CHECK(hi.truncated(lo.precision()) == lo);
    }
  }
}

TEST_CASE("p-adic evaluation of binomial polynomials") {
  const BinomialPoly b = BinomialPoly::binomial(2, 0, 3) * Integer(5) + BinomialPoly::monomial({1, 1});
  const std::vector<Rational> q{Rational(1, 5), Rational(-7, 11)};
  std::vector<PadicApprox> x;
  for (const auto& c : q) x.push_back(PadicApprox::from_rational(3, c, 10));
  const auto v = evaluate(b, std::span<const PadicApprox>(x), 3, 10);
  CHECK(v.precision() == 9);
  CHECK(v == PadicApprox::from_rational(3, evaluate(b, std::span<const Rational>(q)), 9));
  CHECK(evaluate(BinomialPoly::constant(0, 4), std::span<const PadicApprox>(), 3, 6) == PadicApprox(3, 4, 6));
}

TEST_CASE("coefficient rings") {
  const auto Z2 = CoeffRing::localized_at({2});
  CHECK(Z2.contains(Rational(1, 3)));
  CHECK_FALSE(Z2.contains(Rational(1, 2)));
  CHECK(Z2.to_string() == "Z_(2)");
  const auto half = CoeffRing::inverting({2});
  CHECK(half.contains(Rational(3, 4)));
  CHECK_FALSE(half.contains(Rational(1, 3)));
  CHECK(half.to_string() == "Z[1/2]");
  CHECK(CoeffRing::rationals().contains(Rational(5, 77)));
  CHECK_FALSE(CoeffRing::integers().contains(Rational(5, 7)));
  CHECK(CoeffRing::padic(3, 8).to_string() == "Z_3 mod 3^8");
  CHECK_THROWS_AS(CoeffRing::inverting({2, 2}), Error);
  CHECK_THROWS_AS(CoeffRing::localized_at({4}), Error);
  CHECK_THROWS_AS(CoeffRing::padic(3, 0), Error);
}

TEST_CASE("p-integrality certificates") {
  const auto c2 = BinomialPoly::binomial(1, 0, 2);
  const std::vector<Rational> third{Rational(1, 3)}, half{Rational(1, 2)};
  CHECK(evaluate(c2, std::span<const Rational>(third)) == Rational(-1, 9));
  CHECK(evaluate(c2, std::span<const Rational>(half)) == Rational(-1, 8));

  const auto cert = certify_p_integral(c2, 2);
  CHECK(cert.samples.size() == 100);
  CHECK(cert.all_integral());
  for (const auto& s : cert.samples) CHECK(is_p_integral(s.point[0], 2));

  // a linear map with integer matrix
  const auto lin = BinomialPoly::variable(3, 0) * Integer(4) - BinomialPoly::variable(3, 2) * Integer(9);
  CHECK(certify_p_integral(lin, 7).all_integral());
}

TEST_CASE("property: integral binomial polynomials stay p-integral") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> nv(1, 3);
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
    for (int t = 0; t < 40; ++t) {
      const auto b = random_poly(rng, nv(rng));
      const auto cert = certify_p_integral(b, p, 100, rng());
      CHECK(cert.all_integral());
    }
  }
}

TEST_CASE("tensor with a subring of Q") {
  const auto X = k_z_1(4);
  const auto E = tensor_R(X, CoeffRing::localized_at({2}));
  const std::vector<Rational> x{Rational(1, 3), 5};
  CHECK(E.face(2, 0, std::span<const Rational>(x)) == std::vector<Rational>{5});
  CHECK(E.face(2, 1, std::span<const Rational>(x)) == std::vector<Rational>{Rational(16, 3)});
  CHECK(E.face(2, 2, std::span<const Rational>(x)) == std::vector<Rational>{Rational(1, 3)});
  const std::vector<Rational> bad{Rational(1, 2), 0};
  CHECK_THROWS_AS(E.face(2, 1, std::span<const Rational>(bad)), Error);
  CHECK(E.check_identities(10).empty());
  CHECK(tensor_R(X, CoeffRing::inverting({3})).check_identities(10).empty());

  // over Z the evaluator is integer evaluation
  const auto B = classifying_space(heisenberg().law, 3);
  const auto EZ = tensor_R(B, CoeffRing::integers());
  const std::vector<Integer> g{1, -2, 3, 4, 0, -5};
  const std::vector<Rational> gq(g.begin(), g.end());
  for (unsigned i = 0; i <= 2; ++i) {
    const auto& face = B.face(2, i);
    const auto rats = EZ.face(2, i, std::span<const Rational>(gq));
    REQUIRE(face.size() == rats.size());
    for (std::size_t t = 0; t < face.size(); ++t) {
      CHECK(Rational(evaluate(face[t], std::span<const Integer>(g))) == rats[t]);
    }
  }
}

TEST_CASE("tensor with truncated p-adics") {
  const auto B = classifying_space(heisenberg().law, 3);
  const auto E = tensor_R(B, CoeffRing::padic(3, 8));
  CHECK(E.check_identities(10).empty());

  // associativity of the law after one binomial of index 3
  std::vector<PadicApprox> g;
  for (long v : {4, -2, 7, 1, 5, -3}) g.emplace_back(3, v, 8);
  const auto m = E.face(2, 1, std::span<const PadicApprox>(g));
  CHECK(m[0].precision() == 8);
  const auto c = binom(m[2], 3);
  CHECK(c.precision() == 7);
  CHECK(c == PadicApprox(3, binom(Integer(7 - 3 + 4 * 5), 3), 7));

  // a corrupted face is caught at sampled points
  auto Xbad = k_z_1(3);
  Xbad.faces[{2, 1}][0] += BinomialPoly::constant(2, 1);
  CHECK_FALSE(tensor_R(Xbad, CoeffRing::padic(5, 4)).check_identities(3).empty());
  CHECK_FALSE(tensor_R(Xbad, CoeffRing::localized_at({5})).check_identities(3).empty());
}

TEST_CASE("mahler profiles") {
  const auto three = mahler_profile(
      [](const Integer& x) { return pow_ui(3, x.get_ui()); }, 2, 32);
  REQUIRE(three.entries.size() == 33);
  for (unsigned k = 0; k <= 32; ++k) {
    CHECK(three.entries[k].c == pow_ui(2, k));
    CHECK(three.entries[k].v == k);
  }
  CHECK(three.valuations_nondecreasing);
  CHECK_FALSE(three.support_end);

  // (x^3 - x)/3 = 2 (x choose 2) + 2 (x choose 3)
  const auto cube = mahler_profile([](const Integer& x) { return Integer((x * x * x - x) / 3); }, 3, 10);
  CHECK(cube.support_end == 3u);
  CHECK(cube.entries[0].c == 0);
  CHECK(cube.entries[1].c == 0);
  CHECK(cube.entries[2].c == 2);
  CHECK(cube.entries[3].c == 2);

  const auto id = mahler_profile([](const Integer& x) { return x; }, 5, 6);
  CHECK(id.support_end == 1u);
  for (unsigned k = 0; k <= 6; ++k) CHECK(id.entries[k].c == (k == 1 ? 1 : 0));
}

TEST_CASE("property: mahler profile recovers binomial coefficients") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto b = random_poly(rng, 1);
    const auto prof = mahler_profile(
        [&](const Integer& x) {
          const std::vector<Integer> pt{x};
          return evaluate(b, std::span<const Integer>(pt));
        },
        7, 8);
    for (unsigned k = 0; k <= 8; ++k) CHECK(prof.entries[k].c == b.coefficient({k}));
  }
}
