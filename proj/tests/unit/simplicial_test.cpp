#include "doctest.h"

#include "numa/simplicial.hpp"
#include "support.hpp"

using namespace numa;
using numa::testing::poly;
using numa::testing::random_point;
using numa::testing::random_poly;
using numa::testing::uniform;

namespace {

NumericalGroup heisenberg() {
  // coordinates (x, y, z); (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')
  NumericalGroup H;
  H.dim = 3;
  auto v6 = [](std::size_t j) { return BinomialPoly::variable(6, j); };
  auto v3 = [](std::size_t j) { return BinomialPoly::variable(3, j); };
  H.mult = {v6(0) + v6(3), v6(1) + v6(4), v6(2) + v6(5) + mul(v6(0), v6(4))};
  H.inv = {-v3(0), -v3(1), -v3(2) + mul(v3(0), v3(1))};
  H.unit = {0, 0, 0};
  return H;
}

BinomialPoly rational(const RationalPoly& p) { return from_rational_poly(p); }

// ((x+y)^p - x^p - y^p)/p on level 2 of K(Z,1).
BinomialPoly frobenius_cocycle(unsigned p) {
  const auto x = RationalPoly::variable(2, 0), y = RationalPoly::variable(2, 1);
  return rational(((x + y).pow(p) - x.pow(p) - y.pow(p)) * Rational(1, p));
}

// (x^p - x)/p as a rational polynomial in one variable.
RationalPoly frobenius_quotient(unsigned p) {
  const auto x = RationalPoly::variable(1, 0);
  return (x.pow(p) - x) * Rational(1, p);
}

bool is_multiple_of_x(const RationalPoly& r) {
  for (const auto& [idx, c] : r.terms()) {
    if (idx != MultiIndex{1}) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("K(Z,1) faces and degeneracies") {
  const auto X = k_z_1(5);
  CHECK(X.level_ranks == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  const auto x1 = BinomialPoly::variable(2, 0), x2 = BinomialPoly::variable(2, 1);
  CHECK(X.face(2, 0) == PolyMap{x2});
  CHECK(X.face(2, 1) == PolyMap{x1 + x2});
  CHECK(X.face(2, 2) == PolyMap{x1});
  CHECK(X.face(1, 0).empty());
  CHECK(X.face(1, 1).empty());
  CHECK(X.degeneracy(1, 0) == PolyMap{BinomialPoly(1), BinomialPoly::variable(1, 0)});
  CHECK(check_simplicial_identities(X).empty());

  const auto B = classifying_space(additive_group(1), 5);
  CHECK(B.faces == X.faces);
  CHECK(B.degeneracies == X.degeneracies);
}

TEST_CASE("group laws") {
  CHECK_FALSE(group_law_failure(additive_group(2)));
  CHECK_FALSE(group_law_failure(heisenberg()));

  auto broken = heisenberg();
  auto v6 = [](std::size_t j) { return BinomialPoly::variable(6, j); };
  broken.mult[2] = v6(2) + v6(5) + mul(BinomialPoly::binomial(6, 0, 2), v6(4));
  CHECK(group_law_failure(broken) == std::optional<std::string>("associativity"));
  CHECK_THROWS_AS(classifying_space(broken, 3), Error);

  auto bad_inverse = heisenberg();
  bad_inverse.inv[2] = -BinomialPoly::variable(3, 2);
  CHECK(group_law_failure(bad_inverse) == std::optional<std::string>("left inverse"));
  try {
    classifying_space(bad_inverse, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAGroup);
  }

  const auto H = heisenberg();
  CHECK(H.multiply({1, 0, 0}, {0, 1, 0}) == std::vector<Integer>{1, 1, 1});
  CHECK(H.multiply({0, 1, 0}, {1, 0, 0}) == std::vector<Integer>{1, 1, 0});
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_point(3, 20);
    CHECK(H.multiply(g, H.inverse(g)) == std::vector<Integer>{0, 0, 0});
  }
}

TEST_CASE("classifying spaces pass the identity check") {
  const auto Z2 = classifying_space(additive_group(2), 4);
  CHECK(Z2.level_ranks[3] == 6);
  CHECK(check_simplicial_identities(Z2).empty());
  const auto BH = classifying_space(heisenberg(), 4);
  CHECK(check_simplicial_identities(BH).empty());
}

TEST_CASE("identity checker names the failing identity") {
  auto X = k_z_1(4);
  X.faces[{3, 1}][0] += BinomialPoly::constant(3, 1);
  const auto v = check_simplicial_identities(X);
  REQUIRE_FALSE(v.empty());
  bool found = false;
  for (const auto& x : v) found |= (x.identity == "d_i d_j = d_{j-1} d_i" && (x.n == 3 || x.n == 4));
  CHECK(found);
}

TEST_CASE("coboundary on K(Z,1)") {
  const auto X = k_z_1(4);
  // df(x,y) = f(y) - f(x+y) + f(x)
  const auto c2 = BinomialPoly::binomial(1, 0, 2);
  CHECK(coboundary(X, 1, c2) == -poly(2, {{{1, 1}, 1}}));
  CHECK(coboundary(X, 1, BinomialPoly::variable(1, 0)).is_zero());
  // 0-cochains on the point
  CHECK(coboundary(X, 0, BinomialPoly::constant(0, 5)).is_zero());

  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_poly(1, 5, 4);
    const auto df = coboundary(X, 1, f);
    for (int s = 0; s < 5; ++s) {
      const auto pt = random_point(2, 30);
      auto at = [&](const Integer& v) {
        const std::vector<Integer> p{v};
        return evaluate(f, std::span<const Integer>(p));
      };
      CHECK(evaluate(df, std::span<const Integer>(pt)) == at(pt[1]) - at(pt[0] + pt[1]) + at(pt[0]));
    }
  }
}

TEST_CASE("property: d o d = 0 on graded bases") {
  const auto X = k_z_1(4);
  const auto Z2 = classifying_space(additive_group(2), 3);
  const auto BH = classifying_space(heisenberg(), 3);
  for (const auto* obj : {&X, &Z2, &BH}) {
    for (unsigned n = 0; n + 2 <= obj->n_max; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_poly(obj->level_ranks[n], 3, 4);
        CHECK(coboundary(*obj, n + 1, coboundary(*obj, n, f)).is_zero());
      }
    }
  }
}

TEST_CASE("graded cohomology of K(Z,1)") {
  const auto X = k_z_1(4);
  const auto H = graded_cohomology(X, 6);
  CHECK(H.d_max == 6);
  CHECK(H.pieces.at({0, 0}) == FinAbGroup{1, {}});
  CHECK(H.pieces.at({1, 1}) == FinAbGroup{1, {}});
  for (unsigned d = 0; d <= 6; ++d) {
    if (d != 0) CHECK(H.pieces.at({0, d}).is_zero());
    if (d != 1) CHECK(H.pieces.at({1, d}).is_zero());
    CHECK(H.pieces.at({2, d}).is_zero());
    CHECK(H.pieces.at({3, d}).is_zero());
  }
  // the circle: Z, Z, 0, 0
  CHECK(H.total(0) == FinAbGroup{1, {}});
  CHECK(H.total(1) == FinAbGroup{1, {}});
  CHECK(H.total(2).is_zero());
  CHECK(H.total(3).is_zero());

  const auto threaded = graded_cohomology(X, 6, true, 3);
  CHECK(threaded.pieces == H.pieces);
}

TEST_CASE("normalized and unnormalized cochains agree on K(Z,1)") {
  const auto X = k_z_1(3);
  const auto N = graded_cohomology(X, 4, true);
  const auto U = graded_cohomology(X, 4, false);
  for (unsigned n = 0; n <= 2; ++n) {
    for (unsigned d = 0; d <= 4; ++d) CHECK(N.pieces.at({n, d}) == U.pieces.at({n, d}));
  }
  // normalized pieces are no larger
  for (unsigned d = 0; d <= 4; ++d) {
    const auto np = graded_pieces(X, d, true);
    const auto up = graded_pieces(X, d, false);
    for (unsigned n = 0; n <= 3; ++n) CHECK(np[n].normalized.cols() <= up[n].normalized.cols());
  }
}

TEST_CASE("graded cohomology of K(Z^2,1) is that of the torus") {
  const auto X = classifying_space(additive_group(2), 3);
  const auto H = graded_cohomology(X, 4);
  CHECK(H.pieces.at({2, 2}).free_rank >= 1);
  CHECK(H.total(0) == FinAbGroup{1, {}});
  CHECK(H.total(1) == FinAbGroup{2, {}});
  CHECK(H.total(2) == FinAbGroup{1, {}});

  // a1 b2 on [g1|g2] is a cocycle and not a coboundary
  const auto cup = mul(BinomialPoly::variable(4, 0), BinomialPoly::variable(4, 3));
  CHECK(coboundary(X, 2, cup).is_zero());
  CHECK_FALSE(coboundary_solve(X, 2, cup, BasisMode::Binomial, 4).solved);
}

TEST_CASE("graded cohomology of Gamma(Z[2])") {
  FreeComplex C;
  C.ranks[2] = 1;
  const auto X = as_numerical(gamma(C, 4));
  CHECK(check_simplicial_identities(X).empty());
  const auto H = graded_cohomology(X, 4);
  CHECK(H.total(0) == FinAbGroup{1, {}});
  CHECK(H.total(1).is_zero());
  CHECK(H.total(2) == FinAbGroup{1, {}});
  CHECK(H.total(3).is_zero());
}

TEST_CASE("graded cohomology refuses non-additive faces") {
  const auto BH = classifying_space(heisenberg(), 3);
  CHECK_THROWS_AS(graded_cohomology(BH, 2), Error);
  try {
    graded_cohomology(BH, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonAdditiveFaces);
  }
  const auto x = BinomialPoly::variable(2, 0), y = BinomialPoly::variable(2, 1);
  CHECK(is_grading_preserving({x + y}, 2));
  CHECK_FALSE(is_grading_preserving({x, x + y}, 2));
  CHECK_FALSE(is_grading_preserving({x * Integer(2)}, 2));
  CHECK_FALSE(is_grading_preserving({-x}, 2));
}

TEST_CASE("coboundary_solve on xy") {
  const auto X = k_z_1(3);
  const auto xy = poly(2, {{{1, 1}, 1}});
  const auto binom_sol = coboundary_solve(X, 2, xy, BasisMode::Binomial, 3);
  REQUIRE(binom_sol.solved);
  CHECK(coboundary(X, 1, binom_sol.witness) == xy);
  // -(x choose 2) up to an additive map
  const auto diff = to_rational_poly(binom_sol.witness + BinomialPoly::binomial(1, 0, 2));
  CHECK(is_multiple_of_x(diff));

  const auto poly_sol = coboundary_solve(X, 2, xy, BasisMode::IntegerPolynomial, 3);
  CHECK_FALSE(poly_sol.solved);
  REQUIRE(poly_sol.certificate);

  const auto zero = coboundary_solve(X, 2, BinomialPoly(2), BasisMode::Binomial, 3);
  CHECK(zero.solved);
  CHECK(zero.witness.is_zero());

  CHECK_THROWS_AS(coboundary_solve(X, 2, poly(2, {{{2, 0}, 1}}), BasisMode::Binomial, 3), Error);
  try {
    coboundary_solve(X, 2, poly(2, {{{2, 0}, 1}}), BasisMode::Binomial, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotACocycle);
  }
}

TEST_CASE("property: no-solution certificates separate the target from the image") {
  const auto X = k_z_1(3);
  for (unsigned p : {2u, 3u, 5u}) {
    const auto target = frobenius_cocycle(p);
    const auto sol = coboundary_solve(X, 2, target, BasisMode::IntegerPolynomial, p + 1);
    REQUIRE_FALSE(sol.solved);
    REQUIRE(sol.certificate);
    const auto& cert = *sol.certificate;
    // w . d(x^alpha) must be integral for every ansatz element, w . t must not
    for (const auto& alpha : sol.basis) {
      RationalPoly::TermMap t;
      t.emplace(alpha, 1);
      const auto image = coboundary(X, 1, from_rational_poly(RationalPoly(1, std::move(t))));
      Rational acc = 0;
      for (std::size_t r = 0; r < cert.rows.size(); ++r) acc += cert.functional[r] * Rational(image.coefficient(cert.rows[r]));
      CHECK(acc.get_den() == 1);
    }
    Rational value = 0;
    for (std::size_t r = 0; r < cert.rows.size(); ++r) value += cert.functional[r] * Rational(target.coefficient(cert.rows[r]));
    CHECK(value == cert.value);
    CHECK(value.get_den() != 1);
  }
}

TEST_CASE("p-cocycles are coboundaries of (x^p - x)/p") {
  const auto X = k_z_1(3);
  for (unsigned p : {2u, 3u, 5u}) {
    const auto target = frobenius_cocycle(p);
    CHECK(coboundary(X, 2, target).is_zero());
    const auto sol = coboundary_solve(X, 2, target, BasisMode::Binomial, p + 1);
    REQUIRE(sol.solved);
    CHECK(coboundary(X, 1, sol.witness) == target);
    const auto w = to_rational_poly(sol.witness);
    CHECK((is_multiple_of_x(w + frobenius_quotient(p)) || is_multiple_of_x(w - frobenius_quotient(p))));
  }
}

TEST_CASE("PTCP with trivial twisting is the product") {
  const auto G = k_z_1(4), B = k_z_1(4);
  const auto tau = trivial_twisting(G, B);
  CHECK(check_twisting(G, B, tau).empty());
  const auto E = build_ptcp(G, B, tau);
  CHECK(check_simplicial_identities(E).empty());
  CHECK(E.level_ranks[2] == 4);
  const auto H = graded_cohomology(E, 4);
  CHECK(H.total(0) == FinAbGroup{1, {}});
  CHECK(H.total(1) == FinAbGroup{2, {}});
  CHECK(H.total(2) == FinAbGroup{1, {}});
}

TEST_CASE("Heisenberg PTCP over K(Z^2,1)") {
  const unsigned N = 4;
  const auto G = k_z_1(N);
  const auto B = classifying_space(additive_group(2), N);
  const auto tau = heisenberg_twisting(N);
  CHECK(check_twisting(G, B, tau).empty());
  const auto E = build_ptcp(G, B, tau);
  CHECK(E.level_ranks[1] == 3);
  CHECK(check_simplicial_identities(E).empty());

  // faces i > 0 and degeneracies agree with the untwisted product
  const auto P = build_ptcp(G, B, trivial_twisting(G, B));
  for (const auto& [key, m] : E.faces) {
    if (key.second > 0) CHECK(m == P.faces.at(key));
  }
  CHECK(E.degeneracies == P.degeneracies);

  // pi_1 from 2-simplices (f1, f2; a1, b1, a2, b2): d_2 = u, d_0 = v, product = d_1
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_point(3, 30), v = random_point(3, 30);  // (z, x, y)
    const std::vector<Integer> sigma{u[0], v[0] - u[1] * v[2], u[1], u[2], v[1], v[2]};
    const std::span<const Integer> s(sigma);
    auto face = [&](unsigned i) {
      std::vector<Integer> out;
      for (const auto& p : E.face(2, i)) out.push_back(evaluate(p, s));
      return out;
    };
    REQUIRE(face(2) == u);
    REQUIRE(face(0) == v);
    const auto w = face(1);
    CHECK(w[1] == u[1] + v[1]);
    CHECK(w[2] == u[2] + v[2]);
    CHECK(w[0] == u[0] + v[0] - u[1] * v[2]);
    // z -> -z turns this into the Heisenberg law
    const auto H = heisenberg();
    const auto hw = H.multiply({u[1], u[2], -u[0]}, {v[1], v[2], -v[0]});
    CHECK(hw == std::vector<Integer>{w[1], w[2], -w[0]});
  }

  auto corrupted = tau;
  corrupted.tau[3][0] += BinomialPoly::variable(6, 2);
  const auto v = check_twisting(G, B, corrupted);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().q == 3);
  CHECK_THROWS_AS(build_ptcp(G, B, corrupted), Error);
}

TEST_CASE("path fibrations are contractible") {
  for (unsigned k : {1u, 2u}) {
    const unsigned N = 5;
    const auto P = path_fibration(k, N);
    CHECK(check_twisting(P.fiber, P.base, P.tau).empty());
    CHECK(check_simplicial_identities(P.total).empty());
    FreeComplex cone;
    cone.ranks = {{static_cast<int>(k) - 1, 1}, {static_cast<int>(k), 1}};
    cone.diff[static_cast<int>(k)] = IntMatrix{{1}};
    const auto whole = as_numerical(gamma(cone, N));
    CHECK(P.total.faces == whole.faces);
    CHECK(P.total.degeneracies == whole.degeneracies);
    const auto NC = normalize(as_abelian(P.total));
    for (int n = 0; n < static_cast<int>(N); ++n) CHECK(homology(NC, n).is_zero());
  }
}

TEST_CASE("lens orbits") {
  const auto L5 = lens_orbits(5);
  CHECK(L5.homotopy_classes == std::vector<std::vector<unsigned>>{{1, 4}, {2, 3}});
  CHECK(L5.isomorphism_classes == std::vector<std::vector<unsigned>>{{1, 4}, {2, 3}});
  CHECK_FALSE(L5.homotopic_not_isomorphic);

  const auto L7 = lens_orbits(7);
  CHECK(L7.homotopy_classes.size() == 1);
  CHECK(L7.homotopy_classes[0].size() == 6);
  CHECK(L7.isomorphism_classes.size() == 3);
  REQUIRE(L7.homotopic_not_isomorphic);
  const auto [a, b] = *L7.homotopic_not_isomorphic;
  CHECK(a != b);
  CHECK((a + b) % 7 != 0);

  const auto L2 = lens_orbits(2);
  CHECK(L2.homotopy_classes == std::vector<std::vector<unsigned>>{{1}});
  CHECK(L2.isomorphism_classes == std::vector<std::vector<unsigned>>{{1}});

  // brute-force oracle for the homotopy relation
  for (unsigned n = 2; n <= 30; ++n) {
    const auto L = lens_orbits(n);
    for (const auto& cls : L.homotopy_classes) {
      for (unsigned a0 : cls) {
        for (unsigned b0 : cls) {
          bool related = false;
          for (unsigned beta = 1; beta < n; ++beta) {
            if (std::gcd(beta, n) != 1) continue;
            const unsigned t = (beta * beta * a0) % n;
            related |= t == b0 || (n - t) % n == b0;
          }
          CHECK(related);
        }
      }
    }
  }
}
