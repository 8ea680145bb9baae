#include "numa/golden.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "numa/coeff.hpp"
#include "numa/dold_kan.hpp"
#include "numa/homalg.hpp"
#include "numa/nilgroup.hpp"
#include "numa/numring.hpp"
#include "numa/simplicial.hpp"

namespace numa {

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail << what;
    }
  }
};

const FinAbGroup kZ{1, {}};

// ---------------------------------------------------------------- 1

void kz1_cohomology(Outcome& out, const GoldenOptions& opt) {
  const auto H = graded_cohomology(k_z_1(4), 6, true, opt.threads);
  for (unsigned n = 0; n <= 3; ++n) {
    for (unsigned d = 0; d <= 6; ++d) {
      const FinAbGroup expected = (n == 0 && d == 0) || (n == 1 && d == 1) ? kZ : FinAbGroup{};
      const auto& got = H.pieces.at({n, d});
      out.require(got == expected, "H^" + std::to_string(n) + " piece d=" + std::to_string(d) + " is " +
                                       got.to_string() + ", expected " + expected.to_string());
    }
  }
  if (out.ok) out.detail << "H^0 = Z (d=0), H^1 = Z (d=1), H^2 = H^3 = 0 for d <= 6";
}

// ---------------------------------------------------------------- 2

bool is_additive(const RationalPoly& r) {
  for (const auto& [idx, c] : r.terms()) {
    if (idx != MultiIndex{1}) return false;
  }
  return true;
}

void cocycle_dichotomy(Outcome& out, const GoldenOptions&) {
  const auto X = k_z_1(3);
  for (unsigned p : {2u, 3u, 5u}) {
    const auto x = RationalPoly::variable(2, 0), y = RationalPoly::variable(2, 1);
    const auto target = from_rational_poly(((x + y).pow(p) - x.pow(p) - y.pow(p)) * Rational(1, p));
    const auto u = RationalPoly::variable(1, 0);
    const auto quotient = (u.pow(p) - u) * Rational(1, p);

    const auto sol = coboundary_solve(X, 2, target, BasisMode::Binomial, p + 1);
    const std::string tag = "p=" + std::to_string(p) + ": ";
    out.require(sol.solved, tag + "no binomial witness");
    if (!sol.solved) return;
    out.require(coboundary(X, 1, sol.witness) == target, tag + "witness has the wrong coboundary");
    const auto w = to_rational_poly(sol.witness);
    out.require(is_additive(w - quotient) || is_additive(w + quotient),
                tag + "witness is not +-(x^p - x)/p up to an additive map");

    const auto poly = coboundary_solve(X, 2, target, BasisMode::IntegerPolynomial, p + 1);
    out.require(!poly.solved && poly.certificate, tag + "integer-polynomial ansatz found a solution");
    if (!poly.certificate) return;
    const auto& cert = *poly.certificate;
    for (const auto& alpha : poly.basis) {
      RationalPoly::TermMap t;
      t.emplace(alpha, 1);
      const auto image = coboundary(X, 1, from_rational_poly(RationalPoly(1, std::move(t))));
      Rational acc = 0;
      for (std::size_t r = 0; r < cert.rows.size(); ++r) acc += cert.functional[r] * Rational(image.coefficient(cert.rows[r]));
      out.require(acc.get_den() == 1, tag + "certificate functional is not integral on the image");
    }
    Rational value = 0;
    for (std::size_t r = 0; r < cert.rows.size(); ++r) value += cert.functional[r] * Rational(target.coefficient(cert.rows[r]));
    out.require(value == cert.value && value.get_den() != 1, tag + "certificate does not separate the target");
  }
  if (out.ok) out.detail << "p = 2, 3, 5: binomial witness +-(x^p - x)/p; polynomial mode certified unsolvable";
}

// ---------------------------------------------------------------- 3

void structure_identities(Outcome& out, const GoldenOptions&) {
  using namespace numring;
  std::size_t points = 0;
  for (unsigned m = 0; m <= 6; ++m) {
    for (unsigned n = 0; n <= 6; ++n) {
      const auto& h = structure_h(m, n).linear;
      const auto& g = structure_g(m, n).linear;
      for (long x = -20; x <= 20; ++x) {
        const Integer X = x;
        Integer lhs = binom(X, m) * binom(X, n), rhs = 0;
        for (std::size_t k = 0; k < h.size(); ++k) rhs += h[k] * binom(X, static_cast<unsigned>(k));
        out.require(lhs == rhs, "h(" + std::to_string(m) + "," + std::to_string(n) + ") fails at x=" + std::to_string(x));
        lhs = binom(binom(X, m), n);
        rhs = 0;
        for (std::size_t k = 0; k < g.size(); ++k) rhs += g[k] * binom(X, static_cast<unsigned>(k));
        out.require(lhs == rhs, "g(" + std::to_string(m) + "," + std::to_string(n) + ") fails at x=" + std::to_string(x));
        points += 2;
      }
    }
  }
  for (unsigned n = 0; n <= 6; ++n) {
    const auto& f = structure_f(n).bilinear;
    for (long x = -20; x <= 20; ++x) {
      for (long y = -20; y <= 20; ++y) {
        const Integer lhs = binom(Integer(x * y), n);
        Integer rhs = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
          for (std::size_t j = 0; j < f[i].size(); ++j) {
            if (f[i][j] != 0) rhs += f[i][j] * binom(Integer(x), static_cast<unsigned>(i)) * binom(Integer(y), static_cast<unsigned>(j));
          }
        }
        out.require(lhs == rhs, "f(" + std::to_string(n) + ") fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
        ++points;
      }
    }
  }
  if (out.ok) out.detail << points << " point identities for m, n <= 6 on |x|, |y| <= 20";
}

// ---------------------------------------------------------------- 4

void axiom_suite(Outcome& out, const GoldenOptions&) {
  using namespace numring;
  const auto zi = check_axioms(NumericalRingHandle{IntegerRing{}}, -10, 10, 3);
  const auto pw = check_axioms(NumericalRingHandle{PointwiseRing{3}}, -2, 2, 3);
  const auto fr = check_axioms(NumericalRingHandle{FreeNumericalRing{1}}, 0, 4, 3);
  auto describe = [](const char* name, const AxiomReport& r) {
    std::string s = std::string(name) + (r.passed ? " passed" : " failed");
    if (r.violation) s += " axiom " + std::to_string(r.violation->axiom) + " at " + r.violation->witness;
    return s;
  };
  out.require(zi.passed, describe("Integers", zi));
  out.require(pw.passed, describe("Pointwise(3)", pw));
  out.require(fr.passed, describe("Free(1)", fr));
  if (out.ok) {
    out.detail << "Integers " << zi.checks << " checks, Pointwise(3) " << pw.checks << ", Free(1) " << fr.checks
               << " (indices <= 3)";
  }
}

// ---------------------------------------------------------------- 5

struct KnownComplex {
  FreeComplex complex;
  std::map<int, FinAbGroup> homology;
};

// Split pieces Z --d--> Z plus free summands, scrambled by unimodular base
// changes; the homology is read off the construction.
KnownComplex random_known_complex(std::mt19937_64& rng, int max_degree, std::size_t max_rank) {
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  std::map<int, std::size_t> ranks, free_part;
  std::vector<std::pair<int, long>> pieces;  // (top degree, d)
  for (int n = 0; n <= max_degree; ++n) {
    ranks[n];
    const auto budget = static_cast<std::size_t>(uniform(0, static_cast<long>(max_rank)));
    for (std::size_t k = 0; k < budget && ranks[n] < max_rank; ++k) {
      if (n > 0 && ranks[n - 1] < max_rank && uniform(0, 1)) {
        pieces.emplace_back(n, uniform(1, 4) * (uniform(0, 1) ? 1 : -1));
        ++ranks[n];
        ++ranks[n - 1];
      } else {
        ++free_part[n];
        ++ranks[n];
      }
    }
  }
  KnownComplex out;
  FreeComplex& C = out.complex;
  C.ranks = ranks;
  for (int n = 1; n <= max_degree; ++n) C.diff[n] = IntMatrix(ranks[n - 1], ranks[n]);
  std::map<int, std::size_t> used;
  std::map<int, std::vector<Integer>> cyclic;
  for (const auto& [top, d] : pieces) {
    C.diff[top](used[top - 1]++, used[top]++) = d;
    if (d != 1 && d != -1) cyclic[top - 1].push_back(d < 0 ? -d : d);
  }
  for (int n = 0; n <= max_degree; ++n) out.homology[n] = make_group(free_part[n], cyclic[n]);
  for (int n = 0; n <= max_degree; ++n) {
    const std::size_t r = ranks[n];
    IntMatrix P = IntMatrix::identity(r), Pi = IntMatrix::identity(r);
    for (int s = 0; r >= 2 && s < 12; ++s) {
      const auto i = static_cast<std::size_t>(uniform(0, static_cast<long>(r) - 1));
      auto j = static_cast<std::size_t>(uniform(0, static_cast<long>(r) - 2));
      if (j >= i) ++j;
      const long c = uniform(-2, 2);
      IntMatrix E = IntMatrix::identity(r), Ei = IntMatrix::identity(r);
      E(i, j) = c;
      Ei(i, j) = -c;
      P = E * P;
      Pi = Pi * Ei;
    }
    if (n >= 1) C.diff[n] = C.diff[n] * Pi;
    if (n + 1 <= max_degree) C.diff[n + 1] = P * C.diff[n + 1];
  }
  return out;
}

void dold_kan_coherence(Outcome& out, const GoldenOptions&) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100 && out.ok; ++trial) {
    const auto K = random_known_complex(rng, 3, 3);
    const auto A = gamma(K.complex, 5);
    std::map<int, std::size_t> r;
    for (const auto& [n, rk] : K.complex.ranks) {
      if (rk) r[n] = rk;
    }
    for (unsigned n = 0; n <= 5; ++n) {
      out.require(Integer(A.level_ranks[n]) == T_rank(r, n),
                  "trial " + std::to_string(trial) + ": level " + std::to_string(n) + " rank differs from T");
    }
    const auto N = normalize(A);
    for (int n = 0; n <= 4; ++n) {
      const auto expected = n <= 3 ? K.homology.at(n) : FinAbGroup{};
      const auto got = homology(N, n);
      out.require(got == expected, "trial " + std::to_string(trial) + ": H_" + std::to_string(n) + "(N Gamma C) = " +
                                       got.to_string() + ", expected " + expected.to_string());
    }
  }
  if (out.ok) out.detail << "100 complexes: Gamma level ranks = T, N(Gamma C) homology = H(C) in degrees <= 4";
}

// ---------------------------------------------------------------- 6

void non_uniqueness(Outcome& out, const GoldenOptions&) {
  FreeComplex C;
  C.ranks = {{0, 1}, {1, 1}};
  C.diff[1] = IntMatrix{{2}};
  const ChainMap f{{0, IntMatrix{{3}}}, {1, IntMatrix{{3}}}};
  out.require(is_chain_map(C, C, f), "x3 is not a chain map");
  const auto h = induced_on_homology(C, C, f, 0);
  out.require(h.source == FinAbGroup{0, {2}}, "H_0 is " + h.source.to_string() + ", expected Z/2");
  out.require(h.isomorphism, "x3 does not induce an isomorphism on H_0");
  const auto h1 = induced_on_homology(C, C, f, 1);
  out.require(h1.source.is_zero(), "H_1 is " + h1.source.to_string());
  const Integer det = f.at(0).determinant() * f.at(1).determinant();
  out.require(det != 1 && det != -1, "x3 is invertible over Z");
  if (out.ok) out.detail << "H_0 = Z/2, H_0(x3) iso, det = " << det.get_str() << " so no inverse over Z";
}

// ---------------------------------------------------------------- 7

void lens(Outcome& out, const GoldenOptions&) {
  const auto l7 = lens_orbits(7);
  out.require(l7.homotopy_classes.size() == 1, "n=7: " + std::to_string(l7.homotopy_classes.size()) + " homotopy classes");
  out.require(l7.isomorphism_classes.size() == 3, "n=7: " + std::to_string(l7.isomorphism_classes.size()) + " isomorphism classes");
  out.require(l7.homotopic_not_isomorphic.has_value(), "n=7: no homotopic, non-isomorphic pair");
  const auto l5 = lens_orbits(5);
  out.require(l5.homotopy_classes.size() == 2 && l5.isomorphism_classes.size() == 2, "n=5: expected two classes each");
  if (out.ok) {
    out.detail << "n=7: pair (" << l7.homotopic_not_isomorphic->first << ", " << l7.homotopic_not_isomorphic->second
               << ") homotopic, not isomorphic; n=5: 2 and 2 classes";
  }
}

// ---------------------------------------------------------------- 8

void ptcp(Outcome& out, const GoldenOptions&) {
  const unsigned N = 4;
  const auto G = k_z_1(N);
  const auto B = classifying_space(additive_group(2), N);
  const auto tau = heisenberg_twisting(N);
  const auto tv = check_twisting(G, B, tau);
  out.require(tv.empty(), tv.empty() ? "" : "twisting identity " + tv.front().identity + " fails");
  const auto E = build_ptcp(G, B, tau);
  const auto sv = check_simplicial_identities(E);
  out.require(sv.empty(), sv.empty() ? "" : "simplicial identity " + sv.front().identity + " fails");
  if (out.ok) out.detail << "Heisenberg PTCP over K(Z^2,1), n_max = 4: twisting and simplicial identities hold";
}

// ---------------------------------------------------------------- 9

void passi(Outcome& out, const GoldenOptions&) {
  const auto H = heisenberg();
  const std::vector<std::pair<std::string, std::pair<BinomialPoly, unsigned>>> cases{
      {"1", {BinomialPoly::constant(3, 1), 1}},
      {"x", {BinomialPoly::variable(3, 0), 2}},
      {"y", {BinomialPoly::variable(3, 1), 2}},
      {"z", {BinomialPoly::variable(3, 2), 3}}};
  for (const auto& [name, fk] : cases) {
    const auto& [f, k] = fk;
    const auto cert = passi_degree(f, H);
    out.require(cert.degree == k, name + ": degree " + std::to_string(cert.degree) + ", expected " + std::to_string(k));
    out.require(!cert.chain_ranks.empty() && cert.chain_ranks.back() == 0, name + ": chain does not end in 0");
    for (std::size_t i = 1; i < cert.module_chain_ranks.size(); ++i) {
      out.require(cert.module_chain_ranks[i] < cert.module_chain_ranks[i - 1], name + ": module chain not decreasing");
    }
    const auto cc = passi_cross_check(f, H, k, 500, 3, 29);
    out.require(cc.failures_at_degree == 0, name + ": " + std::to_string(cc.failures_at_degree) + " sampled failures on I^k");
    out.require(cc.witness_below, name + ": no sampled witness on I^(k-1)");
  }
  if (out.ok) out.detail << "degrees 1, 2, 2, 3 certified; 500 samples each, radius 3, zero failures";
}

// ---------------------------------------------------------------- 10

void powers(Outcome& out, const GoldenOptions&) {
  const auto g = from_coordinates(3, {1, 1, 0});
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
  for (int t = 0; t < 50; ++t) {
    Rational r(Integer(num(rng)), Integer(den(rng)));
    Rational s(Integer(num(rng)), Integer(den(rng)));
    r.canonicalize();
    s.canonicalize();
    const auto gr = power(g, r);
    const auto c = to_coordinates(gr);
    out.require(c[0] == r && c[1] == r && c[2] == r * (r - 1) / 2, "g^r != (r, r, C(r,2)) at r = " + r.get_str());
    out.require(power(gr, s) == power(g, r * s), "(g^r)^s != g^(rs) at r = " + r.get_str() + ", s = " + s.get_str());
  }
  if (out.ok) out.detail << "50 rationals: g^r = (r, r, C(r,2)) and (g^r)^s = g^(rs) exactly";
}

// ---------------------------------------------------------------- 11

void p_integrality(Outcome& out, const GoldenOptions&) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> nv(1, 3), deg(0, 4), count(1, 6), coef(-1000, 1000);
  std::size_t evaluations = 0;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
    for (int t = 0; t < 500; ++t) {
      const std::size_t k = static_cast<std::size_t>(nv(rng));
      BinomialPoly b(k);
      for (int c = count(rng); c > 0; --c) {
        MultiIndex idx(k);
        for (auto& e : idx) e = static_cast<unsigned>(deg(rng));
        b += BinomialPoly::monomial(idx, coef(rng));
      }
      const auto cert = certify_p_integral(b, p, 100, rng());
      evaluations += cert.samples.size();
      out.require(cert.all_integral(), "p=" + std::to_string(p) + ": a value is not p-integral");
    }
  }
  if (out.ok) out.detail << evaluations << " evaluations at p-integral points, p in {2,3,5,7}: all p-integral";
}

// ---------------------------------------------------------------- 12

void mahler(Outcome& out, const GoldenOptions&) {
  const auto prof = mahler_profile(
      [](const Integer& x) {
        Integer r;
        mpz_ui_pow_ui(r.get_mpz_t(), 3, x.get_ui());
        return r;
      },
      2, 32);
  for (const auto& e : prof.entries) {
    Integer expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), 2, e.k);
    out.require(e.c == expected, "c_" + std::to_string(e.k) + " = " + e.c.get_str());
  }
  out.require(prof.entries.size() == 33, "window is not 0..32");
  if (out.ok) out.detail << "3^x at p=2: c_k = 2^k for k <= 32";
}

struct Criterion {
  const char* name;
  double budget;
  void (*run)(Outcome&, const GoldenOptions&);
};

const Criterion kCriteria[kCriterionCount] = {
    {"K(Z,1) numerical cohomology", 60, kz1_cohomology},
    {"p-cocycle dichotomy", 30, cocycle_dichotomy},
    {"structure polynomials", 10, structure_identities},
    {"numerical-ring axiom suite", 30, axiom_suite},
    {"Dold-Kan coherence", 60, dold_kan_coherence},
    {"non-uniqueness homology example", 10, non_uniqueness},
    {"lens-orbit arithmetic", 10, lens},
    {"PTCP validity", 60, ptcp},
    {"Passi degrees", 60, passi},
    {"unipotent powers", 30, powers},
    {"p-integrality", 60, p_integrality},
    {"Mahler profile", 10, mahler},
};

}  // namespace

CriterionResult run_criterion(int id, const GoldenOptions& options) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::InvalidArgument, "no criterion " + std::to_string(id));
  const Criterion& c = kCriteria[id - 1];
  CriterionResult res;
  res.id = id;
  res.name = c.name;
  res.budget_seconds = c.budget;
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(out, options);
  } catch (const Error& e) {
    out.ok = false;
    out.detail.str("");
    out.detail << to_string(e.code()) << ": " << e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.within_budget = res.seconds <= res.budget_seconds;
  res.passed = out.ok && res.within_budget;
  res.detail = out.detail.str();
  return res;
}

std::vector<CriterionResult> golden_suite(const GoldenOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
  return out;
}

}  // namespace numa
