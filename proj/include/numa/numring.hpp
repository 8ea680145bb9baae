#pragma once

// Numerical rings: commutative rings with operations (r choose n) subject to
// the axioms
//
//   (i)   (r choose 0) = 1
//   (ii)  (1 choose n) = 0,                          n >= 2
//   (iii) (r choose 1) = r
//   (iv)  (r+s choose n) = sum_{i+j=n} (r choose i)(s choose j)
//   (v)   (r choose m)(r choose n) = h^m_n((r choose 1), ..., (r choose m+n))
//   (vi)  (rs choose n) = f_n((r choose 1..n), (s choose 1..n))
//   (vii) ((r choose m) choose n) = g^m_n((r choose 1), ..., (r choose mn))
//
// where h and g are linear and f is bilinear with integer coefficients.

#include <algorithm>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "numa/binom.hpp"

namespace numa::numring {

enum class StructureKind { H, F, G };

struct StructureTable {
  StructureKind kind;
  unsigned m = 0;
  unsigned n = 0;
  // H, G: linear[k] is the coefficient of (x choose k).
  std::vector<Integer> linear;
  // F: bilinear[i][j] is the coefficient of (x choose i)(y choose j).
  std::vector<std::vector<Integer>> bilinear;

  /// The table as a numerical polynomial: univariate for H and G, bivariate for F.
  BinomialPoly as_poly() const;
};

// Computed by Newton extraction and memoised; safe to call concurrently.
const StructureTable& structure_h(unsigned m, unsigned n);
const StructureTable& structure_f(unsigned n);
const StructureTable& structure_g(unsigned m, unsigned n);

// ---------------------------------------------------------------- rings

struct IntegerRing {
  using Element = Integer;
  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_integer(const Integer& c) const { return c; }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element binom(const Element& r, unsigned n) const { return numa::binom(r, n); }
  std::string describe(const Element& r) const { return r.get_str(); }
};

/// Z^S with pointwise operations, S = {0, ..., size-1}.
struct PointwiseRing {
  std::size_t size = 0;
  using Element = std::vector<Integer>;
  Element zero() const { return Element(size, 0); }
  Element one() const { return Element(size, 1); }
  Element from_integer(const Integer& c) const { return Element(size, c); }
  Element add(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element binom(const Element& r, unsigned n) const;
  std::string describe(const Element& r) const;
};

/// Num_k, the free numerical ring on k generators.
struct FreeNumericalRing {
  std::size_t nvars = 0;
  using Element = BinomialPoly;
  Element zero() const { return BinomialPoly(nvars); }
  Element one() const { return BinomialPoly::constant(nvars, 1); }
  Element from_integer(const Integer& c) const { return BinomialPoly::constant(nvars, c); }
  Element add(const Element& a, const Element& b) const { return numa::add(a, b); }
  Element mul(const Element& a, const Element& b) const { return numa::mul(a, b); }
  Element binom(const Element& r, unsigned n) const { return binomial_of(r, n); }
  std::string describe(const Element& r) const;
};

template <class R>
concept NumericalRing = requires(const R& ring, const typename R::Element& a, unsigned n) {
  { ring.zero() } -> std::convertible_to<typename R::Element>;
  { ring.one() } -> std::convertible_to<typename R::Element>;
  { ring.add(a, a) } -> std::convertible_to<typename R::Element>;
  { ring.mul(a, a) } -> std::convertible_to<typename R::Element>;
  { ring.binom(a, n) } -> std::convertible_to<typename R::Element>;
  { ring.from_integer(Integer()) } -> std::convertible_to<typename R::Element>;
  { ring.describe(a) } -> std::convertible_to<std::string>;
  { a == a } -> std::convertible_to<bool>;
};

using NumericalRingHandle = std::variant<IntegerRing, PointwiseRing, FreeNumericalRing>;

struct AxiomViolation {
  int axiom = 0;  // 1..7
  std::string witness;
};

struct AxiomReport {
  bool passed = true;
  unsigned bound = 4;
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::optional<AxiomViolation> violation;
};

/// Evaluates (i)-(vii) on all sample tuples with structure indices <= bound.
/// Stops at the first violation.
template <NumericalRing R>
AxiomReport check_axioms(const R& ring, std::span<const typename R::Element> samples,
                         unsigned bound = 4);

/// Samples drawn from [lo, hi]: integers, functions S -> [lo, hi] (capped),
/// or basis elements (x_j choose k) with k in [max(lo,0), hi].
AxiomReport check_axioms(const NumericalRingHandle& ring, long lo, long hi, unsigned bound = 4);

/// x -> (f(x) choose n) in Num_k.
BinomialPoly ring_binom(const FreeNumericalRing& ring, const BinomialPoly& f, unsigned n);

/// [(r choose 0), ..., (r choose N)].
template <NumericalRing R>
std::vector<typename R::Element> lambda_series(const R& ring, const typename R::Element& r,
                                               unsigned N) {
  std::vector<typename R::Element> out;
  out.reserve(N + 1);
  for (unsigned i = 0; i <= N; ++i) out.push_back(ring.binom(r, i));
  return out;
}

/// Coefficientwise phi(r+s) == phi(r) * phi(s) through t^N.
template <NumericalRing R>
bool lambda_additive(const R& ring, const typename R::Element& r, const typename R::Element& s,
                     unsigned N) {
  const auto lr = lambda_series(ring, r, N);
  const auto ls = lambda_series(ring, s, N);
  const auto lrs = lambda_series(ring, ring.add(r, s), N);
  for (unsigned n = 0; n <= N; ++n) {
    auto acc = ring.zero();
    for (unsigned i = 0; i <= n; ++i) acc = ring.add(acc, ring.mul(lr[i], ls[n - i]));
    if (!(acc == lrs[n])) return false;
  }
  return true;
}

/// Coproduct Num_a (x) Num_b = Num_{a+b} with its two inclusions.
struct FreeTensor {
  FreeNumericalRing ring;
  PolyMap left;   // x_j -> x_j
  PolyMap right;  // y_j -> x_{a+j}
};

FreeTensor free_tensor(std::size_t a_vars, std::size_t b_vars);

// ---------------------------------------------------------------- template body

template <NumericalRing R>
AxiomReport check_axioms(const R& ring, std::span<const typename R::Element> samples,
                         unsigned bound) {
  using Element = typename R::Element;
  AxiomReport report;
  report.bound = bound;
  report.samples = samples.size();

  auto fail = [&](int axiom, std::string witness) {
    report.passed = false;
    report.violation = AxiomViolation{axiom, std::move(witness)};
    return report;
  };
  auto linear = [&](const std::vector<Integer>& coeffs, const std::vector<Element>& binoms) {
    Element acc = ring.zero();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] != 0) acc = ring.add(acc, ring.mul(ring.from_integer(coeffs[k]), binoms[k]));
    }
    return acc;
  };

  const unsigned top = std::max(2 * bound, bound * bound);
  std::vector<std::vector<Element>> binoms;
  binoms.reserve(samples.size());
  for (const auto& r : samples) {
    std::vector<Element> row;
    row.reserve(top + 1);
    for (unsigned k = 0; k <= top; ++k) row.push_back(ring.binom(r, k));
    binoms.push_back(std::move(row));
  }
  auto name = [&](std::size_t i) { return ring.describe(samples[i]); };

  for (std::size_t a = 0; a < samples.size(); ++a) {
    ++report.checks;
    if (!(binoms[a][0] == ring.one())) return fail(1, "r=" + name(a));
  }
  for (unsigned n = 2; n <= bound; ++n) {
    ++report.checks;
    if (!(ring.binom(ring.one(), n) == ring.zero())) return fail(2, "n=" + std::to_string(n));
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    ++report.checks;
    if (!(binoms[a][1] == samples[a])) return fail(3, "r=" + name(a));
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = 0; b < samples.size(); ++b) {
      const Element sum = ring.add(samples[a], samples[b]);
      for (unsigned n = 0; n <= bound; ++n) {
        ++report.checks;
        Element rhs = ring.zero();
        for (unsigned i = 0; i <= n; ++i) rhs = ring.add(rhs, ring.mul(binoms[a][i], binoms[b][n - i]));
        if (!(ring.binom(sum, n) == rhs)) {
          return fail(4, "r=" + name(a) + ", s=" + name(b) + ", n=" + std::to_string(n));
        }
      }
    }
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (unsigned m = 0; m <= bound; ++m) {
      for (unsigned n = 0; n <= bound; ++n) {
        ++report.checks;
        const auto& h = structure_h(m, n);
        if (!(ring.mul(binoms[a][m], binoms[a][n]) == linear(h.linear, binoms[a]))) {
          return fail(5, "r=" + name(a) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n));
        }
      }
    }
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = 0; b < samples.size(); ++b) {
      const Element prod = ring.mul(samples[a], samples[b]);
      for (unsigned n = 0; n <= bound; ++n) {
        ++report.checks;
        const auto& f = structure_f(n);
        Element rhs = ring.zero();
        for (unsigned i = 0; i <= n; ++i) {
          for (unsigned j = 0; j <= n; ++j) {
            if (f.bilinear[i][j] == 0) continue;
            rhs = ring.add(rhs, ring.mul(ring.from_integer(f.bilinear[i][j]),
                                         ring.mul(binoms[a][i], binoms[b][j])));
          }
        }
        if (!(ring.binom(prod, n) == rhs)) {
          return fail(6, "r=" + name(a) + ", s=" + name(b) + ", n=" + std::to_string(n));
        }
      }
    }
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (unsigned m = 0; m <= bound; ++m) {
      for (unsigned n = 0; n <= bound; ++n) {
        ++report.checks;
        const auto& g = structure_g(m, n);
        if (!(ring.binom(binoms[a][m], n) == linear(g.linear, binoms[a]))) {
          return fail(7, "r=" + name(a) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n));
        }
      }
    }
  }
  return report;
}

}  // namespace numa::numring
