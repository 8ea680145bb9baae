#pragma once

// Numerical polynomials Z^k -> Z in the binomial basis
//
//   prod_j (x_j choose n_j),   n_j >= 0,
//
// which is a Z-basis of the ring of integer-valued polynomial maps. All
// coefficients are arbitrary precision. Values are immutable once built.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "numa/error.hpp"

namespace numa {

using MultiIndex = std::vector<unsigned>;

unsigned total_degree(const MultiIndex& idx);

// Graded lexicographic: total degree first, then lexicographic on entries.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// (p choose n) for any integer p, via p(p-1)...(p-n+1)/n!.
Integer binom(const Integer& p, unsigned n);
Rational binom(const Rational& p, unsigned n);

class BinomialPoly {
 public:
  using TermMap = std::map<MultiIndex, Integer, GradedLexLess>;

  BinomialPoly() = default;
  explicit BinomialPoly(std::size_t nvars) : nvars_(nvars) {}
  /// Zero coefficients are dropped; every key must have length `nvars`.
  BinomialPoly(std::size_t nvars, TermMap terms);

  static BinomialPoly constant(std::size_t nvars, const Integer& c);
  /// The coordinate function x_j = (x_j choose 1).
  static BinomialPoly variable(std::size_t nvars, std::size_t j);
  /// (x_j choose k).
  static BinomialPoly binomial(std::size_t nvars, std::size_t j, unsigned k);
  static BinomialPoly monomial(MultiIndex idx, const Integer& c = 1);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Largest total degree of a term; 0 for the zero polynomial.
  unsigned degree() const;
  Integer coefficient(const MultiIndex& idx) const;
  /// Nonzero constant term or zero.
  Integer constant_term() const;

  bool operator==(const BinomialPoly& other) const = default;

  BinomialPoly operator-() const;
  BinomialPoly& operator+=(const BinomialPoly& other);
  BinomialPoly& operator-=(const BinomialPoly& other);
  BinomialPoly& operator*=(const Integer& scalar);
  friend BinomialPoly operator+(BinomialPoly a, const BinomialPoly& b) { return a += b; }
  friend BinomialPoly operator-(BinomialPoly a, const BinomialPoly& b) { return a -= b; }
  friend BinomialPoly operator*(BinomialPoly a, const Integer& s) { return a *= s; }
  friend BinomialPoly operator*(const Integer& s, BinomialPoly a) { return a *= s; }
  friend BinomialPoly operator*(const BinomialPoly& a, const BinomialPoly& b);

  /// Exact coefficientwise division; throws NotNumerical if some coefficient
  /// is not divisible. Correct because the binomial basis is a Z-basis.
  BinomialPoly divided_exactly(const Integer& divisor) const;

  /// Reinterpret in `nvars` variables, moving variable j to `placement[j]`.
  BinomialPoly embedded(std::size_t nvars, std::span<const std::size_t> placement) const;

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Polynomial with rational coefficients in the monomial basis x^e.
class RationalPoly {
 public:
  using TermMap = std::map<MultiIndex, Rational, GradedLexLess>;

  RationalPoly() = default;
  explicit RationalPoly(std::size_t nvars) : nvars_(nvars) {}
  RationalPoly(std::size_t nvars, TermMap terms);

  static RationalPoly constant(std::size_t nvars, const Rational& c);
  static RationalPoly variable(std::size_t nvars, std::size_t j);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  bool operator==(const RationalPoly& other) const = default;

  RationalPoly operator-() const;
  RationalPoly& operator+=(const RationalPoly& other);
  RationalPoly& operator-=(const RationalPoly& other);
  RationalPoly& operator*=(const Rational& scalar);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  RationalPoly pow(unsigned e) const;

  Rational evaluate(std::span<const Rational> point) const;

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Binomial-basis expansion; throws NotNumerical when `p` does not map
/// Z^k into Z.
BinomialPoly from_rational_poly(const RationalPoly& p);
RationalPoly to_rational_poly(const BinomialPoly& b);

Integer evaluate(const BinomialPoly& b, std::span<const Integer> point);
Rational evaluate(const BinomialPoly& b, std::span<const Rational> point);

BinomialPoly add(const BinomialPoly& a, const BinomialPoly& b);
BinomialPoly mul(const BinomialPoly& a, const BinomialPoly& b);

/// (g choose n) as a numerical polynomial.
BinomialPoly binomial_of(const BinomialPoly& g, unsigned n);

/// f(g_1, ..., g_m); every g_i must share one arity.
BinomialPoly compose(const BinomialPoly& f, std::span<const BinomialPoly> gs);

/// Polynomial map Z^k -> Z^m as m component polynomials in k variables.
using PolyMap = std::vector<BinomialPoly>;

/// outer o inner.
PolyMap compose(const PolyMap& outer, const PolyMap& inner, std::size_t inner_nvars);

/// Delta_j f(x) = f(x + e_j) - f(x).
BinomialPoly finite_difference(const BinomialPoly& b, std::size_t var);

using IntegerFunction = std::function<Integer(std::span<const Integer>)>;

/// c_a = (Delta^a f)(0) for all a <= max_index componentwise.
std::map<MultiIndex, Integer, GradedLexLess> newton_coefficients(const IntegerFunction& f,
                                                                 const MultiIndex& max_index);

/// Coefficients c_k of (x choose m)(x choose n) = sum_k c_k (x choose k),
/// indexed 0..m+n. Closed form (m+n-k)!/(k!(m-k)!(n-k)!) at index m+n-k.
const std::vector<Integer>& binomial_product_table(unsigned m, unsigned n);

}  // namespace numa
