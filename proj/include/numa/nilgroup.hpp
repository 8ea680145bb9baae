#pragma once

// Torsion-free nilpotent groups in Malcev coordinates. The model case is the
// group of unipotent upper triangular integer matrices, with coordinates the
// strictly upper entries ordered by distance from the diagonal, then by row.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numa/binom.hpp"
#include "numa/coeff.hpp"
#include "numa/homalg.hpp"
#include "numa/simplicial.hpp"

namespace numa {

using GroupElement = std::vector<Integer>;

struct MalcevGroup {
  NumericalGroup law;
  std::vector<GroupElement> generators;

  std::size_t dim() const { return law.dim; }
};

MalcevGroup unipotent_group(unsigned n);
/// unipotent_group(3): coordinates (a12, a23, a13), product z + z' + x y'.
MalcevGroup heisenberg();
/// Z^d with the unit vectors as generators.
MalcevGroup free_abelian(std::size_t d);

struct GroupAxiomReport {
  std::optional<std::string> law_failure;  // first failing group law
  /// Every coordinate vector with entries in [-coordinate_radius, coordinate_radius]
  /// is a word of length <= word_radius in the generators and their inverses.
  bool generators_checked = false;
  bool generators_ok = false;
  unsigned word_radius = 0;
  unsigned coordinate_radius = 0;

  bool ok() const { return !law_failure && (!generators_checked || generators_ok); }
};

/// The laws are BinomialPoly identities, so integrality is built in.
/// word_radius = 0 skips the generation check.
GroupAxiomReport group_axioms(const MalcevGroup& G, unsigned word_radius = 0, unsigned coordinate_radius = 1);

/// All products of at most `radius` generators or inverses.
std::vector<GroupElement> word_ball(const MalcevGroup& G, unsigned radius);

// ---------------------------------------------------------------- matrices

/// Dense square matrix over Q.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), a_(n * n) {}
  static RationalMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool operator==(const RationalMatrix&) const = default;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator*(const Rational& s) const;

  bool is_unipotent() const;
  bool is_strictly_upper() const;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

/// Coordinates of the strictly upper entries in Malcev order.
std::vector<std::pair<unsigned, unsigned>> malcev_positions(unsigned n);
RationalMatrix from_coordinates(unsigned n, const std::vector<Rational>& coords);
std::vector<Rational> to_coordinates(const RationalMatrix& g);

/// log(1 + N) = sum_{k>=1} (-1)^{k+1} N^k / k. Requires a unipotent matrix.
RationalMatrix matrix_log(const RationalMatrix& g);
/// exp(N) = sum N^k / k!. Requires a strictly upper triangular matrix.
RationalMatrix matrix_exp(const RationalMatrix& N);
/// exp(r log g).
RationalMatrix power(const RationalMatrix& g, const Rational& r);

/// Entry matrix of g^r for r in Z_p, via sum_k (r choose k) (g - 1)^k on an
/// integral unipotent g. Entries carry the precision left after the binomials.
std::vector<std::vector<PadicApprox>> power_padic(const RationalMatrix& g, const PadicApprox& r);

// ---------------------------------------------------------------- functions on G

/// f(g h) = sum_i f_i(g) g_i(h). Each f_i is a basis monomial (x choose alpha)
/// on G, listed in graded lex order; g_i collects the matching coefficients.
std::vector<std::pair<BinomialPoly, BinomialPoly>> comultiply(const BinomialPoly& f, const MalcevGroup& G);

/// (lambda_s f)(h) = f(s h).
BinomialPoly left_translate(const BinomialPoly& f, const MalcevGroup& G, const GroupElement& s);

struct PassiCertificate {
  /// Z-basis of the module spanned by the left translates of f.
  std::vector<BinomialPoly> module_basis;
  /// Matrix of lambda_s on module_basis (columns are images), per generator.
  std::vector<IntMatrix> actions;
  /// Coordinates of f in module_basis.
  std::vector<Integer> f_coordinates;
  /// ranks of I^j . f for j = 0, 1, ..., ending in 0.
  std::vector<std::size_t> chain_ranks;
  /// ranks of I^j . M, strictly decreasing to 0.
  std::vector<std::size_t> module_chain_ranks;
  unsigned degree = 0;
};

/// Least k such that the additive extension of f to Z[G] vanishes on I^k.
/// Throws NonNilpotentAction if the augmentation chain does not reach zero.
PassiCertificate passi_degree(const BinomialPoly& f, const MalcevGroup& G);

/// f applied to (u_1 - 1)...(u_k - 1) h, expanded over Z[G].
Integer evaluate_on_product(const BinomialPoly& f, const MalcevGroup& G, const std::vector<GroupElement>& us,
                            const GroupElement& h);

struct PassiCrossCheck {
  unsigned samples = 0;
  unsigned failures_at_degree = 0;    // nonzero values on sampled elements of I^k
  bool witness_below = false;         // some sampled element of I^{k-1} has nonzero value
};

/// Evaluates f on `samples` random products (s_1^{+-1} - 1)...(s_k^{+-1} - 1) h
/// with h in the word ball of the given radius, for k = degree and degree - 1.
PassiCrossCheck passi_cross_check(const BinomialPoly& f, const MalcevGroup& G, unsigned degree, unsigned samples,
                                  unsigned radius = 3, std::uint64_t seed = 1);

}  // namespace numa
