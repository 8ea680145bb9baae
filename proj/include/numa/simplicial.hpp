#pragma once

// Simplicial objects in numerical maps. Level n is Z^{rank(n)}; every face
// and degeneracy is a PolyMap. Faces of bar constructions act on
// [g_1|...|g_n] by dropping g_1 (d_0), multiplying g_i g_{i+1} (d_i), or
// dropping g_n (d_n); s_i inserts the unit at position i.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numa/binom.hpp"
#include "numa/dold_kan.hpp"
#include "numa/homalg.hpp"

namespace numa {

/// A group law on Z^dim given by numerical maps. mult takes (x, y) with x in
/// variables 0..dim-1 and y in dim..2dim-1.
struct NumericalGroup {
  std::size_t dim = 0;
  PolyMap mult;
  PolyMap inv;
  std::vector<Integer> unit;

  std::vector<Integer> multiply(const std::vector<Integer>& x, const std::vector<Integer>& y) const;
  std::vector<Integer> inverse(const std::vector<Integer>& x) const;
};

/// Z^dim under addition.
NumericalGroup additive_group(std::size_t dim);

/// Returns the first failing law ("associativity", "left unit", "right unit",
/// "left inverse", "right inverse", or an arity complaint), checked symbolically.
std::optional<std::string> group_law_failure(const NumericalGroup& G);

struct NumSimplicialObject {
  unsigned n_max = 0;
  std::vector<std::size_t> level_ranks;
  std::map<std::pair<unsigned, unsigned>, PolyMap> faces;         // (n, i): level n -> n-1
  std::map<std::pair<unsigned, unsigned>, PolyMap> degeneracies;  // (n, i): level n -> n+1

  const PolyMap& face(unsigned n, unsigned i) const;
  const PolyMap& degeneracy(unsigned n, unsigned i) const;
};

/// Symbolic check of every simplicial identity within the truncation.
std::vector<IdentityViolation> check_simplicial_identities(const NumSimplicialObject& X);

/// The bar model of K(Z,1): level n has rank n.
NumSimplicialObject k_z_1(unsigned n_max);

/// Throws NotAGroup naming the failed law.
NumSimplicialObject classifying_space(const NumericalGroup& G, unsigned n_max);

/// Linear maps as numerical maps, and back (throws NonAdditiveFaces if some
/// map is not linear without constant term).
NumSimplicialObject as_numerical(const SimplicialAbGroup& A);
SimplicialAbGroup as_abelian(const NumSimplicialObject& X);

// ---------------------------------------------------------------- cochains

/// d : C^n -> C^{n+1}, (d f) = sum_i (-1)^i f o d_i. Requires n < n_max.
BinomialPoly coboundary(const NumSimplicialObject& X, unsigned n, const BinomialPoly& f);
PolyMap coboundary(const NumSimplicialObject& X, unsigned n, const PolyMap& fs);

/// True if every component is a sum of distinct variables with coefficient 1
/// and no input variable feeds two components. Such maps preserve the
/// binomial grading.
bool is_grading_preserving(const PolyMap& m, std::size_t nvars);

struct GradedCochainPiece {
  unsigned n = 0;
  unsigned d = 0;
  std::vector<MultiIndex> basis;  // all |alpha| = d on level n
  IntMatrix normalized;           // columns: normalized cochains in `basis` coordinates
  IntMatrix coboundary;           // normalized coords at n -> normalized coords at n+1
};

struct GradedCohomology {
  unsigned n_max = 0;
  unsigned d_max = 0;
  bool normalized = true;
  std::map<std::pair<unsigned, unsigned>, FinAbGroup> pieces;  // (n, d)

  /// Direct sum over d <= d_max; classes above d_max are not seen.
  FinAbGroup total(unsigned n) const;
};

/// H^n for n < n_max, one graded piece per d <= d_max. Throws NonAdditiveFaces
/// unless every face and degeneracy is grading preserving.
GradedCohomology graded_cohomology(const NumSimplicialObject& X, unsigned d_max, bool normalized = true,
                                   unsigned threads = 1);

/// The normalized cochain complex of one graded piece, degrees 0..n_max.
std::vector<GradedCochainPiece> graded_pieces(const NumSimplicialObject& X, unsigned d, bool normalized = true);

enum class BasisMode { IntegerPolynomial, Binomial };

struct NoSolutionCertificate {
  /// Functional w on the coefficient rows with w A integral and w t not.
  std::vector<MultiIndex> rows;
  std::vector<Rational> functional;
  Rational value;
};

struct CoboundarySolution {
  bool solved = false;
  BinomialPoly witness;                   // cochain at level n-1 with d(witness) = target
  std::vector<MultiIndex> basis;          // ansatz exponents, |alpha| <= d_max
  std::vector<Integer> coefficients;      // witness in the ansatz basis
  std::optional<NoSolutionCertificate> certificate;
};

/// Solves d c = target over Z with c ranging over the chosen basis in degree
/// <= d_max on level n-1. Throws NotACocycle if d target != 0 (checked when
/// n < n_max).
CoboundarySolution coboundary_solve(const NumSimplicialObject& X, unsigned n, const BinomialPoly& target,
                                    BasisMode mode, unsigned d_max);

// ---------------------------------------------------------------- PTCP

/// tau_q : B_q -> G_{q-1} for q = 1..n_max, stored at index q (index 0 unused).
struct TwistingFunction {
  std::vector<PolyMap> tau;
};

struct TwistingViolation {
  std::string identity;
  unsigned q = 0;
  unsigned i = 0;
};

/// Identities for an additive fiber G:
///   d_0 tau_q = tau_{q-1} d_1 - tau_{q-1} d_0   (q >= 2)
///   d_i tau_q = tau_{q-1} d_{i+1}               (1 <= i < q)
///   s_i tau_q = tau_{q+1} s_{i+1}               (0 <= i < q)
///   tau_{q+1} s_0 = 0
std::vector<TwistingViolation> check_twisting(const NumSimplicialObject& G, const NumSimplicialObject& B,
                                              const TwistingFunction& tau);

TwistingFunction trivial_twisting(const NumSimplicialObject& G, const NumSimplicialObject& B);

/// E_n = G_n x B_n (fiber variables first) with d_0(f, b) = (tau(b) + d_0 f, d_0 b).
/// Throws InvalidTwisting.
NumSimplicialObject build_ptcp(const NumSimplicialObject& G, const NumSimplicialObject& B,
                               const TwistingFunction& tau);

/// tau_q[g_1|...|g_q] = (a(g_1) b(g_j))_{j=2..q} on K(Z^2,1) with values in
/// K(Z,1): the cocycle (a,b),(a',b') -> a b'.
TwistingFunction heisenberg_twisting(unsigned n_max);

/// Gamma of the cone Z[k] --id--> Z[k-1], split as a PTCP with fiber
/// Gamma(Z[k-1]) and base Gamma(Z[k]).
struct PathFibration {
  NumSimplicialObject fiber, base, total;
  TwistingFunction tau;
};
PathFibration path_fibration(unsigned k, unsigned n_max);

// ---------------------------------------------------------------- lens spaces

struct LensOrbits {
  unsigned n = 0;
  std::vector<unsigned> units;
  std::vector<std::vector<unsigned>> homotopy_classes;     // orbits of +-beta^2
  std::vector<std::vector<unsigned>> isomorphism_classes;  // orbits of +-1
  /// (alpha, alpha') homotopic but not isomorphic, if any.
  std::optional<std::pair<unsigned, unsigned>> homotopic_not_isomorphic;
};

LensOrbits lens_orbits(unsigned n);

}  // namespace numa
