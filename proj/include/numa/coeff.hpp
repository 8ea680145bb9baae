#pragma once

// Coefficient rings: subrings of Q and truncations of the p-adic integers.
// Numerical maps with integral binomial coefficients extend to any of them.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "numa/binom.hpp"
#include "numa/simplicial.hpp"

namespace numa {

/// v_p(x); nullopt for x = 0.
std::optional<unsigned> valuation(const Integer& x, unsigned long p);
/// v_p(k!) by Legendre's formula.
unsigned factorial_valuation(unsigned k, unsigned long p);
/// True if p does not divide the reduced denominator.
bool is_p_integral(const Rational& q, unsigned long p);

/// An element of Z_p known modulo p^precision. The residue is kept in
/// [0, p^precision).
class PadicApprox {
 public:
  PadicApprox() = default;
  PadicApprox(unsigned long p, const Integer& value, unsigned precision);
  /// Throws InvalidArgument unless q is p-integral.
  static PadicApprox from_rational(unsigned long p, const Rational& q, unsigned precision);

  unsigned long prime() const { return p_; }
  const Integer& residue() const { return residue_; }
  unsigned precision() const { return precision_; }
  Integer modulus() const;

  /// Same element known to fewer digits.
  PadicApprox truncated(unsigned precision) const;
  /// Residue differences vanish modulo the smaller precision.
  bool congruent(const PadicApprox& other) const;

  PadicApprox operator+(const PadicApprox& o) const;
  PadicApprox operator-(const PadicApprox& o) const;
  PadicApprox operator*(const PadicApprox& o) const;
  PadicApprox operator-() const;
  PadicApprox operator+(const Integer& c) const;
  PadicApprox operator*(const Integer& c) const;

  bool operator==(const PadicApprox& o) const = default;

 private:
  unsigned long p_ = 2;
  Integer residue_;
  unsigned precision_ = 1;
};

/// (r choose k); loses exactly v_p(k!) digits. Throws PrecisionExhausted when
/// no digit would remain.
PadicApprox binom(const PadicApprox& r, unsigned k);

/// Sum of c_alpha prod (x_j choose alpha_j) over p-adic points. The result
/// precision is the least over all terms, capped at `precision`.
PadicApprox evaluate(const BinomialPoly& b, std::span<const PadicApprox> point, unsigned long p,
                     unsigned precision);

class CoeffRing {
 public:
  enum class Kind { RationalsSubring, PadicTruncated };

  /// Z[1/s : s in primes].
  static CoeffRing inverting(std::vector<unsigned long> primes);
  /// Z_(S): every prime outside `primes` inverted. localized_at({}) is Q.
  static CoeffRing localized_at(std::vector<unsigned long> primes);
  static CoeffRing integers() { return inverting({}); }
  static CoeffRing rationals() { return localized_at({}); }
  static CoeffRing padic(unsigned long p, unsigned precision);

  Kind kind() const { return kind_; }
  const std::vector<unsigned long>& primes() const { return primes_; }
  bool complement() const { return complement_; }
  unsigned long p() const { return primes_.front(); }
  unsigned precision() const { return precision_; }

  /// Membership for the rational kinds.
  bool contains(const Rational& q) const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::RationalsSubring;
  std::vector<unsigned long> primes_;  // sorted, distinct
  bool complement_ = false;
  unsigned precision_ = 0;
};

// ---------------------------------------------------------------- integrality

struct PIntegralSample {
  std::vector<Rational> point;
  Rational value;
  bool integral = false;
};

struct PIntegralCertificate {
  unsigned long p = 0;
  /// The binomial coefficients are integers, so the map is integral on
  /// Z_(p)^k. This is the certificate proper; samples only corroborate it.
  BinomialPoly representation;
  std::vector<PIntegralSample> samples;

  bool all_integral() const;
};

/// Uniform p-integral rational with |numerator|, denominator <= bound.
Rational random_p_integral(std::mt19937_64& rng, unsigned long p, long bound = 1000000);

PIntegralCertificate certify_p_integral(const BinomialPoly& b, unsigned long p, unsigned samples = 100,
                                        std::uint64_t seed = 1);

// ---------------------------------------------------------------- - (x) R

struct SampledViolation {
  std::string identity;
  unsigned n = 0;
  unsigned i = 0;
  unsigned j = 0;
};

/// Faces and degeneracies of a numerical simplicial object evaluated on
/// R-points.
class TensorEvaluator {
 public:
  TensorEvaluator(NumSimplicialObject X, CoeffRing R);

  const NumSimplicialObject& object() const { return X_; }
  const CoeffRing& ring() const { return R_; }

  /// Rational kinds; throws InvalidArgument if a coordinate is not in R.
  std::vector<Rational> face(unsigned n, unsigned i, std::span<const Rational> x) const;
  std::vector<Rational> degeneracy(unsigned n, unsigned i, std::span<const Rational> x) const;
  /// p-adic kind.
  std::vector<PadicApprox> face(unsigned n, unsigned i, std::span<const PadicApprox> x) const;
  std::vector<PadicApprox> degeneracy(unsigned n, unsigned i, std::span<const PadicApprox> x) const;

  /// Simplicial identities on `samples` random R-points per level; p-adic
  /// values are compared to their common precision.
  std::vector<SampledViolation> check_identities(unsigned samples, std::uint64_t seed = 1) const;

 private:
  NumSimplicialObject X_;
  CoeffRing R_;
};

TensorEvaluator tensor_R(const NumSimplicialObject& X, const CoeffRing& R);

/// Componentwise evaluation on R-points.
std::vector<PadicApprox> evaluate_map(const PolyMap& m, std::span<const PadicApprox> x, unsigned long p,
                                      unsigned precision);
std::vector<Rational> evaluate_map(const PolyMap& m, std::span<const Rational> x);

// ---------------------------------------------------------------- Mahler

struct MahlerEntry {
  unsigned k = 0;
  Integer c;
  std::optional<unsigned> v;  // nullopt for c = 0
};

struct MahlerProfile {
  unsigned long p = 0;
  std::vector<MahlerEntry> entries;
  /// Valuations of the nonzero tail never decrease within the window.
  bool valuations_nondecreasing = false;
  /// Last nonzero index, when followed by zeros up to k_max.
  std::optional<unsigned> support_end;
};

using UnaryIntegerFunction = std::function<Integer(const Integer&)>;

/// c_k = (Delta^k f)(0) for k <= k_max.
MahlerProfile mahler_profile(const UnaryIntegerFunction& f, unsigned long p, unsigned k_max);

}  // namespace numa
