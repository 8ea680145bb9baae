#include "numa/coeff.hpp"

#include <algorithm>

namespace numa {

namespace {

Integer power(unsigned long p, unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

Integer reduce(const Integer& v, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

void require_prime(unsigned long p) {
  if (p < 2 || mpz_probab_prime_p(Integer(p).get_mpz_t(), 25) == 0) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not a prime");
  }
}

void require_same_prime(const PadicApprox& a, const PadicApprox& b) {
  if (a.prime() != b.prime()) throw Error(ErrorCode::InvalidArgument, "p-adic operands over different primes");
}

}  // namespace

std::optional<unsigned> valuation(const Integer& x, unsigned long p) {
  if (x == 0) return std::nullopt;
  Integer rest;
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Integer(p).get_mpz_t()));
}

unsigned factorial_valuation(unsigned k, unsigned long p) {
  unsigned v = 0;
  for (unsigned long q = p; q <= k; q *= p) {
    v += static_cast<unsigned>(k / q);
    if (q > k / p) break;
  }
  return v;
}

bool is_p_integral(const Rational& q, unsigned long p) {
  return mpz_divisible_ui_p(q.get_den_mpz_t(), p) == 0;
}

// ---------------------------------------------------------------- PadicApprox

PadicApprox::PadicApprox(unsigned long p, const Integer& value, unsigned precision) : p_(p), precision_(precision) {
  if (precision == 0) throw Error(ErrorCode::PrecisionExhausted, "p-adic value with no digits");
  residue_ = reduce(value, modulus());
}

PadicApprox PadicApprox::from_rational(unsigned long p, const Rational& q, unsigned precision) {
  if (!is_p_integral(q, p)) {
    throw Error(ErrorCode::InvalidArgument, q.get_str() + " is not " + std::to_string(p) + "-integral");
  }
  const Integer m = power(p, precision);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), m.get_mpz_t());
  return PadicApprox(p, q.get_num() * inv, precision);
}

Integer PadicApprox::modulus() const { return power(p_, precision_); }

PadicApprox PadicApprox::truncated(unsigned precision) const {
  if (precision > precision_) {
    throw Error(ErrorCode::PrecisionExhausted, "cannot raise precision from " + std::to_string(precision_) +
                                                   " to " + std::to_string(precision));
  }
  return PadicApprox(p_, residue_, precision);
}

bool PadicApprox::congruent(const PadicApprox& o) const {
  require_same_prime(*this, o);
  const unsigned n = std::min(precision_, o.precision_);
  return reduce(residue_ - o.residue_, power(p_, n)) == 0;
}

PadicApprox PadicApprox::operator+(const PadicApprox& o) const {
  require_same_prime(*this, o);
  return PadicApprox(p_, residue_ + o.residue_, std::min(precision_, o.precision_));
}

PadicApprox PadicApprox::operator-(const PadicApprox& o) const {
  require_same_prime(*this, o);
  return PadicApprox(p_, residue_ - o.residue_, std::min(precision_, o.precision_));
}

PadicApprox PadicApprox::operator*(const PadicApprox& o) const {
  require_same_prime(*this, o);
  return PadicApprox(p_, residue_ * o.residue_, std::min(precision_, o.precision_));
}

PadicApprox PadicApprox::operator-() const { return PadicApprox(p_, -residue_, precision_); }

PadicApprox PadicApprox::operator+(const Integer& c) const { return PadicApprox(p_, residue_ + c, precision_); }

PadicApprox PadicApprox::operator*(const Integer& c) const { return PadicApprox(p_, residue_ * c, precision_); }

PadicApprox binom(const PadicApprox& r, unsigned k) {
  const unsigned loss = factorial_valuation(k, r.prime());
  if (loss >= r.precision()) {
    throw Error(ErrorCode::PrecisionExhausted, "binomial index " + std::to_string(k) + " costs " +
                                                   std::to_string(loss) + " digits of " +
                                                   std::to_string(r.precision()));
  }
  // C(R, k) mod p^(N - loss) depends only on R mod p^N.
  return PadicApprox(r.prime(), binom(r.residue(), k), r.precision() - loss);
}

PadicApprox evaluate(const BinomialPoly& b, std::span<const PadicApprox> point, unsigned long p,
                     unsigned precision) {
  if (b.nvars() != point.size()) {
    throw Error(ErrorCode::ArityMismatch, "evaluate: " + std::to_string(b.nvars()) + " variables, " +
                                              std::to_string(point.size()) + " coordinates");
  }
  for (const auto& x : point) {
    if (x.prime() != p) throw Error(ErrorCode::InvalidArgument, "p-adic point over a different prime");
    precision = std::min(precision, x.precision());
  }
  const std::size_t k = b.nvars();
  std::vector<std::vector<PadicApprox>> values(k);
  Integer sum = 0;
  for (const auto& [idx, c] : b.terms()) {
    Integer t = c;
    for (std::size_t j = 0; j < k; ++j) {
      auto& vj = values[j];
      while (vj.size() <= idx[j]) vj.push_back(binom(point[j], static_cast<unsigned>(vj.size())));
      if (idx[j] == 0) continue;
      t *= vj[idx[j]].residue();
      precision = std::min(precision, vj[idx[j]].precision());
    }
    sum += t;
  }
  return PadicApprox(p, sum, precision);
}

// ---------------------------------------------------------------- CoeffRing

namespace {

std::vector<unsigned long> canonical_primes(std::vector<unsigned long> primes) {
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
    throw Error(ErrorCode::InvalidArgument, "repeated prime in coefficient ring");
  }
  for (auto p : primes) require_prime(p);
  return primes;
}

}  // namespace

CoeffRing CoeffRing::inverting(std::vector<unsigned long> primes) {
  CoeffRing R;
  R.primes_ = canonical_primes(std::move(primes));
  return R;
}

CoeffRing CoeffRing::localized_at(std::vector<unsigned long> primes) {
  CoeffRing R;
  R.primes_ = canonical_primes(std::move(primes));
  R.complement_ = true;
  return R;
}

CoeffRing CoeffRing::padic(unsigned long p, unsigned precision) {
  require_prime(p);
  if (precision == 0) throw Error(ErrorCode::InvalidArgument, "p-adic precision must be >= 1");
  CoeffRing R;
  R.kind_ = Kind::PadicTruncated;
  R.primes_ = {p};
  R.precision_ = precision;
  return R;
}

bool CoeffRing::contains(const Rational& q) const {
  if (kind_ != Kind::RationalsSubring) throw Error(ErrorCode::InvalidArgument, "membership of a rational in Z_p");
  Integer den = q.get_den();
  if (complement_) {
    for (auto p : primes_) {
      if (mpz_divisible_ui_p(den.get_mpz_t(), p)) return false;
    }
    return true;
  }
  for (auto p : primes_) {
    while (mpz_divisible_ui_p(den.get_mpz_t(), p)) mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
  }
  return den == 1;
}

std::string CoeffRing::to_string() const {
  auto list = [&] {
    std::string s;
    for (std::size_t i = 0; i < primes_.size(); ++i) s += (i ? "," : "") + std::to_string(primes_[i]);
    return s;
  };
  if (kind_ == Kind::PadicTruncated) {
    return "Z_" + std::to_string(p()) + " mod " + std::to_string(p()) + "^" + std::to_string(precision_);
  }
  if (complement_) return primes_.empty() ? "Q" : "Z_(" + list() + ")";
  return primes_.empty() ? "Z" : "Z[1/" + list() + "]";
}

// ---------------------------------------------------------------- integrality

bool PIntegralCertificate::all_integral() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.integral; });
}

Rational random_p_integral(std::mt19937_64& rng, unsigned long p, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  long d = den(rng);
  while (d % static_cast<long>(p) == 0) d = den(rng);
  Rational q(num(rng), d);
  q.canonicalize();
  return q;
}

PIntegralCertificate certify_p_integral(const BinomialPoly& b, unsigned long p, unsigned samples,
                                        std::uint64_t seed) {
  require_prime(p);
  PIntegralCertificate cert;
  cert.p = p;
  cert.representation = b;
  std::mt19937_64 rng(seed);
  for (unsigned s = 0; s < samples; ++s) {
    PIntegralSample sample;
    for (std::size_t j = 0; j < b.nvars(); ++j) sample.point.push_back(random_p_integral(rng, p));
    sample.value = evaluate(b, std::span<const Rational>(sample.point));
    sample.integral = is_p_integral(sample.value, p);
    cert.samples.push_back(std::move(sample));
  }
  return cert;
}

// ---------------------------------------------------------------- - (x) R

std::vector<PadicApprox> evaluate_map(const PolyMap& m, std::span<const PadicApprox> x, unsigned long p,
                                      unsigned precision) {
  std::vector<PadicApprox> out;
  out.reserve(m.size());
  for (const auto& f : m) out.push_back(evaluate(f, x, p, precision));
  return out;
}

std::vector<Rational> evaluate_map(const PolyMap& m, std::span<const Rational> x) {
  std::vector<Rational> out;
  out.reserve(m.size());
  for (const auto& f : m) out.push_back(evaluate(f, x));
  return out;
}

TensorEvaluator::TensorEvaluator(NumSimplicialObject X, CoeffRing R) : X_(std::move(X)), R_(std::move(R)) {}

namespace {

void require_kind(const CoeffRing& R, CoeffRing::Kind kind) {
  if (R.kind() != kind) {
    throw Error(ErrorCode::InvalidArgument, "point type does not match coefficient ring " + R.to_string());
  }
}

void require_members(const CoeffRing& R, std::span<const Rational> x) {
  for (const auto& q : x) {
    if (!R.contains(q)) throw Error(ErrorCode::InvalidArgument, q.get_str() + " is not in " + R.to_string());
  }
}

Rational random_member(const CoeffRing& R, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000, 1000);
  if (R.complement()) {
    std::uniform_int_distribution<long> den(1, 1000);
    for (;;) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      if (R.contains(q)) return q;
    }
  }
  Integer d = 1;
  std::uniform_int_distribution<int> e(0, 3);
  for (auto p : R.primes()) {
    for (int t = e(rng); t > 0; --t) d *= p;
  }
  Rational q(Integer(num(rng)), d);
  q.canonicalize();
  return q;
}

}  // namespace

std::vector<Rational> TensorEvaluator::face(unsigned n, unsigned i, std::span<const Rational> x) const {
  require_kind(R_, CoeffRing::Kind::RationalsSubring);
  require_members(R_, x);
  return evaluate_map(X_.face(n, i), x);
}

std::vector<Rational> TensorEvaluator::degeneracy(unsigned n, unsigned i, std::span<const Rational> x) const {
  require_kind(R_, CoeffRing::Kind::RationalsSubring);
  require_members(R_, x);
  return evaluate_map(X_.degeneracy(n, i), x);
}

std::vector<PadicApprox> TensorEvaluator::face(unsigned n, unsigned i, std::span<const PadicApprox> x) const {
  require_kind(R_, CoeffRing::Kind::PadicTruncated);
  return evaluate_map(X_.face(n, i), x, R_.p(), R_.precision());
}

std::vector<PadicApprox> TensorEvaluator::degeneracy(unsigned n, unsigned i, std::span<const PadicApprox> x) const {
  require_kind(R_, CoeffRing::Kind::PadicTruncated);
  return evaluate_map(X_.degeneracy(n, i), x, R_.p(), R_.precision());
}

namespace {

template <class Point, class Face, class Degen, class Equal>
void check_at(const NumSimplicialObject& X, unsigned n, const Point& x, Face face, Degen degen, Equal equal,
              std::vector<SampledViolation>& out) {
  auto expect = [&](bool ok, const char* identity, unsigned i, unsigned j) {
    if (!ok) out.push_back({identity, n, i, j});
  };
  // x lives at level n.
  if (n >= 2) {
    for (unsigned j = 1; j <= n; ++j) {
      for (unsigned i = 0; i < j; ++i) {
        expect(equal(face(n - 1, i, face(n, j, x)), face(n - 1, j - 1, face(n, i, x))), "d_i d_j = d_{j-1} d_i",
               i, j);
      }
    }
  }
  if (n + 2 <= X.n_max) {
    for (unsigned j = 0; j <= n; ++j) {
      for (unsigned i = 0; i <= j; ++i) {
        expect(equal(degen(n + 1, i, degen(n, j, x)), degen(n + 1, j + 1, degen(n, i, x))),
               "s_i s_j = s_{j+1} s_i", i, j);
      }
    }
  }
  if (n + 1 <= X.n_max) {
    for (unsigned j = 0; j <= n; ++j) {
      const auto up = degen(n, j, x);
      for (unsigned i = 0; i <= n + 1; ++i) {
        const auto lhs = face(n + 1, i, up);
        if (i < j) {
          expect(equal(lhs, degen(n - 1, j - 1, face(n, i, x))), "d_i s_j = s_{j-1} d_i", i, j);
        } else if (i == j || i == j + 1) {
          expect(equal(lhs, x), "d_i s_j = id", i, j);
        } else {
          expect(equal(lhs, degen(n - 1, j, face(n, i - 1, x))), "d_i s_j = s_j d_{i-1}", i, j);
        }
      }
    }
  }
}

}  // namespace

std::vector<SampledViolation> TensorEvaluator::check_identities(unsigned samples, std::uint64_t seed) const {
  std::vector<SampledViolation> out;
  std::mt19937_64 rng(seed);
  for (unsigned n = 0; n <= X_.n_max; ++n) {
    for (unsigned s = 0; s < samples; ++s) {
      if (R_.kind() == CoeffRing::Kind::RationalsSubring) {
        using P = std::vector<Rational>;
        P x;
        for (std::size_t t = 0; t < X_.level_ranks[n]; ++t) x.push_back(random_member(R_, rng));
        auto face = [&](unsigned m, unsigned i, const P& y) { return this->face(m, i, std::span<const Rational>(y)); };
        auto degen = [&](unsigned m, unsigned i, const P& y) {
          return this->degeneracy(m, i, std::span<const Rational>(y));
        };
        check_at(X_, n, x, face, degen, std::equal_to<P>(), out);
      } else {
        using P = std::vector<PadicApprox>;
        const Integer m = power(R_.p(), R_.precision());
        gmp_randclass gen(gmp_randinit_default);
        gen.seed(static_cast<unsigned long>(rng()));
        P x;
        for (std::size_t t = 0; t < X_.level_ranks[n]; ++t) {
          x.emplace_back(R_.p(), Integer(gen.get_z_range(m)), R_.precision());
        }
        auto face = [&](unsigned k, unsigned i, const P& y) {
          return this->face(k, i, std::span<const PadicApprox>(y));
        };
        auto degen = [&](unsigned k, unsigned i, const P& y) {
          return this->degeneracy(k, i, std::span<const PadicApprox>(y));
        };
        auto equal = [](const P& a, const P& b) {
          if (a.size() != b.size()) return false;
          for (std::size_t t = 0; t < a.size(); ++t) {
            if (!a[t].congruent(b[t])) return false;
          }
          return true;
        };
        check_at(X_, n, x, face, degen, equal, out);
      }
    }
  }
  return out;
}

TensorEvaluator tensor_R(const NumSimplicialObject& X, const CoeffRing& R) { return TensorEvaluator(X, R); }

// ---------------------------------------------------------------- Mahler

MahlerProfile mahler_profile(const UnaryIntegerFunction& f, unsigned long p, unsigned k_max) {
  require_prime(p);
  MahlerProfile prof;
  prof.p = p;
  const auto coeffs = newton_coefficients([&](std::span<const Integer> x) { return f(x[0]); }, MultiIndex{k_max});
  std::vector<Integer> c(k_max + 1);
  for (const auto& [idx, v] : coeffs) c[idx[0]] = v;
  std::optional<unsigned> last;
  for (unsigned k = 0; k <= k_max; ++k) {
    prof.entries.push_back({k, c[k], valuation(c[k], p)});
    if (c[k] != 0) last = k;
  }
  if (last && *last < k_max) prof.support_end = last;
  // zero coefficients count as infinite valuation
  prof.valuations_nondecreasing = true;
  bool seen_zero = false;
  std::optional<unsigned> prev;
  for (const auto& e : prof.entries) {
    if (!e.v) {
      seen_zero = true;
      continue;
    }
    if (seen_zero || (prev && *e.v < *prev)) prof.valuations_nondecreasing = false;
    prev = e.v;
  }
  return prof;
}

}  // namespace numa
