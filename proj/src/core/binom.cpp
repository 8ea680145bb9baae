#include "numa/binom.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <string>

namespace numa {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNumerical: return "NotNumerical";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InconsistentData: return "InconsistentData";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::NonAdditiveFaces: return "NonAdditiveFaces";
    case ErrorCode::InvalidTwisting: return "InvalidTwisting";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NonNilpotentAction: return "NonNilpotentAction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

unsigned total_degree(const MultiIndex& idx) {
  return std::accumulate(idx.begin(), idx.end(), 0u);
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

void require_arity(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::ArityMismatch, std::string(what) + ": expected " +
                                              std::to_string(expected) + " variables, got " +
                                              std::to_string(got));
  }
}

// Rows grow on demand; deque keeps earlier rows addressable while growing.
class StirlingTables {
 public:
  // S(n, k): Stirling numbers of the second kind.
  std::vector<Integer> second_kind(unsigned n) {
    std::lock_guard lock(mu_);
    while (s2_.size() <= n) {
      const std::size_t m = s2_.size();
      std::vector<Integer> row(m + 1, 0);
      if (m == 0) {
        row[0] = 1;
      } else {
        const auto& prev = s2_.back();
        for (std::size_t k = 1; k <= m; ++k) {
          Integer v = (k < prev.size() ? prev[k] * static_cast<unsigned long>(k) : Integer(0));
          v += prev[k - 1];
          row[k] = v;
        }
      }
      s2_.push_back(std::move(row));
    }
    return s2_[n];
  }

  // Coefficients of the falling factorial x(x-1)...(x-n+1) in powers of x.
  std::vector<Integer> falling(unsigned n) {
    std::lock_guard lock(mu_);
    while (ff_.size() <= n) {
      const std::size_t m = ff_.size();
      std::vector<Integer> row(m + 1, 0);
      if (m == 0) {
        row[0] = 1;
      } else {
        const auto& prev = ff_.back();
        const Integer shift = static_cast<long>(m - 1);
        for (std::size_t j = 0; j < prev.size(); ++j) {
          row[j + 1] += prev[j];
          row[j] -= shift * prev[j];
        }
      }
      ff_.push_back(std::move(row));
    }
    return ff_[n];
  }

 private:
  std::mutex mu_;
  std::deque<std::vector<Integer>> s2_;
  std::deque<std::vector<Integer>> ff_;
};

StirlingTables& stirling() {
  static StirlingTables tables;
  return tables;
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

template <class Map>
void add_into(Map& terms, const MultiIndex& idx, const typename Map::mapped_type& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

}  // namespace

Integer binom(const Integer& p, unsigned n) {
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), p.get_mpz_t(), n);
  return r;
}

Rational binom(const Rational& p, unsigned n) {
  Rational r = 1;
  for (unsigned i = 0; i < n; ++i) {
    r *= (p - i);
    r /= (i + 1);
  }
  return r;
}

// ---------------------------------------------------------------- BinomialPoly

BinomialPoly::BinomialPoly(std::size_t nvars, TermMap terms) : nvars_(nvars) {
  for (auto& [idx, c] : terms) {
    require_arity(nvars, idx.size(), "BinomialPoly term");
    if (c != 0) terms_.emplace(idx, std::move(c));
  }
}

BinomialPoly BinomialPoly::constant(std::size_t nvars, const Integer& c) {
  BinomialPoly p(nvars);
  if (c != 0) p.terms_.emplace(MultiIndex(nvars, 0), c);
  return p;
}

BinomialPoly BinomialPoly::variable(std::size_t nvars, std::size_t j) {
  return binomial(nvars, j, 1);
}

BinomialPoly BinomialPoly::binomial(std::size_t nvars, std::size_t j, unsigned k) {
  if (j >= nvars) {
    throw Error(ErrorCode::ArityMismatch, "variable index out of range");
  }
  MultiIndex idx(nvars, 0);
  idx[j] = k;
  return monomial(std::move(idx));
}

BinomialPoly BinomialPoly::monomial(MultiIndex idx, const Integer& c) {
  BinomialPoly p(idx.size());
  if (c != 0) p.terms_.emplace(std::move(idx), c);
  return p;
}

unsigned BinomialPoly::degree() const {
  // graded order: the last key has maximal total degree
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

Integer BinomialPoly::coefficient(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Integer(0) : it->second;
}

Integer BinomialPoly::constant_term() const {
  return coefficient(MultiIndex(nvars_, 0));
}

BinomialPoly BinomialPoly::operator-() const {
  BinomialPoly r = *this;
  for (auto& [idx, c] : r.terms_) c = -c;
  return r;
}

BinomialPoly& BinomialPoly::operator+=(const BinomialPoly& other) {
  require_arity(nvars_, other.nvars_, "add");
  for (const auto& [idx, c] : other.terms_) add_into(terms_, idx, c);
  return *this;
}

BinomialPoly& BinomialPoly::operator-=(const BinomialPoly& other) {
  require_arity(nvars_, other.nvars_, "subtract");
  for (const auto& [idx, c] : other.terms_) add_into(terms_, idx, Integer(-c));
  return *this;
}

BinomialPoly& BinomialPoly::operator*=(const Integer& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= scalar;
  return *this;
}

BinomialPoly operator*(const BinomialPoly& a, const BinomialPoly& b) { return mul(a, b); }

BinomialPoly BinomialPoly::divided_exactly(const Integer& divisor) const {
  if (divisor == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
  BinomialPoly r = *this;
  for (auto& [idx, c] : r.terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), divisor.get_mpz_t())) {
      throw Error(ErrorCode::NotNumerical, "quotient is not integer valued");
    }
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), divisor.get_mpz_t());
  }
  return r;
}

BinomialPoly BinomialPoly::embedded(std::size_t nvars,
                                    std::span<const std::size_t> placement) const {
  require_arity(nvars_, placement.size(), "embed");
  BinomialPoly r(nvars);
  for (const auto& [idx, c] : terms_) {
    MultiIndex out(nvars, 0);
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (placement[j] >= nvars) throw Error(ErrorCode::ArityMismatch, "embedding target");
      out[placement[j]] += idx[j];
    }
    // placement is assumed injective
    add_into(r.terms_, out, c);
  }
  return r;
}

// ---------------------------------------------------------------- RationalPoly

RationalPoly::RationalPoly(std::size_t nvars, TermMap terms) : nvars_(nvars) {
  for (auto& [idx, c] : terms) {
    require_arity(nvars, idx.size(), "RationalPoly term");
    c.canonicalize();
    if (c != 0) terms_.emplace(idx, std::move(c));
  }
}

RationalPoly RationalPoly::constant(std::size_t nvars, const Rational& c) {
  RationalPoly p(nvars);
  if (c != 0) p.terms_.emplace(MultiIndex(nvars, 0), c);
  return p;
}

RationalPoly RationalPoly::variable(std::size_t nvars, std::size_t j) {
  if (j >= nvars) throw Error(ErrorCode::ArityMismatch, "variable index out of range");
  MultiIndex idx(nvars, 0);
  idx[j] = 1;
  return RationalPoly(nvars, {{idx, Rational(1)}});
}

unsigned RationalPoly::degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

RationalPoly RationalPoly::operator-() const {
  RationalPoly r = *this;
  for (auto& [idx, c] : r.terms_) c = -c;
  return r;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& other) {
  require_arity(nvars_, other.nvars_, "add");
  for (const auto& [idx, c] : other.terms_) add_into(terms_, idx, c);
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& other) {
  require_arity(nvars_, other.nvars_, "subtract");
  for (const auto& [idx, c] : other.terms_) add_into(terms_, idx, Rational(-c));
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= scalar;
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  require_arity(a.nvars(), b.nvars(), "multiply");
  RationalPoly::TermMap out;
  MultiIndex idx(a.nvars());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = ia[j] + ib[j];
      add_into(out, idx, Rational(ca * cb));
    }
  }
  return RationalPoly(a.nvars(), std::move(out));
}

RationalPoly RationalPoly::pow(unsigned e) const {
  RationalPoly r = constant(nvars_, 1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

Rational RationalPoly::evaluate(std::span<const Rational> point) const {
  require_arity(nvars_, point.size(), "evaluate");
  Rational sum = 0;
  for (const auto& [idx, c] : terms_) {
    Rational t = c;
    for (std::size_t j = 0; j < nvars_; ++j) {
      for (unsigned e = 0; e < idx[j]; ++e) t *= point[j];
    }
    sum += t;
  }
  return sum;
}

// ---------------------------------------------------------------- conversions

BinomialPoly from_rational_poly(const RationalPoly& p) {
  const std::size_t k = p.nvars();
  std::map<MultiIndex, Rational, GradedLexLess> acc;
  for (const auto& [exps, c] : p.terms()) {
    // x^e = sum_m S(e, m) m! (x choose m), taken per variable.
    std::vector<std::pair<MultiIndex, Rational>> partial{{MultiIndex{}, c}};
    for (std::size_t j = 0; j < k; ++j) {
      const auto s2 = stirling().second_kind(exps[j]);
      std::vector<std::pair<MultiIndex, Rational>> next;
      for (const auto& [idx, coeff] : partial) {
        for (unsigned m = 0; m < s2.size(); ++m) {
          if (s2[m] == 0) continue;
          MultiIndex ext = idx;
          ext.push_back(m);
          next.emplace_back(std::move(ext), coeff * Rational(s2[m] * factorial(m)));
        }
      }
      partial = std::move(next);
    }
    for (const auto& [idx, coeff] : partial) add_into(acc, idx, coeff);
  }
  BinomialPoly::TermMap terms;
  for (auto& [idx, c] : acc) {
    c.canonicalize();
    if (c.get_den() != 1) {
      throw Error(ErrorCode::NotNumerical,
                  "binomial coefficient " + c.get_str() + " is not an integer");
    }
    terms.emplace(idx, c.get_num());
  }
  return BinomialPoly(k, std::move(terms));
}

RationalPoly to_rational_poly(const BinomialPoly& b) {
  const std::size_t k = b.nvars();
  RationalPoly::TermMap acc;
  for (const auto& [idx, c] : b.terms()) {
    std::vector<std::pair<MultiIndex, Rational>> partial{{MultiIndex{}, Rational(c)}};
    for (std::size_t j = 0; j < k; ++j) {
      const auto ff = stirling().falling(idx[j]);
      const Integer fact = factorial(idx[j]);
      std::vector<std::pair<MultiIndex, Rational>> next;
      for (const auto& [e, coeff] : partial) {
        for (unsigned m = 0; m < ff.size(); ++m) {
          if (ff[m] == 0) continue;
          MultiIndex ext = e;
          ext.push_back(m);
          next.emplace_back(std::move(ext), coeff * Rational(ff[m], fact));
        }
      }
      partial = std::move(next);
    }
    for (auto& [e, coeff] : partial) {
      coeff.canonicalize();
      add_into(acc, e, coeff);
    }
  }
  return RationalPoly(k, std::move(acc));
}

namespace {

template <class Scalar>
Scalar evaluate_impl(const BinomialPoly& b, std::span<const Scalar> point) {
  require_arity(b.nvars(), point.size(), "evaluate");
  const std::size_t k = b.nvars();
  std::vector<unsigned> max_deg(k, 0);
  for (const auto& [idx, c] : b.terms()) {
    for (std::size_t j = 0; j < k; ++j) max_deg[j] = std::max(max_deg[j], idx[j]);
  }
  // values[j][n] = (point_j choose n) by the recurrence C(p,n) = C(p,n-1)(p-n+1)/n
  std::vector<std::vector<Scalar>> values(k);
  for (std::size_t j = 0; j < k; ++j) {
    values[j].resize(max_deg[j] + 1);
    values[j][0] = 1;
    for (unsigned n = 1; n <= max_deg[j]; ++n) {
      Scalar v = values[j][n - 1] * (point[j] - (n - 1));
      if constexpr (std::is_same_v<Scalar, Integer>) {
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), n);
      } else {
        v /= n;
      }
      values[j][n] = v;
    }
  }
  Scalar sum = 0;
  for (const auto& [idx, c] : b.terms()) {
    Scalar t = c;
    for (std::size_t j = 0; j < k; ++j) {
      if (idx[j] != 0) t *= values[j][idx[j]];
    }
    sum += t;
  }
  return sum;
}

}  // namespace

Integer evaluate(const BinomialPoly& b, std::span<const Integer> point) {
  return evaluate_impl<Integer>(b, point);
}

Rational evaluate(const BinomialPoly& b, std::span<const Rational> point) {
  return evaluate_impl<Rational>(b, point);
}

// ---------------------------------------------------------------- ring ops

const std::vector<Integer>& binomial_product_table(unsigned m, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::vector<Integer>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({m, n});
  if (inserted) {
    auto& row = it->second;
    row.assign(m + n + 1, 0);
    for (unsigned k = 0; k <= std::min(m, n); ++k) {
      row[m + n - k] = factorial(m + n - k) / (factorial(k) * factorial(m - k) * factorial(n - k));
    }
  }
  return it->second;
}

BinomialPoly add(const BinomialPoly& a, const BinomialPoly& b) { return a + b; }

BinomialPoly mul(const BinomialPoly& a, const BinomialPoly& b) {
  require_arity(a.nvars(), b.nvars(), "multiply");
  const std::size_t k = a.nvars();
  BinomialPoly::TermMap out;
  // Per variable, (x choose p)(x choose q) expands over indices max(p,q)..p+q.
  std::vector<std::pair<MultiIndex, Integer>> partial, next;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      partial.assign(1, {MultiIndex{}, ca * cb});
      for (std::size_t j = 0; j < k; ++j) {
        next.clear();
        if (ia[j] == 0 || ib[j] == 0) {
          const unsigned e = ia[j] + ib[j];
          for (auto& [idx, c] : partial) {
            idx.push_back(e);
            next.emplace_back(std::move(idx), std::move(c));
          }
        } else {
          const auto& row = binomial_product_table(ia[j], ib[j]);
          for (const auto& [idx, c] : partial) {
            for (unsigned e = std::max(ia[j], ib[j]); e < row.size(); ++e) {
              MultiIndex ext = idx;
              ext.push_back(e);
              next.emplace_back(std::move(ext), c * row[e]);
            }
          }
        }
        std::swap(partial, next);
      }
      for (const auto& [idx, c] : partial) add_into(out, idx, c);
    }
  }
  return BinomialPoly(k, std::move(out));
}

BinomialPoly binomial_of(const BinomialPoly& g, unsigned n) {
  BinomialPoly r = BinomialPoly::constant(g.nvars(), 1);
  for (unsigned i = 1; i <= n; ++i) {
    // (g choose i) = (g choose i-1) * (g - (i-1)) / i, exact in the Z-basis
    r = mul(r, g - BinomialPoly::constant(g.nvars(), i - 1)).divided_exactly(i);
  }
  return r;
}

namespace {

class Composer {
 public:
  Composer(std::span<const BinomialPoly> gs, std::size_t nvars) : gs_(gs), nvars_(nvars) {
    for (const auto& g : gs_) require_arity(nvars_, g.nvars(), "compose inner");
    powers_.resize(gs_.size());
  }

  BinomialPoly apply(const BinomialPoly& f) {
    require_arity(gs_.size(), f.nvars(), "compose outer");
    BinomialPoly out(nvars_);
    for (const auto& [idx, c] : f.terms()) {
      BinomialPoly term = BinomialPoly::constant(nvars_, c);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] == 0) continue;
        term = mul(term, power(j, idx[j]));
      }
      out += term;
    }
    return out;
  }

 private:
  const BinomialPoly& power(std::size_t j, unsigned n) {
    auto& cache = powers_[j];
    if (cache.empty()) cache.push_back(BinomialPoly::constant(nvars_, 1));
    while (cache.size() <= n) {
      const unsigned i = static_cast<unsigned>(cache.size());
      cache.push_back(mul(cache.back(), gs_[j] - BinomialPoly::constant(nvars_, i - 1))
                          .divided_exactly(i));
    }
    return cache[n];
  }

  std::span<const BinomialPoly> gs_;
  std::size_t nvars_;
  std::vector<std::vector<BinomialPoly>> powers_;
};

}  // namespace

BinomialPoly compose(const BinomialPoly& f, std::span<const BinomialPoly> gs) {
  const std::size_t nvars = gs.empty() ? 0 : gs.front().nvars();
  return Composer(gs, nvars).apply(f);
}

PolyMap compose(const PolyMap& outer, const PolyMap& inner, std::size_t inner_nvars) {
  Composer composer(inner, inner_nvars);
  PolyMap out;
  out.reserve(outer.size());
  for (const auto& f : outer) out.push_back(composer.apply(f));
  return out;
}

BinomialPoly finite_difference(const BinomialPoly& b, std::size_t var) {
  if (var >= b.nvars()) throw Error(ErrorCode::ArityMismatch, "difference variable out of range");
  BinomialPoly::TermMap out;
  for (const auto& [idx, c] : b.terms()) {
    if (idx[var] == 0) continue;
    MultiIndex lowered = idx;
    --lowered[var];
    out.emplace(std::move(lowered), c);
  }
  return BinomialPoly(b.nvars(), std::move(out));
}

std::map<MultiIndex, Integer, GradedLexLess> newton_coefficients(const IntegerFunction& f,
                                                                 const MultiIndex& max_index) {
  const std::size_t k = max_index.size();
  std::vector<std::size_t> extent(k), stride(k);
  std::size_t total = 1;
  for (std::size_t j = k; j-- > 0;) {
    extent[j] = max_index[j] + 1;
    stride[j] = total;
    total *= extent[j];
  }
  auto unflatten = [&](std::size_t flat) {
    MultiIndex idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = static_cast<unsigned>((flat / stride[j]) % extent[j]);
    return idx;
  };

  std::vector<Integer> grid(total);
  std::vector<Integer> point(k);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const MultiIndex idx = unflatten(flat);
    for (std::size_t j = 0; j < k; ++j) point[j] = idx[j];
    grid[flat] = f(point);
  }
  // Forward differences along each axis, in place.
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      if ((flat / stride[j]) % extent[j] != 0) continue;  // start of a line
      for (std::size_t step = 1; step < extent[j]; ++step) {
        for (std::size_t i = extent[j] - 1; i >= step; --i) {
          grid[flat + i * stride[j]] -= grid[flat + (i - 1) * stride[j]];
        }
      }
    }
  }
  std::map<MultiIndex, Integer, GradedLexLess> out;
  for (std::size_t flat = 0; flat < total; ++flat) out.emplace(unflatten(flat), grid[flat]);
  return out;
}

}  // namespace numa
