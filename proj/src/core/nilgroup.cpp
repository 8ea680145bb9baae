#include "numa/nilgroup.hpp"

#include <algorithm>
#include <set>

namespace numa {

namespace {

using PolyMatrix = std::vector<std::vector<BinomialPoly>>;

PolyMatrix poly_multiply(const PolyMatrix& a, const PolyMatrix& b, std::size_t nvars) {
  const std::size_t n = a.size();
  PolyMatrix c(n, std::vector<BinomialPoly>(n, BinomialPoly(nvars)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!b[k][j].is_zero()) c[i][j] += mul(a[i][k], b[k][j]);
      }
    }
  }
  return c;
}

// Strictly upper part of a generic unipotent matrix, variables offset by `first`.
PolyMatrix generic_nilpotent(unsigned n, std::size_t nvars, std::size_t first) {
  PolyMatrix N(n, std::vector<BinomialPoly>(n, BinomialPoly(nvars)));
  const auto pos = malcev_positions(n);
  for (std::size_t t = 0; t < pos.size(); ++t) {
    N[pos[t].first][pos[t].second] = BinomialPoly::variable(nvars, first + t);
  }
  return N;
}

GroupElement unit_vector(std::size_t d, std::size_t j) {
  GroupElement e(d, 0);
  e[j] = 1;
  return e;
}

}  // namespace

std::vector<std::pair<unsigned, unsigned>> malcev_positions(unsigned n) {
  std::vector<std::pair<unsigned, unsigned>> pos;
  for (unsigned dist = 1; dist < n; ++dist) {
    for (unsigned i = 0; i + dist < n; ++i) pos.emplace_back(i, i + dist);
  }
  return pos;
}

MalcevGroup unipotent_group(unsigned n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "unipotent_group needs n >= 2");
  const auto pos = malcev_positions(n);
  const std::size_t d = pos.size();

  MalcevGroup G;
  G.law.dim = d;
  G.law.unit.assign(d, 0);
  // (1 + X)(1 + Y) = 1 + X + Y + XY
  const PolyMatrix X = generic_nilpotent(n, 2 * d, 0);
  const PolyMatrix Y = generic_nilpotent(n, 2 * d, d);
  const PolyMatrix XY = poly_multiply(X, Y, 2 * d);
  for (const auto& [i, j] : pos) G.law.mult.push_back(X[i][j] + Y[i][j] + XY[i][j]);

  // (1 + N)^{-1} = sum_k (-N)^k, finite since N^n = 0
  PolyMatrix minus_N = generic_nilpotent(n, d, 0);
  for (auto& row : minus_N) {
    for (auto& e : row) e = -e;
  }
  PolyMatrix power = minus_N;
  PolyMatrix inv = minus_N;
  for (unsigned k = 2; k < n; ++k) {
    power = poly_multiply(power, minus_N, d);
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned j = 0; j < n; ++j) inv[i][j] += power[i][j];
    }
  }
  for (const auto& [i, j] : pos) G.law.inv.push_back(inv[i][j]);

  for (unsigned i = 0; i + 1 < n; ++i) G.generators.push_back(unit_vector(d, i));
  return G;
}

MalcevGroup heisenberg() { return unipotent_group(3); }

MalcevGroup free_abelian(std::size_t d) {
  MalcevGroup G;
  G.law = additive_group(d);
  for (std::size_t j = 0; j < d; ++j) G.generators.push_back(unit_vector(d, j));
  return G;
}

std::vector<GroupElement> word_ball(const MalcevGroup& G, unsigned radius) {
  std::vector<GroupElement> letters;
  for (const auto& s : G.generators) {
    letters.push_back(s);
    letters.push_back(G.law.inverse(s));
  }
  std::set<GroupElement> seen{G.law.unit};
  std::vector<GroupElement> frontier{G.law.unit};
  for (unsigned r = 0; r < radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier) {
      for (const auto& s : letters) {
        auto h = G.law.multiply(g, s);
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

GroupAxiomReport group_axioms(const MalcevGroup& G, unsigned word_radius, unsigned coordinate_radius) {
  GroupAxiomReport rep;
  rep.law_failure = group_law_failure(G.law);
  rep.word_radius = word_radius;
  rep.coordinate_radius = coordinate_radius;
  if (rep.law_failure || word_radius == 0) return rep;

  rep.generators_checked = true;
  const auto ball = word_ball(G, word_radius);
  const std::set<GroupElement> words(ball.begin(), ball.end());
  const long c = static_cast<long>(coordinate_radius);
  GroupElement x(G.dim(), -c);
  rep.generators_ok = true;
  for (;;) {
    if (!words.count(x)) {
      rep.generators_ok = false;
      break;
    }
    std::size_t j = 0;
    while (j < x.size() && x[j] == c) x[j++] = -c;
    if (j == x.size()) break;
    x[j] += 1;
  }
  return rep;
}

// ---------------------------------------------------------------- matrices

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  RationalMatrix c(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) c(i, j) += (*this)(i, k) * o(k, j);
    }
  }
  return c;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix c = *this;
  for (std::size_t t = 0; t < a_.size(); ++t) c.a_[t] += o.a_[t];
  return c;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  RationalMatrix c = *this;
  for (std::size_t t = 0; t < a_.size(); ++t) c.a_[t] -= o.a_[t];
  return c;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
  RationalMatrix c = *this;
  for (auto& x : c.a_) x *= s;
  return c;
}

bool RationalMatrix::is_strictly_upper() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if ((*this)(i, j) != 0) return false;
    }
  }
  return true;
}

bool RationalMatrix::is_unipotent() const {
  return (*this - identity(n_)).is_strictly_upper();
}

RationalMatrix from_coordinates(unsigned n, const std::vector<Rational>& coords) {
  const auto pos = malcev_positions(n);
  if (coords.size() != pos.size()) {
    throw Error(ErrorCode::ArityMismatch, "unipotent " + std::to_string(n) + "x" + std::to_string(n) +
                                              " matrices have " + std::to_string(pos.size()) + " coordinates");
  }
  RationalMatrix g = RationalMatrix::identity(n);
  for (std::size_t t = 0; t < pos.size(); ++t) g(pos[t].first, pos[t].second) = coords[t];
  return g;
}

std::vector<Rational> to_coordinates(const RationalMatrix& g) {
  std::vector<Rational> out;
  for (const auto& [i, j] : malcev_positions(static_cast<unsigned>(g.size()))) out.push_back(g(i, j));
  return out;
}

RationalMatrix matrix_log(const RationalMatrix& g) {
  if (!g.is_unipotent()) throw Error(ErrorCode::InvalidArgument, "matrix_log needs a unipotent matrix");
  const std::size_t n = g.size();
  const RationalMatrix N = g - RationalMatrix::identity(n);
  RationalMatrix sum(n), power = N;
  for (std::size_t k = 1; k < n; ++k) {
    const Rational c(k % 2 ? 1 : -1, static_cast<long>(k));
    sum = sum + power * c;
    power = power * N;
  }
  return sum;
}

RationalMatrix matrix_exp(const RationalMatrix& N) {
  if (!N.is_strictly_upper()) throw Error(ErrorCode::InvalidArgument, "matrix_exp needs a nilpotent upper matrix");
  const std::size_t n = N.size();
  RationalMatrix sum = RationalMatrix::identity(n), power = RationalMatrix::identity(n);
  Integer fact = 1;
  for (std::size_t k = 1; k < n; ++k) {
    power = power * N;
    fact *= static_cast<unsigned long>(k);
    sum = sum + power * Rational(1, fact);
  }
  return sum;
}

RationalMatrix power(const RationalMatrix& g, const Rational& r) { return matrix_exp(matrix_log(g) * r); }

std::vector<std::vector<PadicApprox>> power_padic(const RationalMatrix& g, const PadicApprox& r) {
  if (!g.is_unipotent()) throw Error(ErrorCode::InvalidArgument, "power_padic needs a unipotent matrix");
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g(i, j).get_den() != 1) throw Error(ErrorCode::InvalidArgument, "power_padic needs an integral matrix");
    }
  }
  const RationalMatrix N = g - RationalMatrix::identity(n);
  std::vector<RationalMatrix> powers{RationalMatrix::identity(n)};
  for (std::size_t k = 1; k < n; ++k) powers.push_back(powers.back() * N);

  std::vector<std::optional<PadicApprox>> coeff(n);
  std::vector<std::vector<PadicApprox>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Integer sum = 0;
      unsigned precision = r.precision();
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& e = powers[k](i, j);
        if (e == 0) continue;
        if (!coeff[k]) coeff[k] = binom(r, static_cast<unsigned>(k));
        sum += coeff[k]->residue() * e.get_num();
        precision = std::min(precision, coeff[k]->precision());
      }
      out[i].emplace_back(r.prime(), sum, precision);
    }
  }
  return out;
}

// ---------------------------------------------------------------- functions on G

std::vector<std::pair<BinomialPoly, BinomialPoly>> comultiply(const BinomialPoly& f, const MalcevGroup& G) {
  const std::size_t d = G.dim();
  if (f.nvars() != d) {
    throw Error(ErrorCode::ArityMismatch, "function has " + std::to_string(f.nvars()) + " variables, group has dim " +
                                              std::to_string(d));
  }
  const BinomialPoly F = compose(PolyMap{f}, G.law.mult, 2 * d)[0];
  std::map<MultiIndex, BinomialPoly::TermMap, GradedLexLess> split;
  for (const auto& [idx, c] : F.terms()) {
    MultiIndex left(idx.begin(), idx.begin() + static_cast<long>(d));
    MultiIndex right(idx.begin() + static_cast<long>(d), idx.end());
    split[std::move(left)].emplace(std::move(right), c);
  }
  std::vector<std::pair<BinomialPoly, BinomialPoly>> out;
  for (auto& [left, terms] : split) out.emplace_back(BinomialPoly::monomial(left), BinomialPoly(d, std::move(terms)));
  return out;
}

BinomialPoly left_translate(const BinomialPoly& f, const MalcevGroup& G, const GroupElement& s) {
  const std::size_t d = G.dim();
  PolyMap inner;
  for (std::size_t j = 0; j < d; ++j) inner.push_back(BinomialPoly::constant(d, s[j]));
  for (std::size_t j = 0; j < d; ++j) inner.push_back(BinomialPoly::variable(d, j));
  const PolyMap translated = compose(G.law.mult, inner, d);
  return compose(PolyMap{f}, translated, d)[0];
}

namespace {

// A sublattice of Z^m given by a basis, with exact coordinates.
struct Lattice {
  IntMatrix basis;  // m x r
  IntMatrix U;
  std::vector<Integer> diag;

  explicit Lattice(const IntMatrix& spanning) {
    if (spanning.rows() == 0 || spanning.cols() == 0) {
      basis = IntMatrix(spanning.rows(), 0);
      U = IntMatrix::identity(spanning.rows());
      return;
    }
    const auto snf = smith_normal_form(spanning);
    const IntMatrix AV = spanning * snf.V;
    basis = AV.block(0, 0, spanning.rows(), snf.rank);
    U = snf.U;
    for (std::size_t i = 0; i < snf.rank; ++i) diag.push_back(snf.D(i, i));
  }

  std::size_t rank() const { return diag.size(); }

  std::vector<Integer> coordinates(const std::vector<Integer>& v) const {
    std::vector<Integer> w(U.rows(), 0);
    for (std::size_t i = 0; i < U.rows(); ++i) {
      for (std::size_t j = 0; j < U.cols(); ++j) w[i] += U(i, j) * v[j];
    }
    std::vector<Integer> c(rank());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i < rank()) {
        if (!mpz_divisible_p(w[i].get_mpz_t(), diag[i].get_mpz_t())) {
          throw Error(ErrorCode::InconsistentData, "vector outside the translate module");
        }
        c[i] = w[i] / diag[i];
      } else if (w[i] != 0) {
        throw Error(ErrorCode::InconsistentData, "vector outside the translate module");
      }
    }
    return c;
  }
};

std::size_t column_rank(const IntMatrix& M) {
  if (M.cols() == 0 || M.rows() == 0) return 0;
  return smith_normal_form(M).rank;
}

IntMatrix column_basis(const IntMatrix& M) {
  if (M.cols() == 0 || M.rows() == 0) return IntMatrix(M.rows(), 0);
  const auto snf = smith_normal_form(M);
  return (M * snf.V).block(0, 0, M.rows(), snf.rank);
}

}  // namespace

PassiCertificate passi_degree(const BinomialPoly& f, const MalcevGroup& G) {
  const std::size_t d = G.dim();
  PassiCertificate cert;
  const auto pairs = comultiply(f, G);

  // monomial coordinates for the right factors
  std::map<MultiIndex, std::size_t, GradedLexLess> index;
  for (const auto& [left, right] : pairs) {
    for (const auto& [idx, c] : right.terms()) index.emplace(idx, 0);
  }
  std::vector<MultiIndex> monomials;
  for (auto& [idx, pos] : index) {
    pos = monomials.size();
    monomials.push_back(idx);
  }
  const std::size_t m = monomials.size();
  auto to_vector = [&](const BinomialPoly& b) {
    std::vector<Integer> v(m, 0);
    for (const auto& [idx, c] : b.terms()) {
      const auto it = index.find(idx);
      if (it == index.end()) throw Error(ErrorCode::InconsistentData, "translate leaves the translate module");
      v[it->second] = c;
    }
    return v;
  };

  IntMatrix spanning(m, pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto v = to_vector(pairs[t].second);
    for (std::size_t i = 0; i < m; ++i) spanning(i, t) = v[i];
  }
  const Lattice T(spanning);
  const std::size_t r = T.rank();
  for (std::size_t c = 0; c < r; ++c) {
    BinomialPoly::TermMap terms;
    for (std::size_t i = 0; i < m; ++i) {
      if (T.basis(i, c) != 0) terms.emplace(monomials[i], T.basis(i, c));
    }
    cert.module_basis.emplace_back(d, std::move(terms));
  }

  for (const auto& s : G.generators) {
    IntMatrix A(r, r);
    for (std::size_t c = 0; c < r; ++c) {
      const auto coords = T.coordinates(to_vector(left_translate(cert.module_basis[c], G, s)));
      for (std::size_t i = 0; i < r; ++i) A(i, c) = coords[i];
    }
    cert.actions.push_back(std::move(A));
  }

  const IntMatrix id = IntMatrix::identity(r);
  auto augment = [&](const IntMatrix& W) {
    IntMatrix next(r, W.cols() * cert.actions.size());
    for (std::size_t g = 0; g < cert.actions.size(); ++g) {
      const IntMatrix image = (cert.actions[g] - id) * W;
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t c = 0; c < W.cols(); ++c) next(i, g * W.cols() + c) = image(i, c);
      }
    }
    return column_basis(next);
  };

  IntMatrix M = id;
  for (unsigned step = 0;; ++step) {
    const std::size_t rk = column_rank(M);
    cert.module_chain_ranks.push_back(rk);
    if (rk == 0) break;
    if (step > r) {
      throw Error(ErrorCode::NonNilpotentAction,
                  "augmentation chain did not reach zero within " + std::to_string(r + 1) + " steps");
    }
    M = augment(M);
  }

  cert.f_coordinates = f.is_zero() ? std::vector<Integer>(r, 0) : T.coordinates(to_vector(f));
  IntMatrix W(r, 1);
  for (std::size_t i = 0; i < r; ++i) W(i, 0) = cert.f_coordinates[i];
  W = column_basis(W);
  for (unsigned step = 0;; ++step) {
    const std::size_t rk = column_rank(W);
    cert.chain_ranks.push_back(rk);
    if (rk == 0) {
      cert.degree = step;
      return cert;
    }
    if (step > r) throw Error(ErrorCode::NonNilpotentAction, "f is not annihilated by a power of I");
    W = augment(W);
  }
}

Integer evaluate_on_product(const BinomialPoly& f, const MalcevGroup& G, const std::vector<GroupElement>& us,
                            const GroupElement& h) {
  const std::size_t k = us.size();
  Integer total = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    GroupElement g = G.law.unit;
    std::size_t taken = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        g = G.law.multiply(g, us[i]);
        ++taken;
      }
    }
    g = G.law.multiply(g, h);
    const Integer v = evaluate(f, std::span<const Integer>(g));
    if ((k - taken) % 2) {
      total -= v;
    } else {
      total += v;
    }
  }
  return total;
}

PassiCrossCheck passi_cross_check(const BinomialPoly& f, const MalcevGroup& G, unsigned degree, unsigned samples,
                                  unsigned radius, std::uint64_t seed) {
  PassiCrossCheck out;
  out.samples = samples;
  std::vector<GroupElement> letters;
  for (const auto& s : G.generators) {
    letters.push_back(s);
    letters.push_back(G.law.inverse(s));
  }
  const auto ball = word_ball(G, radius);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_letter(0, letters.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_ball(0, ball.size() - 1);
  auto sample = [&](unsigned k) {
    std::vector<GroupElement> us;
    for (unsigned i = 0; i < k; ++i) us.push_back(letters[pick_letter(rng)]);
    return evaluate_on_product(f, G, us, ball[pick_ball(rng)]);
  };
  for (unsigned s = 0; s < samples; ++s) {
    if (sample(degree) != 0) ++out.failures_at_degree;
  }
  if (degree > 0) {
    for (unsigned s = 0; s < samples && !out.witness_below; ++s) out.witness_below = sample(degree - 1) != 0;
  }
  return out;
}

}  // namespace numa
