#include "numa/simplicial.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <thread>

namespace numa {

namespace {

PolyMap variables(std::size_t nvars, std::size_t first, std::size_t count) {
  PolyMap out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(BinomialPoly::variable(nvars, first + j));
  return out;
}

PolyMap constants(std::size_t nvars, const std::vector<Integer>& values) {
  PolyMap out;
  for (const auto& v : values) out.push_back(BinomialPoly::constant(nvars, v));
  return out;
}

PolyMap concat(PolyMap a, const PolyMap& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

PolyMap zeros(std::size_t count, std::size_t nvars) { return PolyMap(count, BinomialPoly(nvars)); }

std::vector<Integer> apply_map(const PolyMap& m, const std::vector<Integer>& point) {
  std::vector<Integer> out;
  out.reserve(m.size());
  for (const auto& p : m) out.push_back(evaluate(p, std::span<const Integer>(point)));
  return out;
}

// Multi-indices of length k with |alpha| = d in lexicographic order.
void indices_of_degree(std::size_t k, unsigned d, std::vector<MultiIndex>& out) {
  if (k == 0) {
    if (d == 0) out.emplace_back();
    return;
  }
  MultiIndex cur(k, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
    if (pos + 1 == k) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), GradedLexLess{});
}

}  // namespace

// ---------------------------------------------------------------- groups

std::vector<Integer> NumericalGroup::multiply(const std::vector<Integer>& x, const std::vector<Integer>& y) const {
  std::vector<Integer> xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  return apply_map(mult, xy);
}

std::vector<Integer> NumericalGroup::inverse(const std::vector<Integer>& x) const { return apply_map(inv, x); }

NumericalGroup additive_group(std::size_t dim) {
  NumericalGroup G;
  G.dim = dim;
  for (std::size_t j = 0; j < dim; ++j) {
    G.mult.push_back(BinomialPoly::variable(2 * dim, j) + BinomialPoly::variable(2 * dim, dim + j));
    G.inv.push_back(-BinomialPoly::variable(dim, j));
  }
  G.unit.assign(dim, 0);
  return G;
}

std::optional<std::string> group_law_failure(const NumericalGroup& G) {
  const std::size_t d = G.dim;
  if (G.mult.size() != d || G.inv.size() != d || G.unit.size() != d) return "component count differs from dim";
  for (const auto& p : G.mult) {
    if (p.nvars() != 2 * d) return "multiplication must take 2*dim variables";
  }
  for (const auto& p : G.inv) {
    if (p.nvars() != d) return "inverse must take dim variables";
  }
  const std::size_t n3 = 3 * d;
  const PolyMap x3 = variables(n3, 0, d), y3 = variables(n3, d, d), z3 = variables(n3, 2 * d, d);
  const PolyMap xy = compose(G.mult, concat(x3, y3), n3);
  const PolyMap yz = compose(G.mult, concat(y3, z3), n3);
  if (compose(G.mult, concat(xy, z3), n3) != compose(G.mult, concat(x3, yz), n3)) return "associativity";

  const PolyMap x = variables(d, 0, d);
  const PolyMap e = constants(d, G.unit);
  if (compose(G.mult, concat(e, x), d) != x) return "left unit";
  if (compose(G.mult, concat(x, e), d) != x) return "right unit";
  if (compose(G.mult, concat(G.inv, x), d) != e) return "left inverse";
  if (compose(G.mult, concat(x, G.inv), d) != e) return "right inverse";
  return std::nullopt;
}

// ---------------------------------------------------------------- objects

const PolyMap& NumSimplicialObject::face(unsigned n, unsigned i) const {
  const auto it = faces.find({n, i});
  if (it == faces.end()) {
    throw Error(ErrorCode::InvalidArgument, "no face d_" + std::to_string(i) + " at level " + std::to_string(n));
  }
  return it->second;
}

const PolyMap& NumSimplicialObject::degeneracy(unsigned n, unsigned i) const {
  const auto it = degeneracies.find({n, i});
  if (it == degeneracies.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "no degeneracy s_" + std::to_string(i) + " at level " + std::to_string(n));
  }
  return it->second;
}

std::vector<IdentityViolation> check_simplicial_identities(const NumSimplicialObject& X) {
  std::vector<IdentityViolation> out;
  auto expect = [&](bool ok, const char* identity, unsigned n, unsigned i, unsigned j) {
    if (!ok) out.push_back({identity, n, i, j});
  };
  const unsigned N = X.n_max;
  auto rank = [&](unsigned n) { return X.level_ranks.at(n); };
  for (unsigned n = 0; n <= N; ++n) {
    for (unsigned i = 0; n >= 1 && i <= n; ++i) {
      const auto& f = X.face(n, i);
      bool ok = f.size() == rank(n - 1);
      for (const auto& p : f) ok = ok && p.nvars() == rank(n);
      expect(ok, "face shape", n, i, i);
    }
    for (unsigned i = 0; n < N && i <= n; ++i) {
      const auto& s = X.degeneracy(n, i);
      bool ok = s.size() == rank(n + 1);
      for (const auto& p : s) ok = ok && p.nvars() == rank(n);
      expect(ok, "degeneracy shape", n, i, i);
    }
  }
  if (!out.empty()) return out;

  for (unsigned n = 2; n <= N; ++n) {
    for (unsigned j = 1; j <= n; ++j) {
      for (unsigned i = 0; i < j; ++i) {
        expect(compose(X.face(n - 1, i), X.face(n, j), rank(n)) ==
                   compose(X.face(n - 1, j - 1), X.face(n, i), rank(n)),
               "d_i d_j = d_{j-1} d_i", n, i, j);
      }
    }
  }
  for (unsigned n = 0; n + 2 <= N; ++n) {
    for (unsigned j = 0; j <= n; ++j) {
      for (unsigned i = 0; i <= j; ++i) {
        expect(compose(X.degeneracy(n + 1, i), X.degeneracy(n, j), rank(n)) ==
                   compose(X.degeneracy(n + 1, j + 1), X.degeneracy(n, i), rank(n)),
               "s_i s_j = s_{j+1} s_i", n, i, j);
      }
    }
  }
  for (unsigned n = 0; n + 1 <= N; ++n) {
    const PolyMap id = variables(rank(n), 0, rank(n));
    for (unsigned j = 0; j <= n; ++j) {
      for (unsigned i = 0; i <= n + 1; ++i) {
        const PolyMap lhs = compose(X.face(n + 1, i), X.degeneracy(n, j), rank(n));
        if (i < j) {
          expect(lhs == compose(X.degeneracy(n - 1, j - 1), X.face(n, i), rank(n)), "d_i s_j = s_{j-1} d_i", n, i,
                 j);
        } else if (i == j || i == j + 1) {
          expect(lhs == id, "d_i s_j = id", n, i, j);
        } else {
          expect(lhs == compose(X.degeneracy(n - 1, j), X.face(n, i - 1), rank(n)), "d_i s_j = s_j d_{i-1}", n, i,
                 j);
        }
      }
    }
  }
  return out;
}

NumSimplicialObject k_z_1(unsigned n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "k_z_1 needs n_max >= 1");
  NumSimplicialObject X;
  X.n_max = n_max;
  for (unsigned n = 0; n <= n_max; ++n) X.level_ranks.push_back(n);
  for (unsigned n = 1; n <= n_max; ++n) {
    X.faces[{n, 0}] = variables(n, 1, n - 1);
    X.faces[{n, n}] = variables(n, 0, n - 1);
    for (unsigned i = 1; i < n; ++i) {
      PolyMap f = variables(n, 0, i - 1);
      f.push_back(BinomialPoly::variable(n, i - 1) + BinomialPoly::variable(n, i));
      const PolyMap rest = variables(n, i + 1, n - i - 1);
      X.faces[{n, i}] = concat(std::move(f), rest);
    }
  }
  for (unsigned n = 0; n < n_max; ++n) {
    for (unsigned i = 0; i <= n; ++i) {
      PolyMap s = variables(n, 0, i);
      s.push_back(BinomialPoly(n));
      X.degeneracies[{n, i}] = concat(std::move(s), variables(n, i, n - i));
    }
  }
  return X;
}

NumSimplicialObject classifying_space(const NumericalGroup& G, unsigned n_max) {
  if (const auto failure = group_law_failure(G)) throw Error(ErrorCode::NotAGroup, *failure);
  const std::size_t d = G.dim;
  NumSimplicialObject X;
  X.n_max = n_max;
  for (unsigned n = 0; n <= n_max; ++n) X.level_ranks.push_back(n * d);
  for (unsigned n = 1; n <= n_max; ++n) {
    const std::size_t nv = n * d;
    X.faces[{n, 0}] = variables(nv, d, (n - 1) * d);
    X.faces[{n, n}] = variables(nv, 0, (n - 1) * d);
    for (unsigned i = 1; i < n; ++i) {
      // blocks i-1 and i (0-based) are multiplied
      PolyMap f = variables(nv, 0, (i - 1) * d);
      f = concat(std::move(f), compose(G.mult, variables(nv, (i - 1) * d, 2 * d), nv));
      X.faces[{n, i}] = concat(std::move(f), variables(nv, (i + 1) * d, (n - i - 1) * d));
    }
  }
  for (unsigned n = 0; n < n_max; ++n) {
    const std::size_t nv = n * d;
    for (unsigned i = 0; i <= n; ++i) {
      PolyMap s = concat(variables(nv, 0, i * d), constants(nv, G.unit));
      X.degeneracies[{n, i}] = concat(std::move(s), variables(nv, i * d, (n - i) * d));
    }
  }
  return X;
}

namespace {

PolyMap linear_map(const IntMatrix& M) {
  PolyMap out;
  for (std::size_t a = 0; a < M.rows(); ++a) {
    BinomialPoly p(M.cols());
    for (std::size_t b = 0; b < M.cols(); ++b) {
      if (M(a, b) != 0) p += BinomialPoly::variable(M.cols(), b) * M(a, b);
    }
    out.push_back(std::move(p));
  }
  return out;
}

IntMatrix linear_matrix(const PolyMap& m, std::size_t nvars) {
  IntMatrix M(m.size(), nvars);
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (const auto& [idx, c] : m[a].terms()) {
      if (total_degree(idx) != 1) throw Error(ErrorCode::NonAdditiveFaces, "map is not linear");
      const auto j = static_cast<std::size_t>(std::find(idx.begin(), idx.end(), 1u) - idx.begin());
      M(a, j) = c;
    }
  }
  return M;
}

}  // namespace

NumSimplicialObject as_numerical(const SimplicialAbGroup& A) {
  NumSimplicialObject X;
  X.n_max = A.n_max;
  X.level_ranks = A.level_ranks;
  for (const auto& [key, M] : A.faces) X.faces[key] = linear_map(M);
  for (const auto& [key, M] : A.degeneracies) X.degeneracies[key] = linear_map(M);
  return X;
}

SimplicialAbGroup as_abelian(const NumSimplicialObject& X) {
  SimplicialAbGroup A;
  A.n_max = X.n_max;
  A.level_ranks = X.level_ranks;
  for (const auto& [key, m] : X.faces) A.faces[key] = linear_matrix(m, X.level_ranks.at(key.first));
  for (const auto& [key, m] : X.degeneracies) A.degeneracies[key] = linear_matrix(m, X.level_ranks.at(key.first));
  return A;
}

// ---------------------------------------------------------------- cochains

PolyMap coboundary(const NumSimplicialObject& X, unsigned n, const PolyMap& fs) {
  if (n + 1 > X.n_max) throw Error(ErrorCode::TruncationTooSmall, "coboundary needs level n+1");
  const std::size_t out_vars = X.level_ranks[n + 1];
  PolyMap out(fs.size(), BinomialPoly(out_vars));
  for (const auto& f : fs) {
    if (f.nvars() != X.level_ranks[n]) throw Error(ErrorCode::ArityMismatch, "cochain arity differs from level rank");
  }
  for (unsigned i = 0; i <= n + 1; ++i) {
    const PolyMap pulled = compose(fs, X.face(n + 1, i), out_vars);
    for (std::size_t k = 0; k < fs.size(); ++k) {
      if (i % 2) {
        out[k] -= pulled[k];
      } else {
        out[k] += pulled[k];
      }
    }
  }
  return out;
}

BinomialPoly coboundary(const NumSimplicialObject& X, unsigned n, const BinomialPoly& f) {
  return coboundary(X, n, PolyMap{f}).front();
}

bool is_grading_preserving(const PolyMap& m, std::size_t nvars) {
  std::vector<bool> used(nvars, false);
  for (const auto& p : m) {
    if (p.nvars() != nvars) return false;
    for (const auto& [idx, c] : p.terms()) {
      if (c != 1 || total_degree(idx) != 1) return false;
      const auto j = static_cast<std::size_t>(std::find(idx.begin(), idx.end(), 1u) - idx.begin());
      if (used[j]) return false;
      used[j] = true;
    }
  }
  return true;
}

namespace {

using Coordinates = std::map<MultiIndex, std::size_t>;

Coordinates coordinates_of(const std::vector<MultiIndex>& basis) {
  Coordinates c;
  for (std::size_t k = 0; k < basis.size(); ++k) c.emplace(basis[k], k);
  return c;
}

// Columns are the images of `polys` written in `coords`; any term outside the
// basis means the map left the graded piece.
IntMatrix coordinate_matrix(const PolyMap& polys, const Coordinates& coords) {
  IntMatrix M(coords.size(), polys.size());
  for (std::size_t k = 0; k < polys.size(); ++k) {
    for (const auto& [idx, c] : polys[k].terms()) {
      const auto it = coords.find(idx);
      if (it == coords.end()) throw Error(ErrorCode::NonAdditiveFaces, "map does not preserve the grading");
      M(it->second, k) = c;
    }
  }
  return M;
}

PolyMap basis_polys(const std::vector<MultiIndex>& basis, std::size_t nvars) {
  PolyMap out;
  out.reserve(basis.size());
  for (const auto& idx : basis) {
    BinomialPoly::TermMap t;
    t.emplace(idx, 1);
    out.emplace_back(nvars, std::move(t));
  }
  return out;
}

}  // namespace

std::vector<GradedCochainPiece> graded_pieces(const NumSimplicialObject& X, unsigned d, bool normalized) {
  const unsigned N = X.n_max;
  std::vector<GradedCochainPiece> pieces(N + 1);
  std::vector<Coordinates> coords(N + 1);
  std::vector<SmithForm> kernels(N + 1);
  for (unsigned n = 0; n <= N; ++n) {
    auto& P = pieces[n];
    P.n = n;
    P.d = d;
    indices_of_degree(X.level_ranks[n], d, P.basis);
    coords[n] = coordinates_of(P.basis);
    // f o s_i for i < n, stacked; normalized cochains are the common kernel
    const std::size_t below = n >= 1 ? pieces[n - 1].basis.size() : 0;
    IntMatrix S(normalized ? n * below : 0, P.basis.size());
    if (normalized && n >= 1) {
      const PolyMap fs = basis_polys(P.basis, X.level_ranks[n]);
      for (unsigned i = 0; i < n; ++i) {
        const IntMatrix block = coordinate_matrix(compose(fs, X.degeneracy(n - 1, i), X.level_ranks[n - 1]),
                                                  coords[n - 1]);
        for (std::size_t a = 0; a < block.rows(); ++a) {
          for (std::size_t b = 0; b < block.cols(); ++b) S(i * below + a, b) = block(a, b);
        }
      }
    }
    kernels[n] = smith_normal_form(S);
    const std::size_t k = P.basis.size() - kernels[n].rank;
    P.normalized = kernels[n].V.block(0, kernels[n].rank, P.basis.size(), k);
  }
  for (unsigned n = 0; n < N; ++n) {
    auto& P = pieces[n];
    const PolyMap fs = basis_polys(P.basis, X.level_ranks[n]);
    const IntMatrix full = coordinate_matrix(coboundary(X, n, fs), coords[n + 1]);
    const IntMatrix image = full * P.normalized;
    const auto& K = kernels[n + 1];
    const IntMatrix in_v = K.V_inv * image;
    for (std::size_t a = 0; a < K.rank; ++a) {
      for (std::size_t b = 0; b < in_v.cols(); ++b) {
        if (in_v(a, b) != 0) throw Error(ErrorCode::InconsistentData, "coboundary leaves the normalized cochains");
      }
    }
    P.coboundary = in_v.block(K.rank, 0, in_v.rows() - K.rank, in_v.cols());
  }
  pieces[N].coboundary = IntMatrix(0, pieces[N].normalized.cols());
  return pieces;
}

FinAbGroup GradedCohomology::total(unsigned n) const {
  std::size_t free = 0;
  std::vector<Integer> orders;
  for (const auto& [key, G] : pieces) {
    if (key.first != n) continue;
    free += G.free_rank;
    orders.insert(orders.end(), G.torsion.begin(), G.torsion.end());
  }
  return make_group(free, orders);
}

GradedCohomology graded_cohomology(const NumSimplicialObject& X, unsigned d_max, bool normalized,
                                   unsigned threads) {
  for (const auto& [key, m] : X.faces) {
    if (!is_grading_preserving(m, X.level_ranks.at(key.first))) {
      throw Error(ErrorCode::NonAdditiveFaces,
                  "face d_" + std::to_string(key.second) + " at level " + std::to_string(key.first) +
                      " does not preserve the grading");
    }
  }
  for (const auto& [key, m] : X.degeneracies) {
    if (!is_grading_preserving(m, X.level_ranks.at(key.first))) {
      throw Error(ErrorCode::NonAdditiveFaces,
                  "degeneracy s_" + std::to_string(key.second) + " at level " + std::to_string(key.first) +
                      " does not preserve the grading");
    }
  }
  const unsigned N = X.n_max;
  std::vector<std::map<unsigned, FinAbGroup>> per_degree(d_max + 1);
  auto work = [&](unsigned d) {
    const auto pieces = graded_pieces(X, d, normalized);
    std::map<int, std::size_t> ranks;
    std::map<int, IntMatrix> cob;
    for (unsigned n = 0; n <= N; ++n) {
      ranks[static_cast<int>(n)] = pieces[n].normalized.cols();
      if (n < N) cob[static_cast<int>(n)] = pieces[n].coboundary;
    }
    const FreeComplex C = cochain_complex(ranks, cob);
    for (unsigned n = 0; n < N; ++n) per_degree[d][n] = homology(C, static_cast<int>(n));
  };

  const unsigned workers = std::max(1u, std::min(threads, d_max + 1));
  if (workers == 1) {
    for (unsigned d = 0; d <= d_max; ++d) work(d);
  } else {
    // Largest pieces first.
    std::atomic<int> next{static_cast<int>(d_max)};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int d; (d = next.fetch_sub(1)) >= 0;) work(static_cast<unsigned>(d));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  GradedCohomology out;
  out.n_max = N;
  out.d_max = d_max;
  out.normalized = normalized;
  for (unsigned d = 0; d <= d_max; ++d) {
    for (const auto& [n, G] : per_degree[d]) out.pieces[{n, d}] = G;
  }
  return out;
}

CoboundarySolution coboundary_solve(const NumSimplicialObject& X, unsigned n, const BinomialPoly& target,
                                    BasisMode mode, unsigned d_max) {
  if (n < 1 || n > X.n_max) throw Error(ErrorCode::InvalidArgument, "target level must be in 1..n_max");
  if (target.nvars() != X.level_ranks[n]) throw Error(ErrorCode::ArityMismatch, "target arity differs from level rank");
  if (n < X.n_max && !coboundary(X, n, target).is_zero()) {
    throw Error(ErrorCode::NotACocycle, "target is not a cocycle");
  }
  const std::size_t nv = X.level_ranks[n - 1];
  CoboundarySolution sol;
  for (unsigned d = 0; d <= d_max; ++d) indices_of_degree(nv, d, sol.basis);
  PolyMap ansatz;
  for (const auto& idx : sol.basis) {
    if (mode == BasisMode::Binomial) {
      BinomialPoly::TermMap t;
      t.emplace(idx, 1);
      ansatz.emplace_back(nv, std::move(t));
    } else {
      RationalPoly::TermMap t;
      t.emplace(idx, 1);
      ansatz.push_back(from_rational_poly(RationalPoly(nv, std::move(t))));
    }
  }
  const PolyMap images = coboundary(X, n - 1, ansatz);

  std::set<MultiIndex, GradedLexLess> keys;
  for (const auto& p : images) {
    for (const auto& [idx, c] : p.terms()) keys.insert(idx);
  }
  for (const auto& [idx, c] : target.terms()) keys.insert(idx);
  std::vector<MultiIndex> rows(keys.begin(), keys.end());
  const Coordinates coords = coordinates_of(rows);
  const IntMatrix A = coordinate_matrix(images, coords);
  const IntMatrix t = coordinate_matrix(PolyMap{target}, coords);

  const auto snf = smith_normal_form(A);
  const IntMatrix y = snf.U * t;
  std::optional<std::size_t> bad;
  for (std::size_t i = 0; i < rows.size() && !bad; ++i) {
    if (i < snf.rank ? !mpz_divisible_p(y(i, 0).get_mpz_t(), snf.D(i, i).get_mpz_t()) : y(i, 0) != 0) bad = i;
  }
  if (bad) {
    NoSolutionCertificate cert;
    cert.rows = rows;
    const Integer scale = *bad < snf.rank ? snf.D(*bad, *bad) : Integer(1);
    for (std::size_t j = 0; j < rows.size(); ++j) cert.functional.emplace_back(snf.U(*bad, j), scale);
    for (auto& w : cert.functional) w.canonicalize();
    cert.value = Rational(y(*bad, 0), scale);
    cert.value.canonicalize();
    sol.certificate = std::move(cert);
    sol.witness = BinomialPoly(nv);
    return sol;
  }
  IntMatrix z(sol.basis.size(), 1);
  for (std::size_t i = 0; i < snf.rank; ++i) z(i, 0) = y(i, 0) / snf.D(i, i);
  const IntMatrix c = snf.V * z;
  sol.solved = true;
  sol.witness = BinomialPoly(nv);
  for (std::size_t k = 0; k < sol.basis.size(); ++k) {
    sol.coefficients.push_back(c(k, 0));
    if (c(k, 0) != 0) sol.witness += ansatz[k] * c(k, 0);
  }
  return sol;
}

// ---------------------------------------------------------------- PTCP

std::vector<TwistingViolation> check_twisting(const NumSimplicialObject& G, const NumSimplicialObject& B,
                                              const TwistingFunction& tau) {
  std::vector<TwistingViolation> out;
  const unsigned N = std::min(G.n_max, B.n_max);
  if (tau.tau.size() < N + 1) {
    out.push_back({"tau defined on every level", static_cast<unsigned>(tau.tau.size()), 0});
    return out;
  }
  for (unsigned q = 1; q <= N; ++q) {
    bool ok = tau.tau[q].size() == G.level_ranks[q - 1];
    for (const auto& p : tau.tau[q]) ok = ok && p.nvars() == B.level_ranks[q];
    if (!ok) out.push_back({"tau_q : B_q -> G_{q-1}", q, 0});
  }
  if (!out.empty()) return out;

  auto after = [&](unsigned q, const PolyMap& inner, std::size_t nv) { return compose(tau.tau[q], inner, nv); };
  for (unsigned q = 2; q <= N; ++q) {
    const std::size_t nv = B.level_ranks[q];
    PolyMap rhs = after(q - 1, B.face(q, 1), nv);
    const PolyMap sub = after(q - 1, B.face(q, 0), nv);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= sub[k];
    if (compose(G.face(q - 1, 0), tau.tau[q], nv) != rhs) {
      out.push_back({"d_0 tau = tau d_1 - tau d_0", q, 0});
    }
    for (unsigned i = 1; i < q; ++i) {
      if (compose(G.face(q - 1, i), tau.tau[q], nv) != after(q - 1, B.face(q, i + 1), nv)) {
        out.push_back({"d_i tau = tau d_{i+1}", q, i});
      }
    }
  }
  for (unsigned q = 1; q < N; ++q) {
    const std::size_t nv = B.level_ranks[q];
    for (unsigned i = 0; i < q; ++i) {
      if (compose(G.degeneracy(q - 1, i), tau.tau[q], nv) != after(q + 1, B.degeneracy(q, i + 1), nv)) {
        out.push_back({"s_i tau = tau s_{i+1}", q, i});
      }
    }
  }
  for (unsigned q = 0; q < N; ++q) {
    const std::size_t nv = B.level_ranks[q];
    if (after(q + 1, B.degeneracy(q, 0), nv) != zeros(G.level_ranks[q], nv)) {
      out.push_back({"tau s_0 = 0", q + 1, 0});
    }
  }
  return out;
}

TwistingFunction trivial_twisting(const NumSimplicialObject& G, const NumSimplicialObject& B) {
  TwistingFunction t;
  const unsigned N = std::min(G.n_max, B.n_max);
  t.tau.resize(N + 1);
  for (unsigned q = 1; q <= N; ++q) t.tau[q] = zeros(G.level_ranks[q - 1], B.level_ranks[q]);
  return t;
}

NumSimplicialObject build_ptcp(const NumSimplicialObject& G, const NumSimplicialObject& B,
                               const TwistingFunction& tau) {
  const auto violations = check_twisting(G, B, tau);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::InvalidTwisting,
                v.identity + " fails at q=" + std::to_string(v.q) + ", i=" + std::to_string(v.i));
  }
  const unsigned N = std::min(G.n_max, B.n_max);
  NumSimplicialObject E;
  E.n_max = N;
  for (unsigned n = 0; n <= N; ++n) E.level_ranks.push_back(G.level_ranks[n] + B.level_ranks[n]);

  auto placements = [&](unsigned n) {
    std::vector<std::size_t> f(G.level_ranks[n]), b(B.level_ranks[n]);
    std::iota(f.begin(), f.end(), 0);
    std::iota(b.begin(), b.end(), G.level_ranks[n]);
    return std::make_pair(f, b);
  };
  auto embed = [](const PolyMap& m, std::size_t nv, const std::vector<std::size_t>& place) {
    PolyMap out;
    for (const auto& p : m) out.push_back(p.embedded(nv, place));
    return out;
  };
  for (unsigned n = 1; n <= N; ++n) {
    const auto [fp, bp] = placements(n);
    const std::size_t nv = E.level_ranks[n];
    for (unsigned i = 0; i <= n; ++i) {
      PolyMap fiber = embed(G.face(n, i), nv, fp);
      if (i == 0) {
        const PolyMap twist = embed(tau.tau[n], nv, bp);
        for (std::size_t k = 0; k < fiber.size(); ++k) fiber[k] += twist[k];
      }
      E.faces[{n, i}] = concat(std::move(fiber), embed(B.face(n, i), nv, bp));
    }
  }
  for (unsigned n = 0; n < N; ++n) {
    const auto [fp, bp] = placements(n);
    const std::size_t nv = E.level_ranks[n];
    for (unsigned i = 0; i <= n; ++i) {
      E.degeneracies[{n, i}] = concat(embed(G.degeneracy(n, i), nv, fp), embed(B.degeneracy(n, i), nv, bp));
    }
  }
  return E;
}

TwistingFunction heisenberg_twisting(unsigned n_max) {
  TwistingFunction t;
  t.tau.resize(n_max + 1);
  for (unsigned q = 1; q <= n_max; ++q) {
    const std::size_t nv = 2 * q;
    const BinomialPoly a1 = BinomialPoly::variable(nv, 0);
    for (unsigned j = 2; j <= q; ++j) t.tau[q].push_back(mul(a1, BinomialPoly::variable(nv, 2 * (j - 1) + 1)));
  }
  return t;
}

PathFibration path_fibration(unsigned k, unsigned n_max) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "path fibration needs k >= 1");
  FreeComplex cone;
  cone.ranks = {{static_cast<int>(k) - 1, 1}, {static_cast<int>(k), 1}};
  cone.diff[static_cast<int>(k)] = IntMatrix{{1}};
  FreeComplex fib, base;
  fib.ranks = {{static_cast<int>(k) - 1, 1}};
  base.ranks = {{static_cast<int>(k), 1}};

  const SimplicialAbGroup whole = gamma(cone, n_max);
  PathFibration P;
  P.fiber = as_numerical(gamma(fib, n_max));
  P.base = as_numerical(gamma(base, n_max));
  P.tau.tau.resize(n_max + 1);
  for (unsigned q = 1; q <= n_max; ++q) {
    const std::size_t g_rows = P.fiber.level_ranks[q - 1];
    const std::size_t g_cols = P.fiber.level_ranks[q];
    const IntMatrix block = whole.face(q, 0).block(0, g_cols, g_rows, P.base.level_ranks[q]);
    P.tau.tau[q] = linear_map(block);
  }
  P.total = build_ptcp(P.fiber, P.base, P.tau);
  return P;
}

// ---------------------------------------------------------------- lens spaces

LensOrbits lens_orbits(unsigned n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "lens_orbits needs n >= 2");
  LensOrbits L;
  L.n = n;
  for (unsigned u = 1; u < n; ++u) {
    if (std::gcd(u, n) == 1) L.units.push_back(u);
  }
  std::set<unsigned> pm_squares, pm_one{1 % n, (n - 1) % n};
  for (unsigned b : L.units) {
    const unsigned sq = static_cast<unsigned>((static_cast<unsigned long>(b) * b) % n);
    pm_squares.insert(sq);
    pm_squares.insert((n - sq) % n);
  }
  auto orbits = [&](const std::set<unsigned>& acting) {
    std::vector<std::vector<unsigned>> out;
    std::set<unsigned> seen;
    for (unsigned a : L.units) {
      if (seen.count(a)) continue;
      std::set<unsigned> orbit;
      for (unsigned s : acting) orbit.insert(static_cast<unsigned>((static_cast<unsigned long>(s) * a) % n));
      seen.insert(orbit.begin(), orbit.end());
      out.emplace_back(orbit.begin(), orbit.end());
    }
    return out;
  };
  L.homotopy_classes = orbits(pm_squares);
  L.isomorphism_classes = orbits(pm_one);
  for (const auto& cls : L.homotopy_classes) {
    for (unsigned a : cls) {
      for (unsigned b : cls) {
        if (L.homotopic_not_isomorphic || a >= b) continue;
        if (b != (n - a) % n) L.homotopic_not_isomorphic = std::make_pair(a, b);
      }
    }
  }
  return L;
}

}  // namespace numa
