#include "numa/dold_kan.hpp"

namespace numa {

const IntMatrix& SimplicialAbGroup::face(unsigned n, unsigned i) const {
  const auto it = faces.find({n, i});
  if (it == faces.end()) {
    throw Error(ErrorCode::InvalidArgument, "no face d_" + std::to_string(i) + " at level " + std::to_string(n));
  }
  return it->second;
}

const IntMatrix& SimplicialAbGroup::degeneracy(unsigned n, unsigned i) const {
  const auto it = degeneracies.find({n, i});
  if (it == degeneracies.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "no degeneracy s_" + std::to_string(i) + " at level " + std::to_string(n));
  }
  return it->second;
}

std::vector<IdentityViolation> check_simplicial_identities(const SimplicialAbGroup& A) {
  std::vector<IdentityViolation> out;
  auto expect = [&](bool ok, const char* identity, unsigned n, unsigned i, unsigned j) {
    if (!ok) out.push_back({identity, n, i, j});
  };
  const unsigned N = A.n_max;
  for (unsigned n = 2; n <= N; ++n) {
    for (unsigned j = 1; j <= n; ++j) {
      for (unsigned i = 0; i < j; ++i) {
        expect(A.face(n - 1, i) * A.face(n, j) == A.face(n - 1, j - 1) * A.face(n, i), "d_i d_j = d_{j-1} d_i",
               n, i, j);
      }
    }
  }
  for (unsigned n = 0; n + 2 <= N; ++n) {
    for (unsigned j = 0; j <= n; ++j) {
      for (unsigned i = 0; i <= j; ++i) {
        expect(A.degeneracy(n + 1, i) * A.degeneracy(n, j) == A.degeneracy(n + 1, j + 1) * A.degeneracy(n, i),
               "s_i s_j = s_{j+1} s_i", n, i, j);
      }
    }
  }
  for (unsigned n = 0; n + 1 <= N; ++n) {
    const IntMatrix id = IntMatrix::identity(A.level_ranks[n]);
    for (unsigned j = 0; j <= n; ++j) {
      for (unsigned i = 0; i <= n + 1; ++i) {
        const IntMatrix lhs = A.face(n + 1, i) * A.degeneracy(n, j);
        if (i < j) {
          expect(lhs == A.degeneracy(n - 1, j - 1) * A.face(n, i), "d_i s_j = s_{j-1} d_i", n, i, j);
        } else if (i == j || i == j + 1) {
          expect(lhs == id, "d_i s_j = id", n, i, j);
        } else {
          expect(lhs == A.degeneracy(n - 1, j) * A.face(n, i - 1), "d_i s_j = s_j d_{i-1}", n, i, j);
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<unsigned>> surjections(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  if (k > n) return out;
  std::vector<unsigned> cur(k);
  for (unsigned t = 0; t < k; ++t) cur[t] = t + 1;
  for (;;) {
    out.push_back(cur);
    int t = static_cast<int>(k) - 1;
    while (t >= 0 && cur[t] == n - (k - 1 - t)) --t;
    if (t < 0) break;
    ++cur[t];
    for (unsigned u = t + 1; u < k; ++u) cur[u] = cur[u - 1] + 1;
  }
  return out;
}

namespace {

struct Level {
  std::size_t rank = 0;
  std::map<std::vector<unsigned>, std::size_t> offset;
};

Level build_level(const FreeComplex& C, unsigned n) {
  Level L;
  for (unsigned k = 0; k <= n; ++k) {
    const std::size_t rk = C.rank(static_cast<int>(k));
    for (auto& J : surjections(n, k)) {
      L.offset.emplace(std::move(J), L.rank);
      L.rank += rk;
    }
  }
  return L;
}

// theta^* : level n -> level m for theta : [m] -> [n] given by its values.
IntMatrix pullback(const FreeComplex& C, const std::vector<Level>& levels, unsigned n,
                   const std::vector<unsigned>& theta) {
  const unsigned m = static_cast<unsigned>(theta.size()) - 1;
  IntMatrix M(levels[m].rank, levels[n].rank);
  for (const auto& [J, col] : levels[n].offset) {
    const unsigned k = static_cast<unsigned>(J.size());
    const std::size_t rk = C.rank(static_cast<int>(k));
    if (rk == 0) continue;
    // v = sigma o theta
    std::vector<unsigned> v(m + 1);
    for (unsigned p = 0; p <= m; ++p) {
      unsigned c = 0;
      while (c < k && J[c] <= theta[p]) ++c;
      v[p] = c;
    }
    std::vector<unsigned> jumps;
    for (unsigned p = 1; p <= m; ++p) {
      if (v[p] > v[p - 1]) jumps.push_back(p);
    }
    const bool onto = v[0] == 0 && v[m] == k && jumps.size() == k;
    const bool misses_zero = k >= 1 && v[0] == 1 && v[m] == k && jumps.size() == k - 1;
    if (onto) {
      const std::size_t row = levels[m].offset.at(jumps);
      for (std::size_t t = 0; t < rk; ++t) M(row + t, col + t) = 1;
    } else if (misses_zero) {
      const std::size_t row = levels[m].offset.at(jumps);
      const IntMatrix d = C.d(static_cast<int>(k));
      for (std::size_t a = 0; a < d.rows(); ++a) {
        for (std::size_t b = 0; b < d.cols(); ++b) M(row + a, col + b) = d(a, b);
      }
    }
  }
  return M;
}

}  // namespace

SimplicialAbGroup gamma(const FreeComplex& C, unsigned n_max) {
  for (const auto& [deg, rk] : C.ranks) {
    if (rk == 0) continue;
    if (deg < 0) throw Error(ErrorCode::InvalidArgument, "gamma needs a complex in non-negative degrees");
    if (static_cast<unsigned>(deg) > n_max) {
      throw Error(ErrorCode::TruncationTooSmall,
                  "complex has rank in degree " + std::to_string(deg) + " > n_max = " + std::to_string(n_max));
    }
  }
  std::vector<Level> levels;
  for (unsigned n = 0; n <= n_max; ++n) levels.push_back(build_level(C, n));

  SimplicialAbGroup A;
  A.n_max = n_max;
  for (const auto& L : levels) A.level_ranks.push_back(L.rank);
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned i = 0; i <= n; ++i) {
      std::vector<unsigned> theta(n);  // coface skipping i
      for (unsigned p = 0; p < n; ++p) theta[p] = p < i ? p : p + 1;
      A.faces[{n, i}] = pullback(C, levels, n, theta);
    }
  }
  for (unsigned n = 0; n < n_max; ++n) {
    for (unsigned i = 0; i <= n; ++i) {
      std::vector<unsigned> theta(n + 2);  // codegeneracy hitting i twice
      for (unsigned p = 0; p <= n + 1; ++p) theta[p] = p <= i ? p : p - 1;
      A.degeneracies[{n, i}] = pullback(C, levels, n, theta);
    }
  }
  return A;
}

FreeComplex normalize(const SimplicialAbGroup& A) {
  struct Kernel {
    IntMatrix basis;      // rank(n) x k
    IntMatrix to_coords;  // k x rank(n), left inverse on the kernel
    std::size_t skipped;  // leading rows of V^{-1} that must vanish on the kernel
    IntMatrix V_inv;
  };
  std::vector<Kernel> ker;
  for (unsigned n = 0; n <= A.n_max; ++n) {
    const std::size_t rn = A.level_ranks[n];
    std::size_t stacked_rows = n >= 1 ? n * A.level_ranks[n - 1] : 0;
    IntMatrix S(stacked_rows, rn);
    for (unsigned i = 1; i <= n; ++i) {
      const IntMatrix& F = A.face(n, i);
      const std::size_t r0 = (i - 1) * A.level_ranks[n - 1];
      for (std::size_t a = 0; a < F.rows(); ++a) {
        for (std::size_t b = 0; b < F.cols(); ++b) S(r0 + a, b) = F(a, b);
      }
    }
    const auto snf = smith_normal_form(S);
    const std::size_t k = rn - snf.rank;
    ker.push_back({snf.V.block(0, snf.rank, rn, k), snf.V_inv.block(snf.rank, 0, k, rn), snf.rank, snf.V_inv});
  }
  FreeComplex N;
  for (unsigned n = 0; n <= A.n_max; ++n) N.ranks[static_cast<int>(n)] = ker[n].basis.cols();
  for (unsigned n = 1; n <= A.n_max; ++n) {
    const IntMatrix image = A.face(n, 0) * ker[n].basis;
    const IntMatrix full = ker[n - 1].V_inv * image;
    for (std::size_t a = 0; a < ker[n - 1].skipped; ++a) {
      for (std::size_t b = 0; b < full.cols(); ++b) {
        if (full(a, b) != 0) throw Error(ErrorCode::InconsistentData, "d_0 leaves the normalized subgroup");
      }
    }
    N.diff[static_cast<int>(n)] = ker[n - 1].to_coords * image;
  }
  return N;
}

SimplicialAbGroup constant_simplicial(std::size_t rank, unsigned n_max) {
  SimplicialAbGroup A;
  A.n_max = n_max;
  A.level_ranks.assign(n_max + 1, rank);
  const IntMatrix id = IntMatrix::identity(rank);
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned i = 0; i <= n; ++i) A.faces[{n, i}] = id;
  }
  for (unsigned n = 0; n < n_max; ++n) {
    for (unsigned i = 0; i <= n; ++i) A.degeneracies[{n, i}] = id;
  }
  return A;
}

}  // namespace numa
