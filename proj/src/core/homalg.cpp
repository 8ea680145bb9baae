#include "numa/homalg.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace numa {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
    for (long v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorCode::InvalidArgument, "block out of range");
  IntMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

std::vector<std::vector<Integer>> IntMatrix::to_rows() const {
  std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  }
  return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::ArityMismatch, "matrix product shape mismatch");
  IntMatrix p(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (o(k, j) != 0) p(i, j) += a * o(k, j);
      }
    }
  }
  return p;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::ArityMismatch, "matrix sum shape mismatch");
  IntMatrix s = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] += o.data_[k];
  return s;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const { return *this + (-o); }

IntMatrix IntMatrix::operator-() const {
  IntMatrix n = *this;
  for (auto& v : n.data_) v = -v;
  return n;
}

Integer IntMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  // Bareiss elimination.
  IntMatrix m = *this;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix direct_sum(const std::vector<IntMatrix>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  IntMatrix out(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    }
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

// ---------------------------------------------------------------- SNF

namespace {

std::atomic<bool> g_snf_fault{false};

// Tracks D = U A V together with U^{-1} and V^{-1} under elementary moves.
class SmithState {
 public:
  explicit SmithState(const IntMatrix& A)
      : D(A),
        U(IntMatrix::identity(A.rows())),
        Ui(IntMatrix::identity(A.rows())),
        V(IntMatrix::identity(A.cols())),
        Vi(IntMatrix::identity(A.cols())) {}

  IntMatrix D, U, Ui, V, Vi;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_row(D, i, j);
    swap_row(U, i, j);
    swap_col(Ui, i, j);
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_col(D, i, j);
    swap_col(V, i, j);
    swap_row(Vi, i, j);
  }

  // row_i += c row_j
  void add_row(std::size_t i, std::size_t j, const Integer& c) {
    axpy_row(D, i, j, c);
    axpy_row(U, i, j, c);
    axpy_col(Ui, j, i, -c);
  }

  // col_i += c col_j
  void add_col(std::size_t i, std::size_t j, const Integer& c) {
    axpy_col(D, i, j, c);
    axpy_col(V, i, j, c);
    axpy_row(Vi, j, i, -c);
  }

  void negate_row(std::size_t i) {
    scale_row(D, i);
    scale_row(U, i);
    scale_col(Ui, i);
  }

 private:
  static void swap_row(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.cols(); ++k) swap(m(i, k), m(j, k));
  }
  static void swap_col(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.rows(); ++k) swap(m(k, i), m(k, j));
  }
  static void axpy_row(IntMatrix& m, std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (m(j, k) != 0) m(i, k) += c * m(j, k);
    }
  }
  static void axpy_col(IntMatrix& m, std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
      if (m(k, j) != 0) m(k, i) += c * m(k, j);
    }
  }
  static void scale_row(IntMatrix& m, std::size_t i) {
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = -m(i, k);
  }
  static void scale_col(IntMatrix& m, std::size_t i) {
    for (std::size_t k = 0; k < m.rows(); ++k) m(k, i) = -m(k, i);
  }
};

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// Rounded-toward-zero quotient keeps |remainder| < |b|.
Integer quotient(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

void set_snf_fault(bool enabled) { g_snf_fault.store(enabled); }
bool snf_fault() { return g_snf_fault.load(); }

std::vector<Integer> SmithForm::invariant_factors() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const IntMatrix& A) {
  SmithState s(A);
  IntMatrix& D = s.D;
  const std::size_t rows = A.rows(), cols = A.cols();
  std::size_t t = 0;

  while (t < std::min(rows, cols)) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (D(i, j) != 0 && (pi == rows || cmpabs(D(i, j), D(pi, pj)) < 0)) {
          pi = i;
          pj = j;
        }
      }
    }
    if (pi == rows) break;
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (D(i, t) == 0) continue;
        s.add_row(i, t, -quotient(D(i, t), D(t, t)));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (D(t, j) == 0) continue;
        s.add_col(j, t, -quotient(D(t, j), D(t, t)));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A remainder survived; move the smallest one to the pivot.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (D(i, t) != 0 && cmpabs(D(i, t), D(bi, bj)) < 0) bi = i, bj = t;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (D(t, j) != 0 && cmpabs(D(t, j), D(bi, bj)) < 0) bi = t, bj = j;
        }
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }
      // Enforce d_t | every later entry.
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            bad_row = i;
            break;
          }
        }
      }
      if (bad_row == rows) break;
      s.add_row(t, bad_row, 1);
    }
    if (D(t, t) < 0) s.negate_row(t);
    ++t;
  }

  SmithForm out{std::move(s.U), std::move(s.D), std::move(s.V), std::move(s.Ui), std::move(s.Vi), t};
  if (snf_fault() && out.rank > 0) out.D(0, 0) += 1;
  return out;
}

// ---------------------------------------------------------------- groups

std::string FinAbGroup::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

FinAbGroup make_group(std::size_t free_rank, const std::vector<Integer>& cyclic_orders) {
  std::vector<Integer> diag;
  for (const auto& c : cyclic_orders) {
    if (c == 0) {
      ++free_rank;
    } else if (abs(c) != 1) {
      diag.push_back(abs(c));
    }
  }
  FinAbGroup g{free_rank, {}};
  if (diag.empty()) return g;
  IntMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  for (const auto& d : smith_normal_form(m).invariant_factors()) {
    if (d != 1) g.torsion.push_back(d);
  }
  return g;
}

// ---------------------------------------------------------------- complexes

std::size_t FreeComplex::rank(int n) const {
  const auto it = ranks.find(n);
  return it == ranks.end() ? 0 : it->second;
}

IntMatrix FreeComplex::d(int n) const {
  const auto it = diff.find(n);
  if (it != diff.end()) return it->second;
  return IntMatrix(rank(n - 1), rank(n));
}

int FreeComplex::min_degree() const {
  int lo = 0;
  bool any = false;
  for (const auto& [n, r] : ranks) {
    if (r == 0) continue;
    lo = any ? std::min(lo, n) : n;
    any = true;
  }
  return lo;
}

int FreeComplex::max_degree() const {
  int hi = 0;
  bool any = false;
  for (const auto& [n, r] : ranks) {
    if (r == 0) continue;
    hi = any ? std::max(hi, n) : n;
    any = true;
  }
  return hi;
}

void FreeComplex::validate() const {
  for (const auto& [n, m] : diff) {
    if (m.rows() != rank(n - 1) || m.cols() != rank(n)) {
      throw Error(ErrorCode::InconsistentData, "differential " + std::to_string(n) + " has the wrong shape");
    }
  }
  for (const auto& [n, m] : diff) {
    const auto below = diff.find(n - 1);
    if (below == diff.end()) continue;
    if (!(below->second * m).is_zero()) {
      throw Error(ErrorCode::InconsistentData, "d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " != 0");
    }
  }
}

FreeComplex cochain_complex(const std::map<int, std::size_t>& ranks,
                            const std::map<int, IntMatrix>& coboundary) {
  FreeComplex c;
  c.orientation = Orientation::Cohomological;
  for (const auto& [n, r] : ranks) c.ranks[-n] = r;
  // d^n : C^n -> C^{n+1} becomes d_{-n} : C_{-n} -> C_{-n-1}.
  for (const auto& [n, m] : coboundary) c.diff[-n] = m;
  return c;
}

FinAbGroup homology(const FreeComplex& C, int n) {
  const int k = C.orientation == Orientation::Cohomological ? -n : n;
  const std::size_t cn = C.rank(k);
  if (cn == 0) return {};
  const auto out = smith_normal_form(C.d(k));
  const auto in = smith_normal_form(C.d(k + 1));
  if (out.rank + in.rank > cn) throw Error(ErrorCode::InconsistentData, "not a complex at degree " + std::to_string(n));
  // ker d_k is a direct summand, so torsion of H comes from coker d_{k+1} alone.
  return make_group(cn - out.rank - in.rank, in.invariant_factors());
}

namespace {

// H_n presented on explicit cycles: generator j is column j of `cycles`
// (a vector in C_n) with order orders[j] (0 for free).
struct CyclePresentation {
  IntMatrix cycles;
  std::vector<Integer> orders;
  IntMatrix coords;           // kernel vector -> generator coordinates (all rows)
  std::vector<std::size_t> kept;  // rows of coords that survive (order != 1)
};

CyclePresentation present(const FreeComplex& C, int k) {
  const std::size_t cn = C.rank(k);
  const auto out = smith_normal_form(C.d(k));
  const std::size_t kdim = cn - out.rank;
  const IntMatrix K = out.V.block(0, out.rank, cn, kdim);
  const IntMatrix to_kernel = out.V_inv.block(out.rank, 0, kdim, cn);
  const IntMatrix R = to_kernel * C.d(k + 1);
  const auto rel = smith_normal_form(R);
  CyclePresentation p;
  const IntMatrix gens = K * rel.U_inv;
  p.coords = rel.U * to_kernel;
  for (std::size_t i = 0; i < kdim; ++i) {
    const Integer order = i < rel.rank ? rel.D(i, i) : Integer(0);
    if (order == 1) continue;
    p.kept.push_back(i);
    p.orders.push_back(order);
  }
  p.cycles = IntMatrix(cn, p.kept.size());
  for (std::size_t j = 0; j < p.kept.size(); ++j) {
    for (std::size_t r = 0; r < cn; ++r) p.cycles(r, j) = gens(r, p.kept[j]);
  }
  return p;
}

Integer reduce(const Integer& v, const Integer& order) {
  if (order == 0) return v;
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), order.get_mpz_t());
  return r;
}

}  // namespace

bool is_chain_map(const FreeComplex& C, const FreeComplex& D, const ChainMap& f) {
  auto component = [&](int n) {
    const auto it = f.find(n);
    return it != f.end() ? it->second : IntMatrix(D.rank(n), C.rank(n));
  };
  for (const auto& [n, m] : f) {
    if (m.rows() != D.rank(n) || m.cols() != C.rank(n)) return false;
  }
  const int lo = std::min(C.min_degree(), D.min_degree());
  const int hi = std::max(C.max_degree(), D.max_degree());
  for (int n = lo; n <= hi + 1; ++n) {
    if (!(component(n - 1) * C.d(n) == D.d(n) * component(n))) return false;
  }
  return true;
}

HomologyMap induced_on_homology(const FreeComplex& C, const FreeComplex& D, const ChainMap& f, int n) {
  const int kc = C.orientation == Orientation::Cohomological ? -n : n;
  const int kd = D.orientation == Orientation::Cohomological ? -n : n;
  const auto it = f.find(kc);
  const IntMatrix fn = it != f.end() ? it->second : IntMatrix(D.rank(kd), C.rank(kc));
  const auto src = present(C, kc);
  const auto dst = present(D, kd);

  HomologyMap out;
  out.source = homology(C, n);
  out.target = homology(D, n);
  const IntMatrix image = dst.coords * (fn * src.cycles);
  out.matrix = IntMatrix(dst.kept.size(), src.kept.size());
  for (std::size_t i = 0; i < dst.kept.size(); ++i) {
    for (std::size_t j = 0; j < src.kept.size(); ++j) {
      out.matrix(i, j) = reduce(image(dst.kept[i], j), dst.orders[i]);
    }
  }
  // Isomorphic f.g. abelian groups are Hopfian, so surjectivity suffices.
  if (out.source == out.target) {
    IntMatrix aug(dst.kept.size(), src.kept.size() + dst.kept.size());
    for (std::size_t i = 0; i < dst.kept.size(); ++i) {
      for (std::size_t j = 0; j < src.kept.size(); ++j) aug(i, j) = out.matrix(i, j);
      aug(i, src.kept.size() + i) = dst.orders[i];
    }
    const auto s = smith_normal_form(aug);
    const auto factors = s.invariant_factors();
    out.isomorphism = s.rank == dst.kept.size() &&
                      std::all_of(factors.begin(), factors.end(), [](const Integer& d) { return d == 1; });
  }
  return out;
}

GeneratorCount min_generators(const FinAbGroup& M) {
  return {M.free_rank + M.torsion.size(), M.torsion.size()};
}

FreeComplex minimal_resolution(const FinAbGroup& M) {
  const auto [g, g_tor] = min_generators(M);
  FreeComplex F;
  F.ranks[0] = g;
  F.ranks[1] = g_tor;
  IntMatrix d(g, g_tor);
  for (std::size_t i = 0; i < g_tor; ++i) d(i, i) = M.torsion[i];
  F.diff[1] = std::move(d);
  return F;
}

Integer T_rank(const std::map<int, std::size_t>& r, unsigned i) {
  Integer total = 0;
  for (const auto& [k, rk] : r) {
    if (k < 0 || static_cast<unsigned>(k) > i || rk == 0) continue;
    Integer c;
    mpz_bin_uiui(c.get_mpz_t(), i, static_cast<unsigned long>(k));
    total += c * static_cast<unsigned long>(rk);
  }
  return total;
}

AuditReport minimality_audit(const std::vector<std::size_t>& tower_ranks,
                             const std::vector<AuditStage>& stages) {
  AuditReport report;
  report.ranks = tower_ranks;
  report.bound.assign(tower_ranks.size(), 0);
  for (const auto& st : stages) {
    if (st.degree < 0) throw Error(ErrorCode::InconsistentData, "negative stage degree");
    const std::map<int, std::size_t> tau{{st.degree, st.g}, {st.degree + 1, st.h}};
    for (unsigned n = 0; n < tower_ranks.size(); ++n) report.bound[n] += T_rank(tau, n);
  }
  for (std::size_t n = 0; n < tower_ranks.size(); ++n) {
    if (report.bound[n] > tower_ranks[n]) {
      throw Error(ErrorCode::InconsistentData, "rank " + std::to_string(tower_ranks[n]) + " at level " +
                                                   std::to_string(n) + " is below the bound " +
                                                   report.bound[n].get_str());
    }
    if (report.bound[n] < tower_ranks[n]) report.verdict = AuditVerdict::Special;
  }
  return report;
}

}  // namespace numa
