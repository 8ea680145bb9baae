#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "numa/error.hpp"

namespace numa {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const;
  IntMatrix transpose() const;
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  std::vector<std::vector<Integer>> to_rows() const;

  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntMatrix operator-() const;
  bool operator==(const IntMatrix& other) const = default;

  /// Exact determinant of a square matrix (fraction-free elimination).
  Integer determinant() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Blocks placed along the diagonal.
IntMatrix direct_sum(const std::vector<IntMatrix>& blocks);

struct SmithForm {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;
  std::size_t rank = 0;

  /// Nonzero diagonal entries d_1 | d_2 | ... (all positive).
  std::vector<Integer> invariant_factors() const;
};

/// D = U A V with U, V unimodular and D diagonal with a divisibility chain.
SmithForm smith_normal_form(const IntMatrix& A);

/// Test hook: when set, smith_normal_form returns a deliberately wrong D.
void set_snf_fault(bool enabled);
bool snf_fault();

struct FinAbGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors, each >= 2

  bool operator==(const FinAbGroup&) const = default;
  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  std::string to_string() const;
};

/// Canonicalizes arbitrary cyclic orders into invariant-factor form.
FinAbGroup make_group(std::size_t free_rank, const std::vector<Integer>& cyclic_orders);

enum class Orientation { Homological, Cohomological };

/// A bounded complex of f.g. free abelian groups, d_n : C_n -> C_{n-1}.
/// Cochain complexes are stored with degree n moved to -n.
struct FreeComplex {
  std::map<int, std::size_t> ranks;
  std::map<int, IntMatrix> diff;
  Orientation orientation = Orientation::Homological;

  std::size_t rank(int n) const;
  /// d_n as a rank(n-1) x rank(n) matrix, zero if absent.
  IntMatrix d(int n) const;
  int min_degree() const;
  int max_degree() const;

  /// Throws InconsistentData on a shape mismatch or d_{n-1} d_n != 0.
  void validate() const;
};

/// Degree n of a cochain complex (d^n : C^n -> C^{n+1}) is stored at -n.
FreeComplex cochain_complex(const std::map<int, std::size_t>& ranks,
                            const std::map<int, IntMatrix>& coboundary);

/// H_n, or H^n for a cohomological complex.
FinAbGroup homology(const FreeComplex& C, int n);

/// Chain map f : C -> D as matrices f_n : C_n -> D_n.
using ChainMap = std::map<int, IntMatrix>;

/// f_{n-1} d^C_n = d^D_n f_n in every degree where either side is nonzero.
bool is_chain_map(const FreeComplex& C, const FreeComplex& D, const ChainMap& f);

struct HomologyMap {
  FinAbGroup source, target;
  /// Column j is the image of the j-th source generator in target generator
  /// coordinates, reduced modulo the generator orders.
  IntMatrix matrix;
  bool isomorphism = false;
};

/// H_n(f) : H_n(C) -> H_n(D), on the generators read off from SNF.
HomologyMap induced_on_homology(const FreeComplex& C, const FreeComplex& D, const ChainMap& f, int n);

struct GeneratorCount {
  std::size_t g = 0;
  std::size_t g_tor = 0;
};
GeneratorCount min_generators(const FinAbGroup& M);

/// F_1 -> F_0 with rk F_0 = g(M), rk F_1 = g(tor M).
FreeComplex minimal_resolution(const FinAbGroup& M);

/// sum_k C(i,k) r(k).
Integer T_rank(const std::map<int, std::size_t>& r, unsigned i);

struct AuditStage {
  int degree = 0;     // i
  std::size_t g = 0;  // placed at degree i
  std::size_t h = 0;  // placed at degree i + 1
};

enum class AuditVerdict { Minimal, Special };

struct AuditReport {
  AuditVerdict verdict = AuditVerdict::Minimal;
  std::vector<Integer> bound;  // indexed by n
  std::vector<std::size_t> ranks;
};

/// Compares rk M^n with sum_i T(tau_i)(n). Throws InconsistentData if any rank
/// lies below the bound.
AuditReport minimality_audit(const std::vector<std::size_t>& tower_ranks,
                             const std::vector<AuditStage>& stages);

}  // namespace numa
