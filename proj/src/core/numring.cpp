#include "numa/numring.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace numa::numring {

namespace {

struct TableCache {
  std::mutex mu;
  std::map<std::tuple<int, unsigned, unsigned>, StructureTable> tables;
};

TableCache& cache() {
  static TableCache c;
  return c;
}

template <class Build>
const StructureTable& memo(StructureKind kind, unsigned m, unsigned n, Build build) {
  auto& c = cache();
  const auto key = std::make_tuple(static_cast<int>(kind), m, n);
  {
    std::lock_guard lock(c.mu);
    if (auto it = c.tables.find(key); it != c.tables.end()) return it->second;
  }
  StructureTable table = build();
  std::lock_guard lock(c.mu);
  return c.tables.try_emplace(key, std::move(table)).first->second;
}

std::vector<Integer> univariate_coefficients(const IntegerFunction& f, unsigned top) {
  const auto c = newton_coefficients(f, {top});
  std::vector<Integer> out(top + 1);
  for (unsigned k = 0; k <= top; ++k) out[k] = c.at({k});
  return out;
}

}  // namespace

BinomialPoly StructureTable::as_poly() const {
  if (kind == StructureKind::F) {
    BinomialPoly::TermMap terms;
    for (unsigned i = 0; i < bilinear.size(); ++i) {
      for (unsigned j = 0; j < bilinear[i].size(); ++j) terms.emplace(MultiIndex{i, j}, bilinear[i][j]);
    }
    return BinomialPoly(2, std::move(terms));
  }
  BinomialPoly::TermMap terms;
  for (unsigned k = 0; k < linear.size(); ++k) terms.emplace(MultiIndex{k}, linear[k]);
  return BinomialPoly(1, std::move(terms));
}

const StructureTable& structure_h(unsigned m, unsigned n) {
  return memo(StructureKind::H, m, n, [&] {
    StructureTable t{StructureKind::H, m, n, {}, {}};
    t.linear = univariate_coefficients(
        [&](std::span<const Integer> x) { return Integer(binom(x[0], m) * binom(x[0], n)); }, m + n);
    return t;
  });
}

const StructureTable& structure_f(unsigned n) {
  return memo(StructureKind::F, 0, n, [&] {
    StructureTable t{StructureKind::F, 0, n, {}, {}};
    const auto c = newton_coefficients(
        [&](std::span<const Integer> xy) { return binom(Integer(xy[0] * xy[1]), n); }, {n, n});
    t.bilinear.assign(n + 1, std::vector<Integer>(n + 1, 0));
    for (const auto& [idx, v] : c) t.bilinear[idx[0]][idx[1]] = v;
    return t;
  });
}

const StructureTable& structure_g(unsigned m, unsigned n) {
  return memo(StructureKind::G, m, n, [&] {
    StructureTable t{StructureKind::G, m, n, {}, {}};
    t.linear = univariate_coefficients(
        [&](std::span<const Integer> x) { return binom(binom(x[0], m), n); }, m * n);
    return t;
  });
}

// ---------------------------------------------------------------- rings

PointwiseRing::Element PointwiseRing::add(const Element& a, const Element& b) const {
  Element r(size);
  for (std::size_t i = 0; i < size; ++i) r[i] = a[i] + b[i];
  return r;
}

PointwiseRing::Element PointwiseRing::mul(const Element& a, const Element& b) const {
  Element r(size);
  for (std::size_t i = 0; i < size; ++i) r[i] = a[i] * b[i];
  return r;
}

PointwiseRing::Element PointwiseRing::binom(const Element& r, unsigned n) const {
  Element out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = numa::binom(r[i], n);
  return out;
}

std::string PointwiseRing::describe(const Element& r) const {
  std::string s = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ",";
    s += r[i].get_str();
  }
  return s + ")";
}

std::string FreeNumericalRing::describe(const Element& r) const {
  std::string s;
  for (const auto& [idx, c] : r.terms()) {
    if (!s.empty()) s += " + ";
    s += c.get_str();
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[j]) s += "*C(x" + std::to_string(j + 1) + "," + std::to_string(idx[j]) + ")";
    }
  }
  return s.empty() ? "0" : s;
}

AxiomReport check_axioms(const NumericalRingHandle& handle, long lo, long hi, unsigned bound) {
  if (lo > hi) throw Error(ErrorCode::InvalidArgument, "empty sample range");
  return std::visit(
      [&](const auto& ring) -> AxiomReport {
        using R = std::decay_t<decltype(ring)>;
        std::vector<typename R::Element> samples;
        if constexpr (std::is_same_v<R, IntegerRing>) {
          for (long v = lo; v <= hi; ++v) samples.emplace_back(v);
        } else if constexpr (std::is_same_v<R, PointwiseRing>) {
          // Every function S -> [lo, hi], capped at 512 in odometer order.
          const long width = hi - lo + 1;
          std::vector<long> digits(ring.size, 0);
          for (std::size_t count = 0; count < 512; ++count) {
            typename R::Element e(ring.size);
            for (std::size_t i = 0; i < ring.size; ++i) e[i] = lo + digits[i];
            samples.push_back(std::move(e));
            std::size_t pos = 0;
            while (pos < ring.size && ++digits[pos] == width) digits[pos++] = 0;
            if (pos == ring.size) break;
          }
        } else {
          for (std::size_t j = 0; j < ring.nvars; ++j) {
            for (long k = std::max(lo, 0L); k <= hi; ++k) {
              samples.push_back(BinomialPoly::binomial(ring.nvars, j, static_cast<unsigned>(k)));
            }
          }
        }
        return check_axioms(ring, std::span<const typename R::Element>(samples), bound);
      },
      handle);
}

BinomialPoly ring_binom(const FreeNumericalRing& ring, const BinomialPoly& f, unsigned n) {
  if (f.nvars() != ring.nvars) throw Error(ErrorCode::ArityMismatch, "ring_binom arity");
  return binomial_of(f, n);
}

FreeTensor free_tensor(std::size_t a_vars, std::size_t b_vars) {
  FreeTensor t;
  t.ring.nvars = a_vars + b_vars;
  for (std::size_t j = 0; j < a_vars; ++j) t.left.push_back(BinomialPoly::variable(t.ring.nvars, j));
  for (std::size_t j = 0; j < b_vars; ++j) {
    t.right.push_back(BinomialPoly::variable(t.ring.nvars, a_vars + j));
  }
  return t;
}

}  // namespace numa::numring
