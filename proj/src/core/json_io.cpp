#include "numa/json_io.hpp"

#include <optional>

namespace numa::json {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, "JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t to_size(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

int to_degree(const std::string& key) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(key, &used);
    if (used == key.size()) return n;
  } catch (const std::exception&) {
  }
  bad("degree key \"" + key + "\" is not an integer");
}

}  // namespace

Json integer(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

Integer to_integer(const Json& j) {
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) bad("\"" + j.get<std::string>() + "\" is not an integer");
    return v;
  }
  bad("expected an integer, got " + j.dump());
}

Json rational(const Rational& q) {
  if (q.get_den() == 1) return integer(q.get_num());
  return q.get_str();
}

Rational to_rational(const Json& j) {
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) {
      bad("\"" + j.get<std::string>() + "\" is not a rational");
    }
    q.canonicalize();
    return q;
  }
  return Rational(to_integer(j));
}

Json poly(const BinomialPoly& b) {
  Json terms = Json::array();
  for (const auto& [idx, c] : b.terms()) terms.push_back({{"idx", idx}, {"c", c.get_str()}});
  return {{"nvars", b.nvars()}, {"terms", std::move(terms)}};
}

BinomialPoly to_poly(const Json& j) {
  const std::size_t nvars = to_size(field(j, "nvars"), "nvars");
  BinomialPoly::TermMap terms;
  const Json& list = field(j, "terms");
  if (!list.is_array()) bad("terms must be an array");
  for (const auto& t : list) {
    MultiIndex idx;
    for (const auto& e : field(t, "idx")) idx.push_back(static_cast<unsigned>(to_size(e, "idx entry")));
    if (idx.size() != nvars) bad("term index of length " + std::to_string(idx.size()) + " in " +
                                 std::to_string(nvars) + " variables");
    terms[idx] += to_integer(field(t, "c"));
  }
  return BinomialPoly(nvars, std::move(terms));
}

Json rational_poly(const RationalPoly& r) {
  Json terms = Json::array();
  for (const auto& [idx, c] : r.terms()) {
    terms.push_back({{"idx", idx}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  }
  return {{"nvars", r.nvars()}, {"terms", std::move(terms)}};
}

Json matrix(const IntMatrix& m) {
  Json data = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(integer(m(i, k)));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

IntMatrix to_matrix(const Json& j) {
  const Json* data = &j;
  std::optional<std::size_t> rows, cols;
  if (j.is_object()) {
    rows = to_size(field(j, "rows"), "rows");
    cols = to_size(field(j, "cols"), "cols");
    data = &field(j, "data");
  }
  if (!data->is_array()) bad("matrix data must be an array of rows");
  const std::size_t r = data->size();
  const std::size_t c = r ? (*data)[0].size() : cols.value_or(0);
  if (rows && *rows != r) bad("matrix has " + std::to_string(r) + " rows, declared " + std::to_string(*rows));
  if (cols && r && *cols != c) bad("matrix has " + std::to_string(c) + " columns, declared " + std::to_string(*cols));
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const Json& row = (*data)[i];
    if (!row.is_array() || row.size() != c) bad("ragged matrix row " + std::to_string(i));
    for (std::size_t k = 0; k < c; ++k) m(i, k) = to_integer(row[k]);
  }
  return m;
}

Json complex(const FreeComplex& C) {
  Json ranks = Json::object(), diff = Json::object();
  for (const auto& [n, r] : C.ranks) ranks[std::to_string(n)] = r;
  for (const auto& [n, d] : C.diff) diff[std::to_string(n)] = matrix(d);
  return {{"ranks", std::move(ranks)},
          {"diff", std::move(diff)},
          {"orientation", C.orientation == Orientation::Homological ? "homological" : "cohomological"}};
}

FreeComplex to_complex(const Json& j) {
  FreeComplex C;
  for (const auto& [key, r] : field(j, "ranks").items()) C.ranks[to_degree(key)] = to_size(r, "rank");
  if (j.contains("diff")) {
    for (const auto& [key, d] : j.at("diff").items()) {
      const int n = to_degree(key);
      IntMatrix m = to_matrix(d);
      // bare empty arrays carry no column count
      if (m.rows() == 0 && m.cols() == 0) m = IntMatrix(C.rank(n - 1), C.rank(n));
      C.diff[n] = std::move(m);
    }
  }
  if (j.contains("orientation")) {
    const auto o = j.at("orientation").get<std::string>();
    if (o == "cohomological") {
      C.orientation = Orientation::Cohomological;
    } else if (o != "homological") {
      bad("orientation must be homological or cohomological");
    }
  }
  C.validate();
  return C;
}

Json group(const FinAbGroup& G) {
  Json torsion = Json::array();
  for (const auto& t : G.torsion) torsion.push_back(integer(t));
  return {{"free_rank", G.free_rank}, {"torsion", std::move(torsion)}, {"text", G.to_string()}};
}

Json malcev_group(const MalcevGroup& G) {
  Json mult = Json::array(), inv = Json::array(), unit = Json::array(), gens = Json::array();
  for (const auto& p : G.law.mult) mult.push_back(poly(p));
  for (const auto& p : G.law.inv) inv.push_back(poly(p));
  for (const auto& u : G.law.unit) unit.push_back(integer(u));
  for (const auto& g : G.generators) {
    Json v = Json::array();
    for (const auto& c : g) v.push_back(integer(c));
    gens.push_back(std::move(v));
  }
  return {{"dim", G.dim()}, {"mult", std::move(mult)}, {"inv", std::move(inv)}, {"unit", std::move(unit)},
          {"generators", std::move(gens)}};
}

MalcevGroup to_malcev_group(const Json& j) {
  MalcevGroup G;
  G.law.dim = to_size(field(j, "dim"), "dim");
  for (const auto& p : field(j, "mult")) G.law.mult.push_back(to_poly(p));
  for (const auto& p : field(j, "inv")) G.law.inv.push_back(to_poly(p));
  for (const auto& u : field(j, "unit")) G.law.unit.push_back(to_integer(u));
  if (j.contains("generators")) {
    for (const auto& g : j.at("generators")) {
      GroupElement e;
      for (const auto& c : g) e.push_back(to_integer(c));
      if (e.size() != G.law.dim) bad("generator of the wrong length");
      G.generators.push_back(std::move(e));
    }
  }
  if (G.law.mult.size() != G.law.dim || G.law.inv.size() != G.law.dim || G.law.unit.size() != G.law.dim) {
    bad("group law components must number dim");
  }
  return G;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

}  // namespace numa::json
