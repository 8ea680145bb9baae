#include "numa/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "numa/coeff.hpp"
#include "numa/expr.hpp"
#include "numa/golden.hpp"
#include "numa/numring.hpp"
#include "numa/simplicial.hpp"

namespace numa::commands {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const Json& require(const Json& args, const char* key) {
  if (!args.contains(key)) bad(std::string("missing argument \"") + key + "\"");
  return args.at(key);
}

unsigned long get_uint(const Json& args, const char* key, std::optional<unsigned long> fallback = std::nullopt) {
  if (!args.contains(key)) {
    if (!fallback) bad(std::string("missing argument \"") + key + "\"");
    return *fallback;
  }
  const Integer v = json::to_integer(args.at(key));
  if (v < 0 || !v.fits_ulong_p()) bad(std::string("argument \"") + key + "\" must be a non-negative integer");
  return v.get_ui();
}

long get_int(const Json& args, const char* key) {
  const Integer v = json::to_integer(require(args, key));
  if (!v.fits_slong_p()) bad(std::string("argument \"") + key + "\" is out of range");
  return v.get_si();
}

std::string get_string(const Json& args, const char* key, std::optional<std::string> fallback = std::nullopt) {
  if (!args.contains(key)) {
    if (!fallback) bad(std::string("missing argument \"") + key + "\"");
    return *fallback;
  }
  if (!args.at(key).is_string()) bad(std::string("argument \"") + key + "\" must be a string");
  return args.at(key).get<std::string>();
}

bool get_bool(const Json& args, const char* key, bool fallback) {
  if (!args.contains(key)) return fallback;
  if (!args.at(key).is_boolean()) bad(std::string("argument \"") + key + "\" must be true or false");
  return args.at(key).get<bool>();
}

unsigned long get_prime(const Json& args) {
  const unsigned long p = get_uint(args, "p");
  const Integer z = p;
  if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0) {
    bad("p = " + std::to_string(p) + " is not a prime");
  }
  return p;
}

Json index_json(const MultiIndex& idx) { return Json(idx); }

struct Output {
  Json cutoffs = Json::object();
  Json result = Json::object();
  std::string verdict = "ok";
};

using Handler = std::function<void(const Json&, const RunOptions&, Output&)>;

// ---------------------------------------------------------------- struct

void cmd_struct(const Json& args, const RunOptions&, Output& out) {
  const std::string kind = get_string(args, "kind");
  const auto n = static_cast<unsigned>(get_uint(args, "n"));
  if (kind == "f") {
    const auto& t = numring::structure_f(n);
    for (std::size_t i = 0; i < t.bilinear.size(); ++i) {
      for (std::size_t j = 0; j < t.bilinear[i].size(); ++j) {
        if (t.bilinear[i][j] != 0) out.result["c" + std::to_string(i) + "_" + std::to_string(j)] = json::integer(t.bilinear[i][j]);
      }
    }
    return;
  }
  if (kind != "h" && kind != "g") bad("structure kind must be h, f or g");
  const auto m = static_cast<unsigned>(get_uint(args, "m"));
  const auto& t = kind == "h" ? numring::structure_h(m, n) : numring::structure_g(m, n);
  for (std::size_t k = 0; k < t.linear.size(); ++k) {
    if (t.linear[k] != 0) out.result["c" + std::to_string(k)] = json::integer(t.linear[k]);
  }
}

// ---------------------------------------------------------------- axioms

void cmd_axioms(const Json& args, const RunOptions&, Output& out) {
  const std::string desc = get_string(args, "ring");
  const long lo = get_int(args, "lo"), hi = get_int(args, "hi");
  if (lo > hi) bad("empty sample range");
  const auto bound = static_cast<unsigned>(get_uint(args, "bound", 4));
  numring::NumericalRingHandle ring;
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  std::size_t size = 1;
  if (colon != std::string::npos) {
    try {
      size = std::stoul(desc.substr(colon + 1));
    } catch (const std::exception&) {
      bad("ring size in \"" + desc + "\" is not a number");
    }
  }
  if (name == "integers") {
    ring = numring::IntegerRing{};
  } else if (name == "pointwise") {
    ring = numring::PointwiseRing{size};
  } else if (name == "free") {
    ring = numring::FreeNumericalRing{size};
  } else {
    bad("ring must be integers, pointwise:N or free:K");
  }
  const auto r = numring::check_axioms(ring, lo, hi, bound);
  out.cutoffs["bound"] = bound;
  out.cutoffs["range"] = {lo, hi};
  out.result["samples"] = r.samples;
  out.result["checks"] = r.checks;
  out.result["passed"] = r.passed;
  if (r.violation) out.result["violation"] = {{"axiom", r.violation->axiom}, {"witness", r.violation->witness}};
  out.verdict = r.passed ? "pass" : "fail";
}

// ---------------------------------------------------------------- homalg

void cmd_homology(const Json& args, const RunOptions&, Output& out) {
  const auto C = json::to_complex(require(args, "complex"));
  const bool co = C.orientation == Orientation::Cohomological;
  Json groups = Json::object();
  if (!C.ranks.empty()) {
    const int lo = co ? -C.max_degree() : C.min_degree(), hi = co ? -C.min_degree() : C.max_degree();
    for (int n = lo; n <= hi; ++n) groups[std::to_string(n)] = json::group(homology(C, n));
    out.cutoffs["degrees"] = {lo, hi};
  }
  out.result[co ? "cohomology" : "homology"] = std::move(groups);
}

Json snf_json(const IntMatrix& A) {
  const auto s = smith_normal_form(A);
  Json factors = Json::array();
  for (const auto& f : s.invariant_factors()) factors.push_back(json::integer(f));
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"rank", s.rank}, {"invariant_factors", std::move(factors)}};
}

void cmd_snf(const Json& args, const RunOptions&, Output& out) {
  if (args.contains("complex")) {
    const auto C = json::to_complex(args.at("complex"));
    Json per = Json::object();
    for (const auto& [n, d] : C.diff) per[std::to_string(n)] = snf_json(d);
    out.result["differentials"] = std::move(per);
    return;
  }
  out.result = snf_json(json::to_matrix(require(args, "matrix")));
}

// ---------------------------------------------------------------- simplicial

void cmd_kz1(const Json& args, const RunOptions& options, Output& out) {
  const auto n_max = static_cast<unsigned>(get_uint(args, "nmax", 4));
  const auto d_max = static_cast<unsigned>(get_uint(args, "dmax", 6));
  const bool normalized = get_bool(args, "normalized", true);
  if (n_max < 1) bad("nmax must be at least 1");
  const auto H = graded_cohomology(k_z_1(n_max), d_max, normalized, options.threads);
  out.cutoffs["n_max"] = n_max;
  out.cutoffs["d_max"] = d_max;
  out.cutoffs["scope"] = "H^n for n < n_max, graded pieces d <= d_max";
  Json pieces = Json::array();
  for (const auto& [nd, G] : H.pieces) pieces.push_back({{"n", nd.first}, {"d", nd.second}, {"group", json::group(G)}});
  Json total = Json::object();
  for (unsigned n = 0; n < n_max; ++n) total[std::to_string(n)] = json::group(H.total(n));
  out.result["pieces"] = std::move(pieces);
  out.result["total"] = std::move(total);
}

BinomialPoly frobenius_cocycle(unsigned long p) {
  const auto x = RationalPoly::variable(2, 0), y = RationalPoly::variable(2, 1);
  const auto e = static_cast<unsigned>(p);
  return from_rational_poly(((x + y).pow(e) - x.pow(e) - y.pow(e)) * Rational(1, p));
}

void cmd_cocycle_solve(const Json& args, const RunOptions&, Output& out) {
  const std::string basis = get_string(args, "basis", "binom");
  if (basis != "binom" && basis != "poly") bad("basis must be binom or poly");
  const auto n = static_cast<unsigned>(get_uint(args, "n", 2));
  const auto n_max = static_cast<unsigned>(get_uint(args, "nmax", std::max(3u, n + 1)));
  BinomialPoly target;
  std::optional<unsigned long> p;
  if (args.contains("target")) {
    target = json::to_poly(args.at("target"));
  } else {
    p = get_prime(args);
    if (n != 2) bad("the p-cocycle lives at level 2");
    target = frobenius_cocycle(*p);
  }
  const auto d_max = static_cast<unsigned>(get_uint(args, "dmax", p ? *p + 1 : std::max(1u, target.degree())));
  if (n == 0 || n > n_max) bad("level n must satisfy 1 <= n <= nmax");
  const auto sol = coboundary_solve(k_z_1(n_max), n, target, basis == "poly" ? BasisMode::IntegerPolynomial : BasisMode::Binomial,
                                    d_max);
  out.cutoffs["n_max"] = n_max;
  out.cutoffs["d_max"] = d_max;
  out.result["target"] = json::poly(target);
  out.result["basis_size"] = sol.basis.size();
  out.result["solved"] = sol.solved;
  if (sol.solved) {
    out.result["witness"] = json::poly(sol.witness);
    out.result["witness_monomial"] = json::rational_poly(to_rational_poly(sol.witness));
    out.verdict = "solved";
  } else {
    out.verdict = "no-solution";
  }
  if (sol.certificate) {
    const auto& c = *sol.certificate;
    Json rows = Json::array(), w = Json::array();
    for (const auto& r : c.rows) rows.push_back(index_json(r));
    for (const auto& q : c.functional) w.push_back(json::rational(q));
    out.result["certificate"] = {{"rows", std::move(rows)}, {"functional", std::move(w)}, {"value", json::rational(c.value)}};
  }
}

void cmd_lens(const Json& args, const RunOptions&, Output& out) {
  const auto L = lens_orbits(static_cast<unsigned>(get_uint(args, "n")));
  out.result["n"] = L.n;
  out.result["units"] = L.units;
  out.result["homotopy_classes"] = L.homotopy_classes;
  out.result["isomorphism_classes"] = L.isomorphism_classes;
  if (L.homotopic_not_isomorphic) {
    out.result["homotopic_not_isomorphic"] = {L.homotopic_not_isomorphic->first, L.homotopic_not_isomorphic->second};
  } else {
    out.result["homotopic_not_isomorphic"] = nullptr;
  }
}

// ---------------------------------------------------------------- nilgroup

unsigned parse_suffix(const std::string& name) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(name.substr(1), &used);
    if (used + 1 == name.size() && v > 0 && v <= 64) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  bad("unknown group \"" + name + "\"");
}

unsigned unipotent_size(const Json& desc) {
  if (!desc.is_string()) bad("power needs a named unipotent group (heisenberg or uN)");
  const std::string name = desc.get<std::string>();
  if (name == "heisenberg") return 3;
  if (name.size() < 2 || name[0] != 'u') bad("power needs a named unipotent group (heisenberg or uN)");
  return parse_suffix(name);
}

void cmd_passi(const Json& args, const RunOptions&, Output& out) {
  const auto G = group_from_json(require(args, "group"));
  const auto f = json::to_poly(require(args, "fn"));
  if (f.nvars() != G.dim()) bad("fn has " + std::to_string(f.nvars()) + " variables, the group has dimension " +
                                std::to_string(G.dim()));
  const auto samples = static_cast<unsigned>(get_uint(args, "samples", 500));
  const auto radius = static_cast<unsigned>(get_uint(args, "radius", 3));
  const auto seed = get_uint(args, "seed", 1);
  const auto cert = passi_degree(f, G);
  Json coords = Json::array();
  for (const auto& c : cert.f_coordinates) coords.push_back(json::integer(c));
  out.result["degree"] = cert.degree;
  out.result["module_rank"] = cert.module_basis.size();
  out.result["chain_ranks"] = cert.chain_ranks;
  out.result["module_chain_ranks"] = cert.module_chain_ranks;
  out.result["f_coordinates"] = std::move(coords);
  out.cutoffs["samples"] = samples;
  out.cutoffs["radius"] = radius;
  if (cert.degree == 0) {
    out.verdict = "pass";
    return;
  }
  const auto cc = passi_cross_check(f, G, cert.degree, samples, radius, seed);
  out.result["cross_check"] = {{"samples", cc.samples},
                               {"failures_at_degree", cc.failures_at_degree},
                               {"witness_below", cc.witness_below}};
  out.verdict = cc.failures_at_degree == 0 && cc.witness_below ? "pass" : "fail";
}

void cmd_power(const Json& args, const RunOptions&, Output& out) {
  const unsigned n = unipotent_size(require(args, "group"));
  std::vector<Rational> coords;
  for (const auto& c : require(args, "g")) coords.push_back(json::to_rational(c));
  if (coords.size() != n * (n - 1) / 2) bad("g needs " + std::to_string(n * (n - 1) / 2) + " coordinates");
  const auto g = from_coordinates(n, coords);
  const Rational r = json::to_rational(require(args, "r"));
  const auto positions = malcev_positions(n);
  Json result = Json::array();
  if (args.contains("p")) {
    const unsigned long p = get_prime(args);
    const auto precision = static_cast<unsigned>(get_uint(args, "precision", 20));
    for (const auto& c : coords) {
      if (c.get_den() != 1) bad("p-adic powers need an integral g");
    }
    const auto entries = power_padic(g, PadicApprox::from_rational(p, r, precision));
    for (const auto& [i, j] : positions) {
      const auto& e = entries[i][j];
      result.push_back({{"residue", json::integer(e.residue())}, {"precision", e.precision()}});
    }
    out.cutoffs["p"] = p;
    out.cutoffs["precision"] = precision;
  } else {
    for (const auto& c : to_coordinates(power(g, r))) result.push_back(json::rational(c));
  }
  out.result["coordinates"] = std::move(result);
}

// ---------------------------------------------------------------- coeff

void cmd_mahler(const Json& args, const RunOptions&, Output& out) {
  const unsigned long p = get_prime(args);
  const auto k_max = static_cast<unsigned>(get_uint(args, "kmax", 32));
  const auto fn = Expression::parse(get_string(args, "fn"));
  const auto prof = mahler_profile(fn.integer_function(), p, k_max);
  Json entries = Json::array();
  for (const auto& e : prof.entries) {
    Json v = e.v ? Json(*e.v) : Json(nullptr);
    entries.push_back({{"k", e.k}, {"c", json::integer(e.c)}, {"v", std::move(v)}});
  }
  out.cutoffs["k_max"] = k_max;
  out.result["entries"] = std::move(entries);
  out.result["valuations_nondecreasing"] = prof.valuations_nondecreasing;
  out.result["support_end"] = prof.support_end ? Json(*prof.support_end) : Json(nullptr);
}

void cmd_certify(const Json& args, const RunOptions&, Output& out) {
  const unsigned long p = get_prime(args);
  const auto b = json::to_poly(require(args, "poly"));
  const auto samples = static_cast<unsigned>(get_uint(args, "samples", 100));
  const auto cert = certify_p_integral(b, p, samples, get_uint(args, "seed", 1));
  Json list = Json::array();
  for (const auto& s : cert.samples) {
    Json point = Json::array();
    for (const auto& q : s.point) point.push_back(json::rational(q));
    list.push_back({{"point", std::move(point)}, {"value", json::rational(s.value)}, {"integral", s.integral}});
  }
  out.cutoffs["samples"] = samples;
  out.result["representation"] = json::poly(cert.representation);
  out.result["samples"] = std::move(list);
  out.result["all_integral"] = cert.all_integral();
  out.verdict = cert.all_integral() ? "pass" : "fail";
}

// ---------------------------------------------------------------- golden

void cmd_golden(const Json& args, const RunOptions& options, Output& out) {
  std::vector<int> ids;
  if (args.contains("criteria")) {
    for (const auto& c : args.at("criteria")) ids.push_back(static_cast<int>(json::to_integer(c).get_si()));
  } else {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }
  const bool timings = get_bool(args, "timings", false);
  Json list = Json::array();
  std::size_t passed = 0;
  for (int id : ids) {
    const auto r = run_criterion(id, GoldenOptions{options.threads});
    Json item = {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}};
    if (timings) {
      item["seconds"] = r.seconds;
      item["budget_seconds"] = r.budget_seconds;
    }
    list.push_back(std::move(item));
    passed += r.passed;
  }
  out.result["criteria"] = std::move(list);
  out.result["passed"] = passed;
  out.result["total"] = ids.size();
  out.verdict = passed == ids.size() ? "pass" : "fail";
}

const std::map<std::string, Handler>& table() {
  static const std::map<std::string, Handler> t{
      {"struct", cmd_struct},         {"axioms", cmd_axioms},   {"homology", cmd_homology},
      {"snf", cmd_snf},               {"kz1-cohomology", cmd_kz1}, {"cocycle-solve", cmd_cocycle_solve},
      {"lens-orbits", cmd_lens},      {"passi", cmd_passi},     {"power", cmd_power},
      {"mahler", cmd_mahler},         {"certify", cmd_certify}, {"golden", cmd_golden},
  };
  return t;
}

// ---------------------------------------------------------------- text

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
  const bool leaf_array = j.is_array() && std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !leaf_array) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << "  " << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (const auto& [k, h] : table()) v.push_back(k);
    return v;
  }();
  return n;
}

std::string digest(const Json& args) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : args.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

MalcevGroup group_from_json(const Json& desc) {
  if (desc.is_object()) return json::to_malcev_group(desc);
  if (!desc.is_string()) bad("group must be a name or a group object");
  const std::string name = desc.get<std::string>();
  if (name == "heisenberg") return heisenberg();
  if (name.size() >= 2 && name[0] == 'u') return unipotent_group(parse_suffix(name));
  if (name.size() >= 2 && name[0] == 'z') return free_abelian(parse_suffix(name));
  bad("unknown group \"" + name + "\"");
}

Json run(const std::string& command, const Json& args, const RunOptions& options) {
  const auto it = table().find(command);
  if (it == table().end()) bad("unknown command \"" + command + "\"");
  if (!args.is_object()) bad("arguments must be a JSON object");
  Output out;
  try {
    it->second(args, options, out);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed arguments: ") + e.what());
  }
  Json report;
  report["command"] = command;
  report["args"] = args;
  report["inputs_digest"] = digest(args);
  report["cutoffs"] = std::move(out.cutoffs);
  report["result"] = std::move(out.result);
  report["verdict"] = out.verdict;
  return report;
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  const std::string command = report.value("command", "");
  os << command << ": " << report.value("verdict", "") << "\n";
  const Json& result = report.at("result");
  if (command == "kz1-cohomology") {
    for (const auto& piece : result.at("pieces")) {
      os << "  H^" << piece.at("n").get<unsigned>() << "  d=" << piece.at("d").get<unsigned>() << "  "
         << piece.at("group").at("text").get<std::string>() << "\n";
    }
  } else if (command == "golden") {
    for (const auto& c : result.at("criteria")) {
      os << "  " << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << " " << c.at("id").get<int>() << " "
         << c.at("name").get<std::string>() << ": " << c.at("detail").get<std::string>() << "\n";
    }
  } else {
    flatten(result, "", os);
  }
  if (!report.at("cutoffs").empty()) {
    os << "cutoffs:\n";
    flatten(report.at("cutoffs"), "", os);
  }
  return os.str();
}

}  // namespace numa::commands
