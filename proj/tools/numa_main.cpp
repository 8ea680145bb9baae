// numa: command-line front end over the C API.
//
// Exit status: 0 on success, 1 on a domain error or a failed check, 2 on a
// usage error (bad flags, unreadable files, malformed JSON).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "numa/numa.h"

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

/// Inline JSON, or the name of a file holding it.
Json json_or_file(const std::string& value, const std::string& what) {
  std::ifstream probe(value);
  return probe ? parse(read_file(value), what) : parse(value, what);
}

/// "1,1,0" or "[1, 1, \"1/2\"]".
Json vector_arg(const std::string& value) {
  if (!value.empty() && value.front() == '[') return parse(value, "vector");
  Json out = Json::array();
  std::stringstream ss(value);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

Json integer_list(const std::string& value) {
  Json out = Json::array();
  std::stringstream ss(value);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("\"" + item + "\" is not an integer");
    }
  }
  return out;
}

std::pair<long, long> range_arg(const std::string& value) {
  const auto dots = value.find("..");
  if (dots == std::string::npos) throw UsageError("range must look like a..b");
  try {
    return {std::stol(value.substr(0, dots)), std::stol(value.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("range must look like a..b");
  }
}

unsigned threads_from_env() {
  const char* t = std::getenv("NUMA_THREADS");
  if (!t || !*t) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(t, &end, 10);
  if (*end != '\0' || v == 0 || v > 256) throw UsageError("NUMA_THREADS must be an integer in 1..256");
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with numerical (binomial-basis) polynomial maps"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output = "json";
  app.add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string command;
  Json args = Json::object();
  std::function<void()> build;

  // struct h|g m n, struct f n
  auto* s_struct = app.add_subcommand("struct", "Structure polynomial coefficients");
  std::string kind;
  std::vector<unsigned> mn;
  s_struct->add_option("kind", kind, "h, f or g")->required()->check(CLI::IsMember({"h", "f", "g"}));
  s_struct->add_option("indices", mn, "m n for h and g, n for f")->required()->expected(1, 2);

  auto* s_axioms = app.add_subcommand("axioms", "Check the numerical-ring axioms");
  std::string ring, range = "-10..10";
  unsigned bound = 4;
  s_axioms->add_option("--ring", ring, "integers, pointwise:N or free:K")->required();
  s_axioms->add_option("--range", range, "Sample range a..b");
  s_axioms->add_option("--bound", bound, "Largest structure index");

  std::string file;
  auto* s_homology = app.add_subcommand("homology", "Homology of a complex file");
  s_homology->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* s_snf = app.add_subcommand("snf", "Smith normal form of a matrix or of each differential");
  s_snf->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* s_kz1 = app.add_subcommand("kz1-cohomology", "Graded numerical cohomology of K(Z,1)");
  unsigned nmax = 4, dmax = 6;
  bool unnormalized = false;
  s_kz1->add_option("--nmax", nmax, "Simplicial truncation");
  s_kz1->add_option("--dmax", dmax, "Largest graded degree");
  s_kz1->add_flag("--unnormalized", unnormalized, "Use all cochains");

  auto* s_cocycle = app.add_subcommand("cocycle-solve", "Solve d c = ((x+y)^p - x^p - y^p)/p on K(Z,1)");
  unsigned long p = 0;
  std::string basis = "binom", target;
  std::optional<unsigned> cdmax, level, cnmax;
  s_cocycle->add_option("--p", p, "Prime");
  s_cocycle->add_option("--basis", basis)->check(CLI::IsMember({"poly", "binom"}));
  s_cocycle->add_option("--dmax", cdmax, "Ansatz degree, default p+1");
  s_cocycle->add_option("--target", target, "Target cochain (JSON or file) instead of the p-cocycle");
  s_cocycle->add_option("--n", level, "Level of the target");
  s_cocycle->add_option("--nmax", cnmax, "Simplicial truncation");

  auto* s_lens = app.add_subcommand("lens-orbits", "Homotopy and isomorphism classes of units mod n");
  unsigned lens_n = 0;
  s_lens->add_option("n", lens_n)->required()->check(CLI::Range(2u, 100000u));

  auto* s_passi = app.add_subcommand("passi", "Passi degree of a function on a nilpotent group");
  std::string group = "heisenberg", fn;
  unsigned samples = 500, radius = 3;
  unsigned long long seed = 1;
  s_passi->add_option("--group", group, "heisenberg, uN, zD, or a group (JSON or file)");
  s_passi->add_option("--fn", fn, "Function (JSON or file)")->required();
  s_passi->add_option("--samples", samples);
  s_passi->add_option("--radius", radius);
  s_passi->add_option("--seed", seed);

  auto* s_power = app.add_subcommand("power", "g^r in a unipotent group");
  std::string g, r;
  std::optional<unsigned> precision;
  s_power->add_option("--group", group, "heisenberg or uN");
  s_power->add_option("--g", g, "Malcev coordinates, e.g. 1,1,0")->required();
  s_power->add_option("--r", r, "Exponent a/b")->required();
  s_power->add_option("--p", p, "Prime for a p-adic exponent");
  s_power->add_option("--precision", precision, "p-adic digits");

  auto* s_mahler = app.add_subcommand("mahler", "Mahler coefficients of an expression in x");
  unsigned kmax = 32;
  s_mahler->add_option("--p", p)->required();
  s_mahler->add_option("--fn", fn, "Expression, e.g. 3^x")->required();
  s_mahler->add_option("--kmax", kmax);

  auto* s_certify = app.add_subcommand("certify", "p-integrality certificate for a polynomial");
  unsigned csamples = 100;
  s_certify->add_option("--p", p)->required();
  s_certify->add_option("file", file, "Polynomial (JSON or file)")->required();
  s_certify->add_option("--samples", csamples);
  s_certify->add_option("--seed", seed);

  auto* s_golden = app.add_subcommand("golden", "Run the acceptance criteria");
  std::string criteria;
  bool timings = false, fault = false;
  s_golden->add_option("--criteria", criteria, "Comma-separated ids");
  s_golden->add_flag("--timings", timings, "Include wall-clock times");
  s_golden->add_flag("--inject-snf-fault", fault, "Break the Smith normal form first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  unsigned threads = 1;
  try {
    threads = threads_from_env();
    command = app.get_subcommands().front()->get_name();
    if (command == "struct") {
      args["kind"] = kind;
      if (kind == "f") {
        if (mn.size() != 1) throw UsageError("struct f takes one index");
        args["n"] = mn[0];
      } else {
        if (mn.size() != 2) throw UsageError("struct " + kind + " takes two indices");
        args["m"] = mn[0];
        args["n"] = mn[1];
      }
    } else if (command == "axioms") {
      const auto [lo, hi] = range_arg(range);
      args = {{"ring", ring}, {"lo", lo}, {"hi", hi}, {"bound", bound}};
    } else if (command == "homology") {
      args["complex"] = parse(read_file(file), file);
    } else if (command == "snf") {
      const Json j = parse(read_file(file), file);
      args[j.is_object() && j.contains("ranks") ? "complex" : "matrix"] = j;
    } else if (command == "kz1-cohomology") {
      args = {{"nmax", nmax}, {"dmax", dmax}, {"normalized", !unnormalized}};
    } else if (command == "cocycle-solve") {
      if (target.empty() && p == 0) throw UsageError("cocycle-solve needs --p or --target");
      if (!target.empty()) args["target"] = json_or_file(target, "target");
      if (p) args["p"] = p;
      args["basis"] = basis;
      if (level) args["n"] = *level;
      if (cnmax) args["nmax"] = *cnmax;
      if (cdmax) args["dmax"] = *cdmax;
    } else if (command == "lens-orbits") {
      args["n"] = lens_n;
    } else if (command == "passi") {
      args["group"] = group.find_first_of("{./") == std::string::npos ? Json(group) : json_or_file(group, "group");
      args["fn"] = json_or_file(fn, "fn");
      args["samples"] = samples;
      args["radius"] = radius;
      args["seed"] = seed;
    } else if (command == "power") {
      args = {{"group", group}, {"g", vector_arg(g)}, {"r", r}};
      if (p) args["p"] = p;
      if (precision) {
        if (!p) throw UsageError("--precision needs --p");
        args["precision"] = *precision;
      }
    } else if (command == "mahler") {
      args = {{"p", p}, {"fn", fn}, {"kmax", kmax}};
    } else if (command == "certify") {
      args = {{"p", p}, {"poly", json_or_file(file, "poly")}, {"samples", csamples}, {"seed", seed}};
    } else if (command == "golden") {
      if (!criteria.empty()) args["criteria"] = integer_list(criteria);
      if (timings) args["timings"] = true;
      if (fault) numa_set_snf_fault(1);
    }
  } catch (const UsageError& e) {
    std::cerr << "numa: " << e.what() << "\n" << app.help();
    return 2;
  }

  numa_report* report = nullptr;
  const numa_status status = numa_run(command.c_str(), args.dump().c_str(), threads, &report);
  if (status != NUMA_OK) {
    std::cerr << "numa: " << numa_status_name(status) << ": " << numa_last_error() << "\n";
    return status == NUMA_INVALID_ARGUMENT ? 2 : 1;
  }
  std::cout << (output == "json" ? std::string(numa_report_json(report)) + "\n" : numa_report_text(report));
  const bool failed = std::string(numa_report_verdict(report)) == "fail";
  numa_report_free(report);
  return failed ? 1 : 0;
}
