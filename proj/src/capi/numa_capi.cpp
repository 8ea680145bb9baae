#include "numa/numa.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "numa/coeff.hpp"
#include "numa/commands.hpp"
#include "numa/homalg.hpp"
#include "numa/nilgroup.hpp"

struct numa_poly {
  numa::BinomialPoly value;
};

struct numa_report {
  std::string json;
  std::string text;
  std::string verdict;
};

namespace {

static_assert(NUMA_NOT_NUMERICAL == static_cast<int>(numa::ErrorCode::NotNumerical) + 1);
static_assert(NUMA_INVALID_ARGUMENT == static_cast<int>(numa::ErrorCode::InvalidArgument) + 1);

thread_local std::string last_error;

numa_status status_of(numa::ErrorCode code) {
  return static_cast<numa_status>(static_cast<int>(code) + 1);
}

numa_status fail(numa_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
numa_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return NUMA_OK;
  } catch (const numa::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(NUMA_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NUMA_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NUMA_INTERNAL, e.what());
  } catch (...) {
    return fail(NUMA_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* name) {
  if (!p) throw numa::Error(numa::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

}  // namespace

extern "C" {

const char* numa_status_name(numa_status status) {
  switch (status) {
    case NUMA_OK: return "Ok";
    case NUMA_INTERNAL: return "Internal";
    default:
      if (status > NUMA_OK && status < NUMA_INTERNAL) {
        return numa::to_string(static_cast<numa::ErrorCode>(static_cast<int>(status) - 1));
      }
      return "Unknown";
  }
}

const char* numa_last_error(void) { return last_error.c_str(); }

void numa_string_free(char* s) { std::free(s); }

numa_status numa_poly_from_json(const char* json, numa_poly** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new numa_poly{numa::json::to_poly(numa::json::parse(json))};
  });
}

numa_status numa_poly_to_json(const numa_poly* poly, char** out) {
  return guarded([&] {
    need(poly, "poly");
    need(out, "out");
    *out = copy_string(numa::json::poly(poly->value).dump());
  });
}

size_t numa_poly_nvars(const numa_poly* poly) { return poly ? poly->value.nvars() : 0; }

numa_status numa_poly_evaluate(const numa_poly* poly, const char* const* point, size_t n, char** out) {
  return guarded([&] {
    need(poly, "poly");
    need(out, "out");
    if (n != poly->value.nvars()) {
      throw numa::Error(numa::ErrorCode::ArityMismatch, "point has " + std::to_string(n) + " coordinates, the polynomial " +
                                                            std::to_string(poly->value.nvars()) + " variables");
    }
    std::vector<numa::Integer> x(n);
    for (size_t i = 0; i < n; ++i) {
      need(point[i], "point coordinate");
      if (x[i].set_str(point[i], 10) != 0) {
        throw numa::Error(numa::ErrorCode::InvalidArgument, std::string("\"") + point[i] + "\" is not an integer");
      }
    }
    *out = copy_string(numa::evaluate(poly->value, x).get_str());
  });
}

void numa_poly_free(numa_poly* poly) { delete poly; }

numa_status numa_passi_degree(const numa_poly* f, const char* group, unsigned* degree) {
  return guarded([&] {
    need(f, "f");
    need(group, "group");
    need(degree, "degree");
    const auto G = numa::commands::group_from_json(numa::json::Json(group));
    if (f->value.nvars() != G.dim()) throw numa::Error(numa::ErrorCode::ArityMismatch, "f and the group differ in dimension");
    *degree = numa::passi_degree(f->value, G).degree;
  });
}

numa_status numa_certify(const numa_poly* f, unsigned long p, unsigned samples, unsigned long long seed,
                         int* all_integral) {
  return guarded([&] {
    need(f, "f");
    need(all_integral, "all_integral");
    *all_integral = numa::certify_p_integral(f->value, p, samples, seed).all_integral() ? 1 : 0;
  });
}

numa_status numa_run(const char* command, const char* args_json, unsigned threads, numa_report** out) {
  return guarded([&] {
    need(command, "command");
    need(out, "out");
    const auto args = args_json ? numa::json::parse(args_json) : numa::json::Json::object();
    const auto report = numa::commands::run(command, args, {threads ? threads : 1});
    *out = new numa_report{report.dump(2), numa::commands::render_text(report), report.at("verdict").get<std::string>()};
  });
}

const char* numa_report_json(const numa_report* report) { return report ? report->json.c_str() : ""; }
const char* numa_report_text(const numa_report* report) { return report ? report->text.c_str() : ""; }
const char* numa_report_verdict(const numa_report* report) { return report ? report->verdict.c_str() : ""; }
void numa_report_free(numa_report* report) { delete report; }

void numa_set_snf_fault(int enabled) { numa::set_snf_fault(enabled != 0); }

}  // extern "C"
