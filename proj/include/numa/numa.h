#ifndef NUMA_H
#define NUMA_H

/* C interface to the numa library. Every call returns a numa_status; on
 * failure numa_last_error() holds a message for the calling thread. Strings
 * returned through out-parameters are released with numa_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#define NUMA_API __declspec(dllexport)
#else
#define NUMA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum numa_status {
  NUMA_OK = 0,
  NUMA_NOT_NUMERICAL = 1,
  NUMA_ARITY_MISMATCH = 2,
  NUMA_INCONSISTENT_DATA = 3,
  NUMA_TRUNCATION_TOO_SMALL = 4,
  NUMA_NOT_A_GROUP = 5,
  NUMA_NOT_A_COCYCLE = 6,
  NUMA_NON_ADDITIVE_FACES = 7,
  NUMA_INVALID_TWISTING = 8,
  NUMA_PRECISION_EXHAUSTED = 9,
  NUMA_NON_NILPOTENT_ACTION = 10,
  NUMA_INVALID_ARGUMENT = 11,
  NUMA_INTERNAL = 12
} numa_status;

typedef struct numa_poly numa_poly;
typedef struct numa_report numa_report;

NUMA_API const char* numa_status_name(numa_status status);
/* Message of the last failed call on this thread, "" if none. */
NUMA_API const char* numa_last_error(void);
NUMA_API void numa_string_free(char* s);

/* Numerical polynomials in the binomial basis, JSON form
 * {"nvars": k, "terms": [{"idx": [..], "c": "<integer>"}]}. */
NUMA_API numa_status numa_poly_from_json(const char* json, numa_poly** out);
NUMA_API numa_status numa_poly_to_json(const numa_poly* poly, char** out);
NUMA_API size_t numa_poly_nvars(const numa_poly* poly);
/* Evaluates at a point of decimal integers; the value is a decimal string. */
NUMA_API numa_status numa_poly_evaluate(const numa_poly* poly, const char* const* point, size_t n, char** out);
NUMA_API void numa_poly_free(numa_poly* poly);

/* Passi degree of a function on a named group: "heisenberg", "uN" or "zD". */
NUMA_API numa_status numa_passi_degree(const numa_poly* f, const char* group, unsigned* degree);
/* 1 in *all_integral when every sampled value at a p-integral point is p-integral. */
NUMA_API numa_status numa_certify(const numa_poly* f, unsigned long p, unsigned samples, unsigned long long seed,
                                  int* all_integral);

/* Runs a named command (struct, axioms, homology, snf, kz1-cohomology,
 * cocycle-solve, lens-orbits, passi, power, mahler, certify, golden) on a
 * JSON object of arguments. threads = 0 means 1. */
NUMA_API numa_status numa_run(const char* command, const char* args_json, unsigned threads, numa_report** out);
/* Report JSON, indented by two spaces, valid until numa_report_free. */
NUMA_API const char* numa_report_json(const numa_report* report);
NUMA_API const char* numa_report_text(const numa_report* report);
/* "ok", "pass", "fail", "solved" or "no-solution". */
NUMA_API const char* numa_report_verdict(const numa_report* report);
NUMA_API void numa_report_free(numa_report* report);

/* Test hook: a nonzero value makes the Smith normal form deliberately wrong. */
NUMA_API void numa_set_snf_fault(int enabled);

#ifdef __cplusplus
}
#endif

#endif
