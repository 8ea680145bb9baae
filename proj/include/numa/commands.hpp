#pragma once

// Named commands over JSON arguments, producing reports of the form
//
//   {"command": name, "args": {...}, "inputs_digest": "<fnv1a-64 hex>",
//    "cutoffs": {...}, "result": {...}, "verdict": "..."}
//
// Reports depend only on the command and its arguments, so they are
// byte-stable across runs and thread counts. Verdicts are "ok" for plain
// computations, "pass" / "fail" for checks, and "solved" / "no-solution" for
// cocycle-solve.

#include <string>
#include <vector>

#include "numa/json_io.hpp"

namespace numa::commands {

using json::Json;

struct RunOptions {
  unsigned threads = 1;
};

/// Names accepted by run().
const std::vector<std::string>& names();

/// Throws numa::Error; InvalidArgument for unknown commands and bad arguments.
Json run(const std::string& command, const Json& args, const RunOptions& options = {});

/// FNV-1a over the compact serialization of args.
std::string digest(const Json& args);

/// Human-readable rendering of a report.
std::string render_text(const Json& report);

/// "heisenberg", "uN" (unipotent N x N), "zD" (free abelian of rank D), or a
/// group object.
MalcevGroup group_from_json(const Json& desc);

}  // namespace numa::commands
