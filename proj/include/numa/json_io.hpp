#pragma once

// JSON forms of the core types.
//
//   integer  number when it fits in 64 bits, otherwise a decimal string
//   poly     {"nvars": k, "terms": [{"idx": [..], "c": "<integer>"}, ...]}
//   rpoly    {"nvars": k, "terms": [{"idx": [..], "num": "..", "den": ".."}, ...]}
//   matrix   [[..], ..] or {"rows": r, "cols": c, "data": [[..], ..]}
//   complex  {"ranks": {"<n>": r}, "diff": {"<n>": matrix}, "orientation": "homological"}
//   group    {"dim": d, "mult": [poly], "inv": [poly], "unit": [..], "generators": [[..]]}

#include <string>

#include "json.hpp"
#include "numa/binom.hpp"
#include "numa/homalg.hpp"
#include "numa/nilgroup.hpp"

namespace numa::json {

using Json = nlohmann::ordered_json;

Json integer(const Integer& v);
Integer to_integer(const Json& j);
/// "a/b", or an integer when the denominator is 1.
Json rational(const Rational& q);
/// Accepts integers and "a/b" strings.
Rational to_rational(const Json& j);

Json poly(const BinomialPoly& b);
BinomialPoly to_poly(const Json& j);
/// {"nvars": k, "terms": [{"idx": [..], "num": "<integer>", "den": "<integer>"}]}
Json rational_poly(const RationalPoly& r);

Json matrix(const IntMatrix& m);
IntMatrix to_matrix(const Json& j);

Json complex(const FreeComplex& C);
FreeComplex to_complex(const Json& j);

Json group(const FinAbGroup& G);

Json malcev_group(const MalcevGroup& G);
MalcevGroup to_malcev_group(const Json& j);

/// Parses text; malformed input becomes InvalidArgument.
Json parse(const std::string& text);

}  // namespace numa::json
