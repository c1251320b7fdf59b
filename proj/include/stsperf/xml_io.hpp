#pragma once

#include <string>

#include "stsperf/model.hpp"

namespace stsperf {

// Parses the XML encoding of a simulation model. Strict: unknown elements
// and attributes, duplicate attributes, malformed numbers and a wrong
// timeUnit are all ParseError, with 1-based line/column of the offending
// construct. The result is structurally complete but NOT semantically
// validated; run validate() on it before simulating or analyzing.
StsModel parse_model(const std::string& text);

// Canonical serialization: fixed attribute order, two-space indentation,
// transitions in document order, numbers as the shortest decimals that
// round-trip to the same double. parse_model(serialize_model(m)) == m for
// every structurally complete m, and serializing a parsed canonical file
// reproduces it byte for byte.
std::string serialize_model(const StsModel& model);

} // namespace stsperf
