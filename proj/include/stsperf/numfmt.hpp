#pragma once

#include <string>

namespace stsperf {

// Shortest decimal string that parses back to exactly the same double.
// Used everywhere bytes matter: model files, CSV output, rendered scripts.
std::string format_shortest(double value);

// Human-facing rendering with up to 6 significant digits (printf %g).
std::string format_sig6(double value);

// Strict double parse: the whole token must be consumed and the value must
// be finite. Returns false on failure; `out` is unspecified then.
bool parse_double(const std::string& text, double& out);

} // namespace stsperf
