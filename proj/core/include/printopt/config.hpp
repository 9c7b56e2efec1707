#pragma once

#include <iosfwd>
#include <string>

#include "printopt/market.hpp"

namespace printopt {

// Reads an instance from the documented config format: top-level `K` and `Q`,
// one `[[product]]` section per product with keys r, c_m, c_p, demand
// ("uniform" with `upper`, or "tabulated" with `knots = [[x, F], ...]`).
// Throws ValidationError (with a field path) on parse or schema errors,
// IoError when the file cannot be read.
Instance load_instance(const std::string& path);

// Same, from an already-open stream. `origin` is used in error messages.
Instance parse_instance(std::istream& in, const std::string& origin = "<stream>");

// Canonical config text for the instance; load(format(x)) reproduces x and
// format(load(p)) reproduces a canonically formatted file p byte for byte.
std::string format_instance(const Instance& inst);

void save_instance(const Instance& inst, const std::string& path);

}  // namespace printopt
