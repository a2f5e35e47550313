#pragma once

#include "safdim/ifs.hpp"

#include <string>
#include <string_view>

namespace safdim {

// System-description document: a JSON object
//   { "label": "name", "maps": [ {"c": "0.7", "b": "0.3", "d": "-0.2",
//                                 "u": "0", "v": "0.3"}, ... ] }
// Numbers are decimal strings (fraction strings "p/q" are also accepted, for
// parameters such as 8/9 that have no finite decimal form). Plain JSON
// numbers are tolerated but lose nothing only when their decimal form is
// what was meant.
//
// Throws SyntaxError (with byte position) on malformed JSON and
// ValidationError (listing every violation) on schema or invariant failures.
AffineIFS parse_system(std::string_view text);

AffineIFS load_system_file(const std::string& path);

// Inverse of parse_system; exact-channel values serialize bit-exactly.
std::string serialize_system(const AffineIFS& system);

void save_system_file(const AffineIFS& system, const std::string& path);

}  // namespace safdim
