#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "covdepth/matrix.hpp"

namespace covdepth::cli {

/// Parses the plain-text matrix format:
///   header  q p m [c0 ... cm] k n   (modulus omitted when m = 1)
///   k rows of n integers in [0, q), '#' comment lines ignored anywhere.
/// Errors carry the file name and line number of the offending token.
GeneratorMatrix parse_matrix_file(const std::string& path);
GeneratorMatrix parse_matrix_text(const std::string& text,
                                  const std::string& name);

/// Canonical serialization; parse followed by serialize is byte-stable on
/// canonical files.
std::string serialize_matrix_file(const GeneratorMatrix& m);

/// Exit codes: 0 success, 1 usage error, 2 computation precondition
/// violation, 3 reproduction mismatch.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace covdepth::cli
