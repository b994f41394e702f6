#pragma once

// Matrix input files.
//
// JSON:  {"n": 2, "re": [[...], [...]], "im": [[...], [...]],
//         "q_re": [[...]], "q_im": [[...]]}        (im, q_re, q_im optional)
// Text:  first line n, then n lines of n "re,im" tokens separated by spaces;
//        blank lines and lines starting with '#' are skipped.

#include <optional>
#include <string>
#include <string_view>

#include "conric/matrix.hpp"

namespace conric::io {

struct MatrixFile {
    CMatrix a;
    std::optional<CMatrix> q;
};

/// All parse failures raise Error(input_error).
[[nodiscard]] MatrixFile parse_json(std::string_view text);
[[nodiscard]] MatrixFile parse_text(std::string_view text);
/// Picks the JSON parser when the first non-blank character is '{'.
[[nodiscard]] MatrixFile parse_auto(std::string_view text);
[[nodiscard]] MatrixFile read_file(const std::string& path);

/// Writes a in the text format, every component with 17 significant digits.
[[nodiscard]] std::string to_text(const CMatrix& a);

}  // namespace conric::io
