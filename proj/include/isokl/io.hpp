#pragma once

#include <filesystem>
#include <string>

#include "isokl/types.hpp"

namespace isokl {

/// Matrix interchange format `.cmat.json`:
/// {"rows": m, "cols": n, "entries": [[re, im], ...]} row-major, full double
/// precision (17 significant digits).
Mat read_cmat(const std::filesystem::path& path);

void write_cmat(const std::filesystem::path& path, const Mat& m);

std::string cmat_to_string(const Mat& m);

Mat cmat_from_string(const std::string& text);

}  // namespace isokl
