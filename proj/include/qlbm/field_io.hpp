#pragma once

#include "qlbm/lattice.hpp"

#include <filesystem>
#include <string>

namespace qlbm {

/// One line per y row (y = 0 first), x inner, comma separated, 17 significant digits.
std::string to_csv(Field<double> const &f);
void        write_csv(std::filesystem::path const &path, Field<double> const &f);
Field<double> read_csv(std::filesystem::path const &path);

} // namespace qlbm
