#pragma once

#include <filesystem>
#include <iosfwd>

#include "railedge/grid.hpp"

namespace railedge {

enum class PgmFormat { Plain /* P2 */, Binary /* P5 */ };

/// Reads a P2 or P5 greymap with maxval <= 255. Each sample becomes
/// sample / maxval. Throws IoError on unreadable or malformed input.
MaskGrid read_pgm(const std::filesystem::path& path);
MaskGrid read_pgm(std::istream& in);

/// Writes values clamped to [0, 1] as round(v * 255), maxval 255.
void write_pgm(const std::filesystem::path& path, const MaskGrid& grid,
               PgmFormat format = PgmFormat::Binary);
void write_pgm(std::ostream& out, const MaskGrid& grid, PgmFormat format = PgmFormat::Binary);

}  // namespace railedge
