#pragma once

#include <filesystem>
#include <vector>

#include "phasepairs/verify.hpp"

namespace phasepairs {

// Filled-contour rendering of log10(Q / max Q) for a 2-d grid, white dots at nodes.
void write_contour_png(const std::filesystem::path& path, const QxGrid& grid, const std::vector<Vec>& nodes,
                       int scale = 3);

}  // namespace phasepairs
