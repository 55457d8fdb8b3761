#pragma once

#include <filesystem>
#include <iosfwd>

#include "windsweep/dataset.hpp"

namespace windsweep {

/// Speed-power scatter plot with points colored by verdict. Points with a
/// missing value are not drawn. The legend lists Normal plus every outlier
/// class that occurs. Output is byte-stable for fixed inputs.
void write_svg_scatter(const Dataset& dataset, const OutlierReport& report, std::ostream& out);
void emit_svg_scatter(const Dataset& dataset, const OutlierReport& report,
                      const std::filesystem::path& path);

}  // namespace windsweep
