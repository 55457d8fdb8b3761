#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "windsweep/dataset.hpp"
#include "windsweep/pipeline.hpp"
#include "windsweep/synth.hpp"

namespace windsweep {

/// Flat key=value settings. Later sources override earlier ones.
using Settings = std::map<std::string, std::string>;

/// One `key = value` per line; blank lines and `#` comments are ignored.
Settings parse_settings(std::istream& in);
Settings read_settings(const std::filesystem::path& path);

/// Throws InvalidConfig on an unknown key or an unparseable value.
void apply_pipeline_settings(const Settings& settings, PipelineConfig& config, CsvSchema& schema);
void apply_synth_settings(const Settings& settings, SynthConfig& config);

/// Parses "v_low:v_high:level:thickness" bands separated by ';'.
std::vector<StackedBand> parse_bands(const std::string& text);

}  // namespace windsweep
