#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lisim/params.hpp"

namespace lisim {

// Directory holding ocp/, params/ and scenarios/. LISIM_DATA_DIR overrides the build default.
std::filesystem::path data_dir();

// Built-in presets: ncm523, ncm811, lfpo.
std::vector<std::string> preset_names();
CellParameters preset(std::string_view name);

// Parses a YAML parameter document. A top-level `base: <preset>` starts from that preset;
// every other key overrides one field. Unknown sections or keys throw Error(invalid_input).
CellParameters parse_parameters(const std::string& yaml_text);
CellParameters load_parameters(const std::filesystem::path& file);

// Accepts a preset name or a path to a YAML file.
CellParameters resolve_parameters(std::string_view name_or_path);

}  // namespace lisim
