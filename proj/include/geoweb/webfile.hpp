#pragma once

#include "geoweb/web.hpp"

#include <filesystem>
#include <string_view>

namespace geoweb {

/// Web file (JSON):
///   {"dimension": n, "functions": ["x1", ...], "pointed": k, "domain": {"center": [...], "radius": r},
///    "labels": ["...", ...]}
/// pointed, domain and labels are optional. Errors name the offending field, e.g. "functions[2]".
WebChart parse_webfile(std::string_view text);
WebChart load_webfile(const std::filesystem::path& path);

} // namespace geoweb
