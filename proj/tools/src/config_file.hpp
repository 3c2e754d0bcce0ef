#pragma once

#include <filesystem>

#include "ssakit/session.hpp"

namespace ssacli {

/// Applies `key = value` lines onto `config`. Blank lines and `#` comments are
/// ignored. Unknown keys raise ParameterError, malformed lines FormatError.
void apply_config_file(const std::filesystem::path& path, ssa::SessionConfig& config);

}  // namespace ssacli
