#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include "json.hpp"

namespace cclt::io {

/// Writes through `body` into a sibling temp file, then renames it over
/// `path`. Creates missing parent directories. Readers never see a partial file.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body);

/// Two-space indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json read_json(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

}  // namespace cclt::io
