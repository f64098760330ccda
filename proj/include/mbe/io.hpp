#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mbe::io {

// Reads a UTF-8 text file into lines. Strips a trailing '\r' per line and a
// leading BOM. Throws DataError when the file is missing or not valid UTF-8
// (the message names the first bad line).
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Like read_lines, but drops blank lines and lines starting with '#', and
// trims the rest.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

// Writes `contents` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace mbe::io
