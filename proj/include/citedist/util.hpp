#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace citedist {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);

/// Shortest round-trippable-enough rendering used in reports: integers print
/// without a fraction, everything else with up to 6 significant decimals.
std::string format_number(double value);

/// Writes `contents` to `path` through a sibling temporary file and rename,
/// so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

} // namespace citedist
