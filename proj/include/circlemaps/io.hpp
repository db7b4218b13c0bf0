#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circlemaps/family.hpp"
#include "circlemaps/skew_product.hpp"

namespace circlemaps {

std::string version_string();

// Definition files are JSON documents.
//
// Circle family:
//   {"label": "...", "winding": 1, "const": [c0, c1, ...],
//    "harmonics": [{"j": 1, "a": [...], "b": [...]}]}
// Skew map:
//   {"label": "...", "m": 2,
//    "modes": [{"jx": 0, "jy": 1, "a": [...], "b": [...]}]}
// Coefficient lists are polynomials in t in ascending powers; a bare number
// is a constant. Errors throw ParseError naming the source and, for syntax
// errors, the line and column.
CircleFamily parse_family(std::string_view text, const std::string& source = "<input>");
SkewMap parse_skew_map(std::string_view text, const std::string& source = "<input>");

// Reads a whole file; throws ParseError naming the path when it cannot.
std::string read_file(const std::filesystem::path& path);

// Writes through a temporary file in the same directory and renames it into
// place, so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Hex SHA-1 of "blob <size>\0" + content, as git computes object ids.
std::string git_blob_hash(std::string_view content);

// Shortest round-trip-safe formatting with 17 significant digits.
std::string format_real(double v);

// Minimal CSV builder with a fixed header.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  Csv& row(const std::vector<std::string>& cells);
  const std::string& str() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

struct ExperimentReport {
  std::string id;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();      // labels, definition hashes
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();  // grids, seeds, tolerances
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<std::string> tables;  // CSV files written alongside
  double wall_clock_seconds = 0.0;

  std::string to_json() const;
};

}  // namespace circlemaps
