#pragma once

#include <string>
#include <vector>

namespace curv4 {

/// Fixed 17-significant-digit decimal form; lossless for doubles and
/// byte-stable across runs.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string serialize() const;
};

/// Writes content atomically: temporary file in the target directory, then
/// rename over the final path.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace curv4
