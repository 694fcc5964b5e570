#pragma once

#include <string>
#include <vector>

namespace fatigue {

/// Plain comma-separated text: one header row, "." decimal separator, no
/// quoting. Cells are kept as raw strings; interpretation is the caller's.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace fatigue
