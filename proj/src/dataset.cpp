#include "fatigue/dataset.hpp"

#include <charconv>
#include <set>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

RawCell parse_numeric_cell(const std::string& raw, const std::string& where) {
  std::string s = trim(raw);
  if (s.empty()) return RawCell::missing();
  if (s == "inf") return RawCell::infinite();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(where + ": cannot parse numeric cell '" + raw + "'");
  return RawCell::finite(v);
}

}  // namespace

int RawTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

RawTable load_csv(const std::string& path, const FeatureSchema& schema, bool require_target) {
  schema.validate();
  CsvTable csv = read_csv(path);

  std::set<std::string> seen;
  for (const auto& col : csv.header) {
    if (!seen.insert(col).second) throw Error(path + ": duplicate header column '" + col + "'");
  }

  std::vector<std::string> wanted = schema.csv_columns();
  wanted.push_back(schema.target_name);
  std::set<std::string> known(wanted.begin(), wanted.end());
  for (const auto& col : csv.header) {
    if (!known.count(col)) throw Error(path + ": unknown column '" + col + "'");
  }

  // Which schema kind reads each wanted column. Group columns carry labels.
  std::set<std::string> label_columns;
  for (const auto& f : schema.features)
    if (f.kind == FeatureKind::OneHot) label_columns.insert(f.group);

  RawTable table;
  table.columns = wanted;
  table.source = path;

  std::vector<int> src(wanted.size());
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    src[i] = csv.column(wanted[i]);
    if (src[i] < 0) {
      if (wanted[i] == schema.target_name && !require_target) continue;
      throw Error(path + ": missing required column '" + wanted[i] + "'");
    }
  }

  table.records.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    std::vector<RawCell> record(wanted.size());
    for (std::size_t i = 0; i < wanted.size(); ++i) {
      if (src[i] < 0) continue;  // absent optional target stays missing
      const std::string& raw = csv.rows[r][static_cast<std::size_t>(src[i])];
      std::string where = path + ": row " + std::to_string(r + 2) + ", column '" + wanted[i] + "'";
      if (label_columns.count(wanted[i])) {
        std::string label = trim(raw);
        record[i] = label.empty() ? RawCell::missing() : RawCell::of_label(label);
      } else {
        record[i] = parse_numeric_cell(raw, where);
      }
    }
    table.records.push_back(std::move(record));
  }
  return table;
}

void save_csv(const RawTable& table, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.records.size());
  for (const auto& record : table.records) {
    std::vector<std::string> row;
    row.reserve(record.size());
    for (const auto& cell : record) {
      switch (cell.state) {
        case RawCell::State::Missing: row.emplace_back(); break;
        case RawCell::State::Finite: row.push_back(format_double(cell.value)); break;
        case RawCell::State::Infinite: row.emplace_back("inf"); break;
        case RawCell::State::Label: row.push_back(cell.label); break;
      }
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, table.columns, rows);
}

EncodedDataset EncodedDataset::subset(const std::vector<int>& row_indices) const {
  EncodedDataset out;
  out.X.resize(static_cast<Eigen::Index>(row_indices.size()), X.cols());
  out.y.resize(static_cast<Eigen::Index>(row_indices.size()));
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(row_indices[i]);
    out.y(static_cast<Eigen::Index>(i)) = y(row_indices[i]);
  }
  out.feature_names = feature_names;
  out.feature_index = feature_index;
  out.col_strain = col_strain;
  out.col_temperature = col_temperature;
  out.col_dose = col_dose;
  out.source = source;
  out.schema_hash = schema_hash;
  return out;
}

}  // namespace fatigue
