#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fatigue/schema.hpp"

namespace fatigue {

/// One raw cell as read from a dataset CSV: a finite number, the literal
/// "inf", an empty cell (missing), or a category label.
struct RawCell {
  enum class State { Missing, Finite, Infinite, Label };
  State state = State::Missing;
  double value = 0.0;
  std::string label;

  static RawCell missing() { return {}; }
  static RawCell finite(double v) { return {State::Finite, v, {}}; }
  static RawCell infinite() { return {State::Infinite, 0.0, {}}; }
  static RawCell of_label(std::string s) { return {State::Label, 0.0, std::move(s)}; }
};

/// Schema-checked raw records: one column per schema CSV column plus the
/// target. Column order follows the schema, not the file.
struct RawTable {
  std::vector<std::string> columns;  // schema csv columns + target (last)
  std::vector<std::vector<RawCell>> records;
  std::string source;

  int column(const std::string& name) const;
  int target_column() const { return static_cast<int>(columns.size()) - 1; }
};

/// Reads a dataset CSV against a schema. Unknown and duplicate header columns
/// are rejected; numeric cells must parse, with empty meaning missing and the
/// literal "inf" meaning infinite. With require_target false the target column
/// may be absent (its cells are then missing), for prediction-only inputs.
RawTable load_csv(const std::string& path, const FeatureSchema& schema,
                  bool require_target = true);

/// Writes records back out in the standard dataset format (schema CSV columns
/// plus target). Used by the synthetic generator.
void save_csv(const RawTable& table, const std::string& path);

/// Normalized design matrix plus log10-life targets.
struct EncodedDataset {
  Eigen::MatrixXd X;  // n x d, column order = schema feature order
  Eigen::VectorXd y;  // log10 cycles to failure
  std::vector<std::string> feature_names;
  std::map<std::string, int> feature_index;
  int col_strain = -1;
  int col_temperature = -1;
  int col_dose = -1;
  std::string source;
  std::uint64_t schema_hash = 0;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  /// Row subset in the given order; keeps metadata.
  EncodedDataset subset(const std::vector<int>& row_indices) const;
};

}  // namespace fatigue
