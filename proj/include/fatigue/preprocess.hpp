#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fatigue/dataset.hpp"
#include "fatigue/schema.hpp"

namespace fatigue {

struct PreprocessorState {
  // Fitted bounds for numeric features, keyed by feature name.
  std::vector<std::string> numeric_names;
  std::vector<double> mins;
  std::vector<double> maxes;
  double sentinel_missing = -10.0;
  double sentinel_infinite = 10.0;
  std::uint64_t schema_hash = 0;

  int numeric_index(const std::string& name) const;

  void save(const std::string& path) const;
  static PreprocessorState load(const std::string& path);
};

double fluence_to_dpa(double fluence);

PreprocessorState fit_preprocessor(const RawTable& records, const FeatureSchema& schema);

EncodedDataset transform(const RawTable& records, const PreprocessorState& state,
                         const FeatureSchema& schema);

/// Encodes the design matrix only; the target column may be entirely missing.
/// Used for prediction on unlabeled records.
Eigen::MatrixXd encode_features(const RawTable& records, const PreprocessorState& state,
                                const FeatureSchema& schema);

double inverse_transform_target(double y_log);

std::pair<EncodedDataset, EncodedDataset> train_test_split(const EncodedDataset& dataset,
                                                           double ratio, std::uint64_t seed);

struct PruneResult {
  EncodedDataset dataset;
  std::vector<std::string> removed;
};

PruneResult correlation_prune(const EncodedDataset& dataset, double threshold = 0.7);

}  // namespace fatigue
