#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fatigue {

using ModelFn = std::function<double(const Eigen::VectorXd&)>;

/// Interventional value of a coalition: average model output over background
/// rows with the instance's values substituted on the active features.
double value_function(const ModelFn& model, const Eigen::VectorXd& instance,
                      const std::vector<bool>& active, const Eigen::MatrixXd& background);

/// Exact attribution over the given player features (all features when empty)
/// by full subset enumeration; limited to 15 players. Non-player features stay
/// at the instance's values.
Eigen::VectorXd shapley_exact(const ModelFn& model, const Eigen::VectorXd& instance,
                              const Eigen::MatrixXd& background,
                              const std::vector<int>& players = {});

struct SampleEstimate {
  Eigen::VectorXd phi;
  Eigen::VectorXd se;  // per-feature standard error across permutations
};

SampleEstimate shapley_sample(const ModelFn& model, const Eigen::VectorXd& instance,
                              const Eigen::MatrixXd& background, int n_permutations,
                              std::uint64_t seed);

struct ShapResult {
  double base_value = 0.0;     // background mean prediction
  Eigen::MatrixXd phi;         // instances x features
  Eigen::MatrixXd values;      // instance feature values, same shape
  Eigen::VectorXd predictions; // model output per instance
  std::vector<std::string> feature_names;
};

ShapResult explain_instances(const ModelFn& model, const Eigen::MatrixXd& instances,
                             const Eigen::MatrixXd& background,
                             const std::vector<std::string>& feature_names, bool exact,
                             int n_permutations, std::uint64_t seed);

struct SummaryRow {
  std::string feature;
  int rank = 0;
  double mean_abs_phi = 0.0;
  double value_phi_correlation = 0.0;
};

/// Descending mean-|phi| ranking with a per-feature correlation between
/// feature value and attribution (the directionality signal).
std::vector<SummaryRow> summary(const ShapResult& result);

void save_shap_csv(const ShapResult& result, const std::string& path);
void save_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

}  // namespace fatigue
