#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fatigue {

double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);
double mse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

/// Fraction of samples whose predicted life lies within [N/f, N*f]; the
/// boundary |delta_log| = log10(f) counts as inside.
double within_factor(const Eigen::VectorXd& y_true_log, const Eigen::VectorXd& y_pred_log,
                     double factor);

struct MetricsRecord {
  double r2 = 0.0;
  double mse = 0.0;
  std::map<double, double> band_coverage;
  int n = 0;
};

MetricsRecord compute_metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                              const std::vector<double>& factors = {2.0, 5.0});

/// Key-value lines, one metric per line, deterministic order.
std::string metrics_report(const MetricsRecord& record);
void save_metrics(const MetricsRecord& record, const std::string& path);

void parity_export(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                   const std::string& path);

}  // namespace fatigue
