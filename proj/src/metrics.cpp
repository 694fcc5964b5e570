#include "fatigue/metrics.hpp"

#include <cmath>
#include <fstream>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("target and prediction lengths differ");
  if (y_true.size() < 2) throw Error("need at least 2 samples for r2");
  double mean = y_true.mean();
  double ss_res = 0.0, ss_tot = 0.0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    double r = y_true(i) - y_pred(i);
    double t = y_true(i) - mean;
    ss_res += r * r;
    ss_tot += t * t;
  }
  if (ss_tot == 0.0) throw Error("targets have zero variance");
  return 1.0 - ss_res / ss_tot;
}

double mse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("target and prediction lengths differ");
  if (y_true.size() == 0) throw Error("empty vectors");
  double ss = 0.0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    double r = y_true(i) - y_pred(i);
    ss += r * r;
  }
  return ss / static_cast<double>(y_true.size());
}

double within_factor(const Eigen::VectorXd& y_true_log, const Eigen::VectorXd& y_pred_log,
                     double factor) {
  if (!(factor > 1.0)) throw Error("factor must exceed 1");
  if (y_true_log.size() != y_pred_log.size()) throw Error("target and prediction lengths differ");
  if (y_true_log.size() == 0) throw Error("empty vectors");
  double bound = std::log10(factor);
  int inside = 0;
  for (Eigen::Index i = 0; i < y_true_log.size(); ++i)
    if (std::abs(y_pred_log(i) - y_true_log(i)) <= bound) ++inside;
  return static_cast<double>(inside) / static_cast<double>(y_true_log.size());
}

MetricsRecord compute_metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                              const std::vector<double>& factors) {
  MetricsRecord record;
  record.r2 = r2(y_true, y_pred);
  record.mse = mse(y_true, y_pred);
  for (double f : factors) record.band_coverage[f] = within_factor(y_true, y_pred, f);
  record.n = static_cast<int>(y_true.size());
  return record;
}

std::string metrics_report(const MetricsRecord& record) {
  std::string out;
  out += "n = " + std::to_string(record.n) + "\n";
  out += "r2 = " + format_double(record.r2) + "\n";
  out += "mse = " + format_double(record.mse) + "\n";
  for (const auto& [factor, fraction] : record.band_coverage)
    out += "within_factor_" + format_double(factor) + " = " + format_double(fraction) + "\n";
  return out;
}

void save_metrics(const MetricsRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << metrics_report(record);
}

void parity_export(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                   const std::string& path) {
  if (y_true.size() != y_pred.size()) throw Error("target and prediction lengths differ");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(y_true.size()));
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    rows.push_back({format_double(y_true(i)), format_double(y_pred(i)),
                    format_double(std::abs(y_pred(i) - y_true(i)))});
  }
  write_csv(path, {"true_log10", "pred_log10", "abs_log_error"}, rows);
}

}  // namespace fatigue
