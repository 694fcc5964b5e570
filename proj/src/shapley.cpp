#include "fatigue/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

double value_function(const ModelFn& model, const Eigen::VectorXd& instance,
                      const std::vector<bool>& active, const Eigen::MatrixXd& background) {
  if (background.rows() == 0) throw Error("empty background set");
  if (static_cast<Eigen::Index>(active.size()) != instance.size())
    throw Error("active mask length does not match instance");
  if (background.cols() != instance.size())
    throw Error("background width does not match instance");
  double sum = 0.0;
  Eigen::VectorXd x(instance.size());
  for (Eigen::Index b = 0; b < background.rows(); ++b) {
    for (Eigen::Index j = 0; j < instance.size(); ++j)
      x(j) = active[static_cast<std::size_t>(j)] ? instance(j) : background(b, j);
    sum += model(x);
  }
  return sum / static_cast<double>(background.rows());
}

Eigen::VectorXd shapley_exact(const ModelFn& model, const Eigen::VectorXd& instance,
                              const Eigen::MatrixXd& background,
                              const std::vector<int>& players) {
  if (background.rows() == 0) throw Error("empty background set");
  const Eigen::Index d = instance.size();
  std::vector<int> P = players;
  if (P.empty()) {
    P.resize(static_cast<std::size_t>(d));
    std::iota(P.begin(), P.end(), 0);
  }
  const int M = static_cast<int>(P.size());
  if (M > 15) {
    throw Error("exact enumeration supports at most 15 players, got " + std::to_string(M) +
                "; use sampling");
  }
  for (int p : P)
    if (p < 0 || p >= d) throw Error("player index out of range");

  const std::size_t nmask = std::size_t{1} << M;
  std::vector<double> v(nmask);
  std::vector<bool> active(static_cast<std::size_t>(d), true);
  for (std::size_t mask = 0; mask < nmask; ++mask) {
    for (int j = 0; j < M; ++j)
      active[static_cast<std::size_t>(P[static_cast<std::size_t>(j)])] =
          (mask >> j & 1u) != 0;
    v[mask] = value_function(model, instance, active, background);
  }

  std::vector<double> fact(static_cast<std::size_t>(M) + 1, 1.0);
  for (int i = 1; i <= M; ++i)
    fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < M; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double acc = 0.0;
    for (std::size_t mask = 0; mask < nmask; ++mask) {
      if (mask & bit) continue;
      int s = 0;
      for (int k = 0; k < M; ++k) s += static_cast<int>(mask >> k & 1u);
      double w = fact[static_cast<std::size_t>(s)] * fact[static_cast<std::size_t>(M - s - 1)] /
                 fact[static_cast<std::size_t>(M)];
      acc += w * (v[mask | bit] - v[mask]);
    }
    phi(P[static_cast<std::size_t>(j)]) = acc;
  }
  return phi;
}

SampleEstimate shapley_sample(const ModelFn& model, const Eigen::VectorXd& instance,
                              const Eigen::MatrixXd& background, int n_permutations,
                              std::uint64_t seed) {
  if (n_permutations < 1) throw Error("need at least 1 permutation");
  if (background.rows() == 0) throw Error("empty background set");
  const Eigen::Index d = instance.size();
  if (background.cols() != d) throw Error("background width does not match instance");
  const Eigen::Index B = background.rows();

  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);

  // Welford accumulation of per-permutation marginal contributions.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd contrib(d);
  Eigen::VectorXd x(d);

  for (int t = 1; t <= n_permutations; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    contrib.setZero();
    for (Eigen::Index b = 0; b < B; ++b) {
      x = background.row(b).transpose();
      double prev = model(x);
      for (Eigen::Index k = 0; k < d; ++k) {
        int j = perm[static_cast<std::size_t>(k)];
        x(j) = instance(j);
        double cur = model(x);
        contrib(j) += cur - prev;
        prev = cur;
      }
    }
    contrib /= static_cast<double>(B);
    Eigen::VectorXd delta = contrib - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta.cwiseProduct(contrib - mean);
  }

  SampleEstimate est;
  est.phi = mean;
  est.se = Eigen::VectorXd::Zero(d);
  if (n_permutations > 1) {
    for (Eigen::Index j = 0; j < d; ++j) {
      double var = m2(j) / static_cast<double>(n_permutations - 1);
      est.se(j) = std::sqrt(std::max(0.0, var) / static_cast<double>(n_permutations));
    }
  }
  return est;
}

ShapResult explain_instances(const ModelFn& model, const Eigen::MatrixXd& instances,
                             const Eigen::MatrixXd& background,
                             const std::vector<std::string>& feature_names, bool exact,
                             int n_permutations, std::uint64_t seed) {
  if (instances.rows() == 0) throw Error("no instances to explain");
  if (static_cast<Eigen::Index>(feature_names.size()) != instances.cols())
    throw Error("feature name count does not match instance width");

  ShapResult result;
  result.values = instances;
  result.feature_names = feature_names;
  result.phi.resize(instances.rows(), instances.cols());
  result.predictions.resize(instances.rows());

  if (background.rows() == 0) throw Error("empty background set");
  double base = 0.0;
  for (Eigen::Index b = 0; b < background.rows(); ++b)
    base += model(background.row(b).transpose());
  result.base_value = base / static_cast<double>(background.rows());

  for (Eigen::Index i = 0; i < instances.rows(); ++i) {
    Eigen::VectorXd instance = instances.row(i).transpose();
    result.predictions(i) = model(instance);
    if (exact) {
      result.phi.row(i) = shapley_exact(model, instance, background).transpose();
    } else {
      std::uint64_t row_seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1));
      result.phi.row(i) =
          shapley_sample(model, instance, background, n_permutations, row_seed).phi.transpose();
    }
  }
  return result;
}

std::vector<SummaryRow> summary(const ShapResult& result) {
  if (result.phi.rows() == 0) throw Error("empty attribution result");
  const Eigen::Index n = result.phi.rows();
  const Eigen::Index d = result.phi.cols();

  std::vector<SummaryRow> rows(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    SummaryRow& row = rows[static_cast<std::size_t>(j)];
    row.feature = result.feature_names[static_cast<std::size_t>(j)];
    row.mean_abs_phi = result.phi.col(j).cwiseAbs().mean();

    double mx = result.values.col(j).mean();
    double mp = result.phi.col(j).mean();
    double cov = 0.0, vx = 0.0, vp = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double dx = result.values(i, j) - mx;
      double dp = result.phi(i, j) - mp;
      cov += dx * dp;
      vx += dx * dx;
      vp += dp * dp;
    }
    row.value_phi_correlation = (vx > 0.0 && vp > 0.0) ? cov / std::sqrt(vx * vp) : 0.0;
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return a.mean_abs_phi > b.mean_abs_phi;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
  return rows;
}

void save_shap_csv(const ShapResult& result, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(result.phi.rows() * result.phi.cols()));
  for (Eigen::Index i = 0; i < result.phi.rows(); ++i)
    for (Eigen::Index j = 0; j < result.phi.cols(); ++j) {
      rows.push_back({std::to_string(i), result.feature_names[static_cast<std::size_t>(j)],
                      format_double(result.values(i, j)), format_double(result.phi(i, j))});
    }
  write_csv(path, {"instance_id", "feature", "value", "phi"}, rows);
}

void save_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({row.feature, std::to_string(row.rank), format_double(row.mean_abs_phi),
                   format_double(row.value_phi_correlation)});
  }
  write_csv(path, {"feature", "rank", "mean_abs_phi", "value_phi_correlation"}, out);
}

}  // namespace fatigue
