#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fatigue/loss.hpp"
#include "fatigue/mlp.hpp"
#include "fatigue/schema.hpp"

namespace testsupport {

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// Worst component gap, relative to the larger vector magnitude.
inline double rel_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / std::max(scale, 1e-12);
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(std::max(std::abs(a), std::abs(b)), 1e-12);
}

inline Eigen::VectorXd fd_input_gradient(const fatigue::MlpParams& p, const Eigen::VectorXd& x,
                                         double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (fatigue::forward(p, xp) - fatigue::forward(p, xm)) / (2.0 * h);
  }
  return g;
}

inline double fd_input_second(const fatigue::MlpParams& p, const Eigen::VectorXd& x, int i,
                              double h) {
  Eigen::VectorXd xp = x, xm = x;
  xp(i) += h;
  xm(i) -= h;
  double f0 = fatigue::forward(p, x);
  return (fatigue::forward(p, xp) - 2.0 * f0 + fatigue::forward(p, xm)) / (h * h);
}

template <typename LossFn>
fatigue::ParamGrads fd_param_gradients(fatigue::MlpParams p, LossFn&& loss, double h) {
  fatigue::ParamGrads g = fatigue::ParamGrads::zeros_like(p);
  for (std::size_t l = 0; l < p.W.size(); ++l) {
    for (Eigen::Index r = 0; r < p.W[l].rows(); ++r)
      for (Eigen::Index c = 0; c < p.W[l].cols(); ++c) {
        double saved = p.W[l](r, c);
        p.W[l](r, c) = saved + h;
        double fp = loss(p);
        p.W[l](r, c) = saved - h;
        double fm = loss(p);
        p.W[l](r, c) = saved;
        g.W[l](r, c) = (fp - fm) / (2.0 * h);
      }
    for (Eigen::Index r = 0; r < p.b[l].size(); ++r) {
      double saved = p.b[l](r);
      p.b[l](r) = saved + h;
      double fp = loss(p);
      p.b[l](r) = saved - h;
      double fm = loss(p);
      p.b[l](r) = saved;
      g.b[l](r) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

inline double flat_gap(const fatigue::ParamGrads& a, const fatigue::ParamGrads& b) {
  double scale = 1e-12, worst = 0.0;
  for (std::size_t l = 0; l < a.W.size(); ++l) {
    scale = std::max({scale, a.W[l].cwiseAbs().maxCoeff(), b.W[l].cwiseAbs().maxCoeff()});
    if (a.b[l].size() > 0)
      scale = std::max({scale, a.b[l].cwiseAbs().maxCoeff(), b.b[l].cwiseAbs().maxCoeff()});
  }
  for (std::size_t l = 0; l < a.W.size(); ++l) {
    worst = std::max(worst, (a.W[l] - b.W[l]).cwiseAbs().maxCoeff());
    if (a.b[l].size() > 0) worst = std::max(worst, (a.b[l] - b.b[l]).cwiseAbs().maxCoeff());
  }
  return worst / scale;
}

// Smallest |pre-activation| across hidden layers; used to keep finite
// difference probes away from the activation kink.
inline double kink_margin(const fatigue::MlpParams& p, const Eigen::VectorXd& x) {
  fatigue::ForwardTrace t = fatigue::extended_forward(p, x, {}, -1);
  double margin = 1e300;
  for (std::size_t l = 0; l + 1 < t.z.size(); ++l)
    margin = std::min(margin, t.z[l].cwiseAbs().minCoeff());
  return margin;
}

struct RandomCase {
  fatigue::MlpParams params;
  Eigen::VectorXd x;
};

// Random net and input, redrawn until every hidden pre-activation clears the
// kink margin.
inline RandomCase random_case(std::mt19937_64& rng, int max_width = 16, double margin = 2e-3,
                              int input_dim = 0) {
  std::uniform_int_distribution<int> depth_dist(1, 3);
  std::uniform_int_distribution<int> width_dist(2, max_width);
  std::normal_distribution<double> x_dist(0.0, 1.0);
  for (;;) {
    std::vector<int> dims;
    dims.push_back(input_dim > 0 ? input_dim : width_dist(rng));
    int hidden = depth_dist(rng);
    for (int i = 0; i < hidden; ++i) dims.push_back(width_dist(rng));
    dims.push_back(1);
    fatigue::MlpParams p = fatigue::init_params(dims, rng());
    for (auto& bias : p.b) {
      for (Eigen::Index i = 0; i < bias.size(); ++i) bias(i) = 0.1 * x_dist(rng);
    }
    Eigen::VectorXd x(dims.front());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = x_dist(rng);
    if (kink_margin(p, x) > margin) return {std::move(p), std::move(x)};
  }
}

// Schema with the three constrained numeric features and a target; the common
// fixture for loss and preprocessing tests.
inline fatigue::FeatureSchema role_schema() {
  fatigue::FeatureSchema schema;
  const char* names[] = {"strain_amplitude_pct", "test_temperature_c", "dose_dpa"};
  fatigue::RoleTag roles[] = {fatigue::RoleTag::StrainAmplitude,
                              fatigue::RoleTag::TestTemperature, fatigue::RoleTag::Dose};
  for (int i = 0; i < 3; ++i) {
    fatigue::FeatureSpec f;
    f.name = names[i];
    f.role = roles[i];
    schema.features.push_back(f);
  }
  schema.target_name = "cycles_to_failure";
  return schema;
}

}  // namespace testsupport
