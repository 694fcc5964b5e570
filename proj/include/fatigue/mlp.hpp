#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fatigue {

enum class Activation { Selu, Identity };

struct MlpParams {
  std::vector<int> dims;
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;
  double selu_lambda = 1.05074;
  double selu_alpha = 1.67326;
  Activation activation = Activation::Selu;
  std::uint64_t schema_hash = 0;

  int input_dim() const { return dims.empty() ? 0 : dims.front(); }
  int layer_count() const { return static_cast<int>(W.size()); }
  void validate() const;

  void save(const std::string& path) const;
  static MlpParams load(const std::string& path);
};

double selu(double x, double lambda, double alpha);
double selu_prime(double x, double lambda, double alpha);
double selu_second(double x, double lambda, double alpha);

MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed);

double forward(const MlpParams& p, const Eigen::VectorXd& x);
Eigen::VectorXd forward_batch(const MlpParams& p, const Eigen::MatrixXd& X);

Eigen::VectorXd input_gradient(const MlpParams& p, const Eigen::VectorXd& x);
double input_second_diagonal(const MlpParams& p, const Eigen::VectorXd& x, int i);

/// Forward pass that also propagates tangent state for selected input columns
/// and, for one designated column, the diagonal curvature state. Holds
/// everything the reverse sweep needs to differentiate a scalar function of
/// (value, first derivatives, second derivative) with respect to parameters.
struct ForwardTrace {
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> z;  // pre-activations per affine layer
  std::vector<Eigen::VectorXd> a;  // activations per layer; last entry is the output
  std::vector<int> cols;           // tracked input columns
  std::vector<std::vector<Eigen::VectorXd>> s;  // s[k][l] = d z[l] / d x_cols[k]
  std::vector<std::vector<Eigen::VectorXd>> u;  // u[k][l] = d a[l] / d x_cols[k]
  int curv_pos = -1;               // index into cols of the curvature column, -1 if none
  std::vector<Eigen::VectorXd> r;  // r[l] = d2 z[l] / d x_c^2
  std::vector<Eigen::VectorXd> c;  // c[l] = d2 a[l] / d x_c^2

  double value() const { return a.back()(0); }
  double first(int k) const { return s[static_cast<std::size_t>(k)].back()(0); }
  double second() const { return r.back()(0); }
};

ForwardTrace extended_forward(const MlpParams& p, const Eigen::VectorXd& x,
                              const std::vector<int>& cols, int curv_col);

struct ParamGrads {
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;

  static ParamGrads zeros_like(const MlpParams& p);
  double global_norm() const;
  void scale(double s);
};

/// Accumulates into grads the parameter gradient of a scalar loss whose
/// adjoints with respect to the trace outputs are ybar (output value),
/// gbar[k] (first derivative for cols[k]) and hbar (second derivative).
void extended_backward(const MlpParams& p, const ForwardTrace& t, double ybar,
                       const std::vector<double>& gbar, double hbar, ParamGrads& grads);

/// Reverse-mode gradient of a plain data loss: per-sample adjoints of the
/// prediction, summed over the batch.
ParamGrads param_gradients(const MlpParams& p, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& loss_grad_per_sample);

}  // namespace fatigue
