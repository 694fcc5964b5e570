#pragma once

#include <Eigen/Dense>

#include "fatigue/mlp.hpp"

namespace fatigue {

enum class ConstraintMode { Literal, Hinge };

ConstraintMode constraint_mode_from_string(const std::string& s);
std::string to_string(ConstraintMode m);

struct LossConfig {
  double delta = 1.0;
  double q = 0.01;
  double beta = 100.0;
  double omega = 0.2;
  ConstraintMode mode = ConstraintMode::Hinge;
  int col_strain = -1;
  int col_temperature = -1;
  int col_dose = -1;

  void validate(int input_dim) const;
};

double huber(double y_true, double y_pred, double delta);
double reg_r(const Eigen::VectorXd& predictions, double q);
double data_loss(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                 const LossConfig& cfg);

double g_transform(double x, double beta);
double g_transform_prime(double x, double beta);

/// Per-sample constraint residuals. In hinge mode only sign violations are
/// nonzero; in literal mode these are the raw derivatives.
struct PdeResiduals {
  Eigen::VectorXd strain;       // slope along the strain column
  Eigen::VectorXd curvature;    // second derivative along the strain column
  Eigen::VectorXd temperature;  // slope along the temperature column
  Eigen::VectorXd dose;         // slope along the dose column
};

PdeResiduals pde_residuals(const MlpParams& params, const Eigen::MatrixXd& X,
                           const LossConfig& cfg);

double loss_pde(const MlpParams& params, const Eigen::MatrixXd& X, const LossConfig& cfg);

double loss_total(const MlpParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const LossConfig& cfg);

struct LossBreakdown {
  double total = 0.0;
  double data = 0.0;
  double pde = 0.0;
  ParamGrads grads;
};

/// Loss value plus exact parameter gradient of the full objective, including
/// the paths through first and second input derivatives. With omega = 0 the
/// derivative machinery is skipped entirely and the result is the plain data
/// loss and its gradient.
LossBreakdown loss_total_with_gradient(const MlpParams& params, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& y, const LossConfig& cfg);

}  // namespace fatigue
