#include "fatigue/loss.hpp"

#include <cmath>

#include "fatigue/util.hpp"

namespace fatigue {

ConstraintMode constraint_mode_from_string(const std::string& s) {
  if (s == "literal") return ConstraintMode::Literal;
  if (s == "hinge") return ConstraintMode::Hinge;
  throw Error("unknown constraint mode '" + s + "'");
}

std::string to_string(ConstraintMode m) {
  return m == ConstraintMode::Literal ? "literal" : "hinge";
}

void LossConfig::validate(int input_dim) const {
  if (!(delta > 0.0)) throw Error("delta must be positive");
  if (q < 0.0) throw Error("q must be non-negative");
  if (!(beta > 0.0)) throw Error("beta must be positive");
  if (omega < 0.0) throw Error("omega must be non-negative");
  if (omega > 0.0) {
    if (col_strain < 0 || col_temperature < 0 || col_dose < 0)
      throw Error("constrained columns must be set when omega > 0");
    if (col_strain >= input_dim || col_temperature >= input_dim || col_dose >= input_dim)
      throw Error("constrained column out of range");
    if (col_strain == col_temperature || col_strain == col_dose || col_temperature == col_dose)
      throw Error("constrained columns must be distinct");
  }
}

double huber(double y_true, double y_pred, double delta) {
  if (!(delta > 0.0)) throw Error("delta must be positive");
  double e = y_true - y_pred;
  double ae = std::abs(e);
  if (ae <= delta) return 0.5 * e * e;
  return delta * (ae - 0.5 * delta);
}

double reg_r(const Eigen::VectorXd& predictions, double q) {
  if (predictions.size() == 0) throw Error("empty prediction vector");
  double m = predictions.mean();
  return q * m * m;
}

double data_loss(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                 const LossConfig& cfg) {
  if (y_true.size() != y_pred.size()) throw Error("target and prediction lengths differ");
  if (y_true.size() == 0) throw Error("empty batch");
  double h = 0.0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) h += huber(y_true(i), y_pred(i), cfg.delta);
  return h / static_cast<double>(y_true.size()) + reg_r(y_pred, cfg.q);
}

double g_transform(double x, double beta) {
  if (!(beta > 0.0)) throw Error("beta must be positive");
  double w = std::exp(-beta * std::abs(x));
  return x * w / (1.0 + w);
}

double g_transform_prime(double x, double beta) {
  if (!(beta > 0.0)) throw Error("beta must be positive");
  double u = beta * std::abs(x);
  double w = std::exp(-u);
  return w * (w + 1.0 - u) / ((1.0 + w) * (1.0 + w));
}

namespace {

void require_cols(const LossConfig& cfg, int input_dim) {
  if (cfg.col_strain < 0 || cfg.col_temperature < 0 || cfg.col_dose < 0)
    throw Error("constrained columns must be set");
  if (cfg.col_strain >= input_dim || cfg.col_temperature >= input_dim ||
      cfg.col_dose >= input_dim)
    throw Error("constrained column out of range");
  if (cfg.col_strain == cfg.col_temperature || cfg.col_strain == cfg.col_dose ||
      cfg.col_temperature == cfg.col_dose)
    throw Error("constrained columns must be distinct");
}

// dH(target, v)/dv at target 0, and the matching slope for the data term.
double huber_clip(double e, double delta) {
  if (std::abs(e) <= delta) return e;
  return e > 0 ? delta : -delta;
}

double family_loss(const Eigen::VectorXd& residuals, const LossConfig& cfg) {
  Eigen::VectorXd v(residuals.size());
  for (Eigen::Index i = 0; i < residuals.size(); ++i) v(i) = g_transform(residuals(i), cfg.beta);
  return data_loss(Eigen::VectorXd::Zero(v.size()), v, cfg);
}

}  // namespace

PdeResiduals pde_residuals(const MlpParams& params, const Eigen::MatrixXd& X,
                           const LossConfig& cfg) {
  require_cols(cfg, params.input_dim());
  const Eigen::Index n = X.rows();
  PdeResiduals res;
  res.strain.resize(n);
  res.curvature.resize(n);
  res.temperature.resize(n);
  res.dose.resize(n);
  const std::vector<int> cols = {cfg.col_strain, cfg.col_temperature, cfg.col_dose};
  for (Eigen::Index i = 0; i < n; ++i) {
    ForwardTrace t = extended_forward(params, X.row(i).transpose(), cols, cfg.col_strain);
    double d_eps = t.first(0);
    double d_t = t.first(1);
    double d_dose = t.first(2);
    double h_eps = t.second();
    if (cfg.mode == ConstraintMode::Hinge) {
      res.strain(i) = std::max(0.0, d_eps);
      res.curvature(i) = std::max(0.0, -h_eps);
      res.temperature(i) = std::max(0.0, d_t);
      res.dose(i) = std::max(0.0, d_dose);
    } else {
      res.strain(i) = d_eps;
      res.curvature(i) = h_eps;
      res.temperature(i) = d_t;
      res.dose(i) = d_dose;
    }
  }
  return res;
}

double loss_pde(const MlpParams& params, const Eigen::MatrixXd& X, const LossConfig& cfg) {
  PdeResiduals res = pde_residuals(params, X, cfg);
  return family_loss(res.strain, cfg) + family_loss(res.curvature, cfg) +
         family_loss(res.temperature, cfg) + family_loss(res.dose, cfg);
}

double loss_total(const MlpParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const LossConfig& cfg) {
  cfg.validate(params.input_dim());
  Eigen::VectorXd preds = forward_batch(params, X);
  double data = data_loss(y, preds, cfg);
  if (cfg.omega == 0.0) return data;
  return data + cfg.omega * loss_pde(params, X, cfg);
}

LossBreakdown loss_total_with_gradient(const MlpParams& params, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& y, const LossConfig& cfg) {
  cfg.validate(params.input_dim());
  if (X.rows() != y.size()) throw Error("target and batch lengths differ");
  const Eigen::Index n = X.rows();
  if (n == 0) throw Error("empty batch");
  const double inv_n = 1.0 / static_cast<double>(n);

  LossBreakdown out;
  out.grads = ParamGrads::zeros_like(params);

  if (cfg.omega == 0.0) {
    Eigen::VectorXd preds(n);
    std::vector<ForwardTrace> traces;
    traces.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      traces.push_back(extended_forward(params, X.row(i).transpose(), {}, -1));
      preds(i) = traces.back().value();
    }
    out.data = data_loss(y, preds, cfg);
    out.pde = 0.0;
    out.total = out.data;
    double pred_mean = preds.mean();
    for (Eigen::Index i = 0; i < n; ++i) {
      double ybar = inv_n * (-huber_clip(y(i) - preds(i), cfg.delta) + 2.0 * cfg.q * pred_mean);
      extended_backward(params, traces[static_cast<std::size_t>(i)], ybar, {}, 0.0, out.grads);
    }
    return out;
  }

  require_cols(cfg, params.input_dim());
  const std::vector<int> cols = {cfg.col_strain, cfg.col_temperature, cfg.col_dose};

  std::vector<ForwardTrace> traces;
  traces.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd preds(n);
  Eigen::MatrixXd raw(n, 4);  // slope_eps, curvature, slope_T, slope_d
  for (Eigen::Index i = 0; i < n; ++i) {
    traces.push_back(extended_forward(params, X.row(i).transpose(), cols, cfg.col_strain));
    const ForwardTrace& t = traces.back();
    preds(i) = t.value();
    raw(i, 0) = t.first(0);
    raw(i, 1) = t.second();
    raw(i, 2) = t.first(1);
    raw(i, 3) = t.first(2);
  }

  const bool hinge = cfg.mode == ConstraintMode::Hinge;
  Eigen::MatrixXd res(n, 4), v(n, 4), factor(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int f = 0; f < 4; ++f) {
      double d = raw(i, f);
      double r, fac;
      if (!hinge) {
        r = d;
        fac = 1.0;
      } else if (f == 1) {
        r = std::max(0.0, -d);
        fac = d < 0 ? -1.0 : 0.0;
      } else {
        r = std::max(0.0, d);
        fac = d > 0 ? 1.0 : 0.0;
      }
      res(i, f) = r;
      v(i, f) = g_transform(r, cfg.beta);
      factor(i, f) = fac;
    }
  }

  out.data = data_loss(y, preds, cfg);
  out.pde = 0.0;
  for (int f = 0; f < 4; ++f)
    out.pde += data_loss(Eigen::VectorXd::Zero(n), v.col(f), cfg);
  out.total = out.data + cfg.omega * out.pde;

  double pred_mean = preds.mean();
  Eigen::Vector4d v_mean = v.colwise().mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    double ybar = inv_n * (-huber_clip(y(i) - preds(i), cfg.delta) + 2.0 * cfg.q * pred_mean);
    double seed[4];
    for (int f = 0; f < 4; ++f) {
      double vbar = inv_n * (huber_clip(v(i, f), cfg.delta) + 2.0 * cfg.q * v_mean(f));
      seed[f] = cfg.omega * vbar * g_transform_prime(res(i, f), cfg.beta) * factor(i, f);
    }
    std::vector<double> gbar = {seed[0], seed[2], seed[3]};
    extended_backward(params, traces[static_cast<std::size_t>(i)], ybar, gbar, seed[1], out.grads);
  }
  return out;
}

}  // namespace fatigue
