#include "fatigue/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error("batch_size must be at least 1");
  if (epochs < 1) throw Error("epochs must be at least 1");
  if (weight_decay < 0.0) throw Error("weight_decay must be non-negative");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error("kappa must lie in (0, 1)");
  if (!(lr_end < lr_peak)) throw Error("lr_end must be below lr_peak");
  if (!(lr_peak > 0.0)) throw Error("lr_peak must be positive");
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
}

double lr_at(int step, int total_steps, const TrainConfig& cfg) {
  if (total_steps < 2) throw Error("need at least 2 total steps");
  if (step < 0 || step > total_steps) throw Error("step out of range");
  long t_w = std::lround(cfg.kappa * total_steps);
  t_w = std::clamp(t_w, 1L, static_cast<long>(total_steps - 1));
  if (step <= t_w) return cfg.lr_peak * static_cast<double>(step) / static_cast<double>(t_w);
  double p = static_cast<double>(step - t_w) / static_cast<double>(total_steps - t_w);
  return cfg.lr_end + (cfg.lr_peak - cfg.lr_end) / (1.0 + std::exp(cfg.gamma * (p - 0.5)));
}

void TrainHistory::save(const std::string& path) const {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(epochs.size());
  for (const auto& e : epochs) {
    rows.push_back({std::to_string(e.epoch), format_double(e.data_loss),
                    format_double(e.pde_loss), format_double(e.total_loss), format_double(e.lr)});
  }
  write_csv(path, {"epoch", "data_loss", "pde_loss", "total_loss", "lr"}, rows);
}

AdamState AdamState::zeros_like(const MlpParams& p) {
  AdamState s;
  for (std::size_t l = 0; l < p.W.size(); ++l) {
    s.mW.push_back(Eigen::MatrixXd::Zero(p.W[l].rows(), p.W[l].cols()));
    s.vW.push_back(Eigen::MatrixXd::Zero(p.W[l].rows(), p.W[l].cols()));
    s.mb.push_back(Eigen::VectorXd::Zero(p.b[l].size()));
    s.vb.push_back(Eigen::VectorXd::Zero(p.b[l].size()));
  }
  return s;
}

void adamw_step(MlpParams& params, const ParamGrads& grads, AdamState& state, double lr,
                double weight_decay) {
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.W.size(); ++l) {
    state.mW[l] = state.beta1 * state.mW[l] + (1.0 - state.beta1) * grads.W[l];
    state.vW[l] = state.beta2 * state.vW[l] + (1.0 - state.beta2) * grads.W[l].cwiseAbs2();
    Eigen::MatrixXd mhat = state.mW[l] / bc1;
    Eigen::MatrixXd vhat = state.vW[l] / bc2;
    params.W[l] -= lr * (mhat.array() / (vhat.array().sqrt() + state.eps)).matrix();
    params.W[l] -= lr * weight_decay * params.W[l];

    state.mb[l] = state.beta1 * state.mb[l] + (1.0 - state.beta1) * grads.b[l];
    state.vb[l] = state.beta2 * state.vb[l] + (1.0 - state.beta2) * grads.b[l].cwiseAbs2();
    Eigen::VectorXd mhat_b = state.mb[l] / bc1;
    Eigen::VectorXd vhat_b = state.vb[l] / bc2;
    params.b[l] -= lr * (mhat_b.array() / (vhat_b.array().sqrt() + state.eps)).matrix();
  }
}

TrainResult train(MlpParams params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const LossConfig& loss_cfg, const TrainConfig& train_cfg) {
  train_cfg.validate();
  params.validate();
  loss_cfg.validate(params.input_dim());
  if (X.rows() != y.size()) throw Error("target and batch lengths differ");
  const int n = static_cast<int>(X.rows());
  if (n == 0) throw Error("empty training set");

  const int steps_per_epoch = (n + train_cfg.batch_size - 1) / train_cfg.batch_size;
  const int total_steps = train_cfg.epochs * steps_per_epoch;
  if (total_steps < 2) throw Error("schedule needs at least 2 total steps");

  std::mt19937_64 rng(train_cfg.seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  AdamState adam = AdamState::zeros_like(params);
  TrainResult result;
  result.history.epochs.reserve(static_cast<std::size_t>(train_cfg.epochs));

  int step = 0;
  const double clip_norm = 10.0;
  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sum_data = 0.0, sum_pde = 0.0, sum_total = 0.0, last_lr = 0.0;
    for (int start = 0; start < n; start += train_cfg.batch_size) {
      const int bsz = std::min(train_cfg.batch_size, n - start);
      Eigen::MatrixXd Xb(bsz, X.cols());
      Eigen::VectorXd yb(bsz);
      for (int i = 0; i < bsz; ++i) {
        Xb.row(i) = X.row(order[static_cast<std::size_t>(start + i)]);
        yb(i) = y(order[static_cast<std::size_t>(start + i)]);
      }
      LossBreakdown lb = loss_total_with_gradient(params, Xb, yb, loss_cfg);
      if (!std::isfinite(lb.total))
        throw Error("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                    std::to_string(step + 1));
      double g_norm = lb.grads.global_norm();
      if (g_norm > clip_norm) lb.grads.scale(clip_norm / g_norm);
      ++step;
      double lr = lr_at(step, total_steps, train_cfg);
      adamw_step(params, lb.grads, adam, lr, train_cfg.weight_decay);
      sum_data += lb.data;
      sum_pde += lb.pde;
      sum_total += lb.total;
      last_lr = lr;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.data_loss = sum_data / steps_per_epoch;
    stats.pde_loss = sum_pde / steps_per_epoch;
    stats.total_loss = sum_total / steps_per_epoch;
    stats.lr = last_lr;
    result.history.epochs.push_back(stats);
  }
  result.params = std::move(params);
  return result;
}

MetricsRecord evaluate(const MlpParams& params, const EncodedDataset& dataset) {
  if (dataset.rows() == 0) throw Error("empty dataset");
  if (params.schema_hash != 0 && dataset.schema_hash != 0 &&
      params.schema_hash != dataset.schema_hash)
    throw Error("model and dataset were built against different schemas");
  Eigen::VectorXd preds = forward_batch(params, dataset.X);
  return compute_metrics(dataset.y, preds);
}

SearchResult random_search(const SearchSpace& space, int trials, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& y, const LossConfig& base_loss,
                           const TrainConfig& base_train, std::uint64_t seed) {
  if (trials < 1) throw Error("need at least 1 trial");
  const int n = static_cast<int>(X.rows());
  if (n < 5) throw Error("need at least 5 rows to search");

  // Shared 80:20 train/validation split so every trial is scored on the same data.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 split_rng(splitmix64(seed));
  std::shuffle(order.begin(), order.end(), split_rng);
  const int n_train = static_cast<int>(std::lround(0.8 * n));
  Eigen::MatrixXd Xtr(n_train, X.cols()), Xval(n - n_train, X.cols());
  Eigen::VectorXd ytr(n_train), yval(n - n_train);
  for (int i = 0; i < n_train; ++i) {
    Xtr.row(i) = X.row(order[static_cast<std::size_t>(i)]);
    ytr(i) = y(order[static_cast<std::size_t>(i)]);
  }
  for (int i = n_train; i < n; ++i) {
    Xval.row(i - n_train) = X.row(order[static_cast<std::size_t>(i)]);
    yval(i - n_train) = y(order[static_cast<std::size_t>(i)]);
  }

  SearchResult result;
  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t trial_seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 1));
    std::mt19937_64 rng(trial_seed);

    SearchTrial t;
    t.trial = trial;
    t.hidden = {std::uniform_int_distribution<int>(space.hidden1_min, space.hidden1_max)(rng),
                std::uniform_int_distribution<int>(space.hidden2_min, space.hidden2_max)(rng),
                std::uniform_int_distribution<int>(space.hidden3_min, space.hidden3_max)(rng)};
    t.train_cfg = base_train;
    t.train_cfg.kappa = std::uniform_real_distribution<double>(space.kappa_min, space.kappa_max)(rng);
    t.train_cfg.batch_size =
        std::uniform_int_distribution<int>(space.batch_min, space.batch_max)(rng);
    t.train_cfg.epochs =
        std::uniform_int_distribution<int>(space.epochs_min, space.epochs_max)(rng);
    t.train_cfg.weight_decay = std::uniform_real_distribution<double>(
        space.weight_decay_min, space.weight_decay_max)(rng);
    t.omega = std::uniform_real_distribution<double>(space.omega_min, space.omega_max)(rng);
    t.train_cfg.seed = splitmix64(trial_seed);

    try {
      std::vector<int> dims;
      dims.push_back(static_cast<int>(X.cols()));
      for (int h : t.hidden) dims.push_back(h);
      dims.push_back(1);
      MlpParams p0 = init_params(dims, t.train_cfg.seed);
      LossConfig lcfg = base_loss;
      lcfg.omega = t.omega;
      TrainResult tr = train(std::move(p0), Xtr, ytr, lcfg, t.train_cfg);
      Eigen::VectorXd preds = forward_batch(tr.params, Xval);
      t.val_mse = mse(yval, preds);
      t.val_r2 = r2(yval, preds);
      if (!std::isfinite(t.val_mse)) {
        t.failed = true;
        t.error = "non-finite validation mse";
      }
    } catch (const std::exception& e) {
      t.failed = true;
      t.error = e.what();
    }
    result.leaderboard.push_back(std::move(t));
  }

  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [](const SearchTrial& a, const SearchTrial& b) {
                     if (a.failed != b.failed) return !a.failed;
                     if (a.val_mse != b.val_mse) return a.val_mse < b.val_mse;
                     return a.trial < b.trial;
                   });
  if (result.leaderboard.front().failed) {
    std::string msg = "all search trials failed:";
    for (const auto& t : result.leaderboard)
      msg += " [trial " + std::to_string(t.trial) + ": " + t.error + "]";
    throw Error(msg);
  }
  result.best = result.leaderboard.front();
  return result;
}

}  // namespace fatigue
