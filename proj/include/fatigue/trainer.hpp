#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fatigue/dataset.hpp"
#include "fatigue/loss.hpp"
#include "fatigue/metrics.hpp"
#include "fatigue/mlp.hpp"

namespace fatigue {

struct TrainConfig {
  int batch_size = 25;
  int epochs = 600;
  double weight_decay = 0.004;
  double kappa = 0.3;  // warmup fraction of total steps
  double lr_peak = 1e-3;
  double lr_end = 1e-5;
  double gamma = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

double lr_at(int step, int total_steps, const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double data_loss = 0.0;
  double pde_loss = 0.0;
  double total_loss = 0.0;
  double lr = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  void save(const std::string& path) const;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState zeros_like(const MlpParams& p);
};

/// One adaptive-moment update with decoupled weight decay. Weight decay is
/// applied to weights only, never to biases.
void adamw_step(MlpParams& params, const ParamGrads& grads, AdamState& state, double lr,
                double weight_decay);

struct TrainResult {
  MlpParams params;
  TrainHistory history;
};

TrainResult train(MlpParams params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const LossConfig& loss_cfg, const TrainConfig& train_cfg);

MetricsRecord evaluate(const MlpParams& params, const EncodedDataset& dataset);

struct SearchSpace {
  int hidden1_min = 100, hidden1_max = 120;
  int hidden2_min = 60, hidden2_max = 80;
  int hidden3_min = 20, hidden3_max = 40;
  double kappa_min = 0.1, kappa_max = 0.9;
  int batch_min = 20, batch_max = 50;
  int epochs_min = 900, epochs_max = 1000;
  double weight_decay_min = 0.001, weight_decay_max = 0.1;
  double omega_min = 0.01, omega_max = 0.99;
};

struct SearchTrial {
  int trial = 0;
  std::vector<int> hidden;
  TrainConfig train_cfg;
  double omega = 0.0;
  double val_mse = 0.0;
  double val_r2 = 0.0;
  bool failed = false;
  std::string error;
};

struct SearchResult {
  SearchTrial best;
  std::vector<SearchTrial> leaderboard;  // sorted by validation mse, ties by trial index
};

SearchResult random_search(const SearchSpace& space, int trials, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& y, const LossConfig& base_loss,
                           const TrainConfig& base_train, std::uint64_t seed);

}  // namespace fatigue
