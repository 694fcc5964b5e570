#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fatigue/dataset.hpp"
#include "fatigue/mlp.hpp"
#include "fatigue/preprocess.hpp"
#include "fatigue/schema.hpp"

namespace fatigue {

/// Strain-life law parameters with multiplicative temperature and dose
/// knockdowns, plus the log10 noise level for generated targets.
struct CmbParams {
  double sigma_ratio = 0.005;  // elastic strain coefficient sigma_f' / E
  double b = -0.09;            // elastic (Basquin) exponent
  double epsilon_f = 0.5;      // plastic ductility coefficient
  double c = -0.6;             // plastic (Coffin-Manson) exponent
  double k_temperature = 0.002;  // per degC above reference
  double k_dose = 0.03;          // per dpa
  double temperature_ref = 20.0;
  double noise_sd = 0.05;

  void validate() const;
};

/// Cycles to failure for a strain amplitude given as a fraction (not percent).
/// Solves the strain-life equation by bisection on log N over [1, 1e9], then
/// applies the temperature and dose knockdowns.
double cmb_life(double eps_a, double temperature, double dose, const CmbParams& p);

struct GeneratorConfig {
  int n = 500;
  double eps_pct_min = 0.14;
  double eps_pct_max = 6.15;
  double temperature_min = 22.0;
  double temperature_max = 700.0;
  double dose_min = 0.0;
  double dose_max = 30.0;
  CmbParams law;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  RawTable table;
  FeatureSchema schema;
};

/// Samples (strain, temperature, dose) uniformly in the configured ranges,
/// draws a dummy alloy label, and sets the target to the law's life times
/// 10^noise with seeded Gaussian log10 noise.
SyntheticData generate_dataset(const GeneratorConfig& cfg);

struct TrendConfig {
  std::vector<double> doses = {0.0, 10.0, 20.0, 30.0};
  int eps_points = 20;
  double eps_pct_min = 0.14;
  double eps_pct_max = 6.15;
  double temperature = 300.0;
};

struct TrendRow {
  double dose = 0.0;
  double eps_pct = 0.0;
  double pred_cycles = 0.0;
};

/// Model predictions over a (dose, strain) grid with every other feature held
/// at the base record's values and the temperature fixed.
std::vector<TrendRow> trend_sweep(const MlpParams& params, const PreprocessorState& state,
                                  const FeatureSchema& schema, const RawTable& base,
                                  const TrendConfig& cfg);

void save_trend_csv(const std::vector<TrendRow>& rows, const std::string& path);

}  // namespace fatigue
