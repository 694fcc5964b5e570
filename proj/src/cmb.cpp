#include "fatigue/cmb.hpp"

#include <cmath>
#include <random>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

void CmbParams::validate() const {
  if (!(sigma_ratio > 0.0)) throw Error("sigma_ratio must be positive");
  if (!(epsilon_f > 0.0)) throw Error("epsilon_f must be positive");
  if (!(b < 0.0)) throw Error("exponent b must be negative");
  if (!(c < 0.0)) throw Error("exponent c must be negative");
  if (k_temperature < 0.0) throw Error("k_temperature must be non-negative");
  if (k_dose < 0.0) throw Error("k_dose must be non-negative");
  if (noise_sd < 0.0) throw Error("noise_sd must be non-negative");
}

namespace {

double strain_life_rhs(double n, const CmbParams& p) {
  return p.sigma_ratio * std::pow(2.0 * n, p.b) + p.epsilon_f * std::pow(2.0 * n, p.c);
}

}  // namespace

double cmb_life(double eps_a, double temperature, double dose, const CmbParams& p) {
  p.validate();
  if (!(eps_a > 0.0 && eps_a < 0.1))
    throw Error("strain amplitude fraction must lie in (0, 0.1), got " + format_double(eps_a));

  const double n_lo = 1.0, n_hi = 1e9;
  double rhs_lo = strain_life_rhs(n_lo, p);   // largest strain, at shortest life
  double rhs_hi = strain_life_rhs(n_hi, p);   // smallest strain, at longest life
  if (eps_a > rhs_lo || eps_a < rhs_hi)
    throw Error("strain amplitude " + format_double(eps_a) +
                " is outside the attainable range [" + format_double(rhs_hi) + ", " +
                format_double(rhs_lo) + "]");

  double lo = std::log(n_lo), hi = std::log(n_hi);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    double mid = 0.5 * (lo + hi);
    if (strain_life_rhs(std::exp(mid), p) > eps_a)
      lo = mid;  // strain too large at this life: life must grow
    else
      hi = mid;
  }
  double n0 = std::exp(0.5 * (lo + hi));
  double knockdown = std::exp(-p.k_temperature * std::max(0.0, temperature - p.temperature_ref)) *
                     std::exp(-p.k_dose * dose);
  return n0 * knockdown;
}

namespace {

FeatureSchema synthetic_schema(const GeneratorConfig& cfg) {
  FeatureSchema schema;
  FeatureSpec eps;
  eps.name = "strain_amplitude_pct";
  eps.unit = "%";
  eps.min = cfg.eps_pct_min;
  eps.max = cfg.eps_pct_max;
  eps.role = RoleTag::StrainAmplitude;
  schema.features.push_back(eps);

  FeatureSpec temp;
  temp.name = "test_temperature_c";
  temp.unit = "degC";
  temp.min = cfg.temperature_min;
  temp.max = cfg.temperature_max;
  temp.role = RoleTag::TestTemperature;
  schema.features.push_back(temp);

  FeatureSpec dose;
  dose.name = "dose_dpa";
  dose.unit = "dpa";
  dose.min = cfg.dose_min;
  dose.max = cfg.dose_max;
  dose.role = RoleTag::Dose;
  schema.features.push_back(dose);

  for (const char* alloy : {"SS316", "EUROFER97"}) {
    FeatureSpec spec;
    spec.name = std::string("alloy_") + alloy;
    spec.kind = FeatureKind::OneHot;
    spec.group = "alloy";
    spec.category = alloy;
    schema.features.push_back(spec);
  }

  schema.target_name = "cycles_to_failure";
  schema.validate();
  return schema;
}

}  // namespace

SyntheticData generate_dataset(const GeneratorConfig& cfg) {
  if (cfg.n < 1) throw Error("need at least 1 record");
  cfg.law.validate();
  if (!(cfg.eps_pct_min < cfg.eps_pct_max) || !(cfg.temperature_min < cfg.temperature_max) ||
      !(cfg.dose_min < cfg.dose_max))
    throw Error("generator ranges must have min < max");

  SyntheticData data;
  data.schema = synthetic_schema(cfg);
  data.table.columns = data.schema.csv_columns();
  data.table.columns.push_back(data.schema.target_name);
  data.table.source = "synthetic";

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> eps_dist(cfg.eps_pct_min, cfg.eps_pct_max);
  std::uniform_real_distribution<double> temp_dist(cfg.temperature_min, cfg.temperature_max);
  std::uniform_real_distribution<double> dose_dist(cfg.dose_min, cfg.dose_max);
  std::normal_distribution<double> noise_dist(0.0, 1.0);

  // non-sampled schema columns stay at a fixed reference value
  data.table.records.reserve(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) {
    double eps_pct = eps_dist(rng);
    double temp = temp_dist(rng);
    double dose = dose_dist(rng);
    double noise = cfg.law.noise_sd > 0.0 ? cfg.law.noise_sd * noise_dist(rng) : 0.0;
    double life = cmb_life(eps_pct / 100.0, temp, dose, cfg.law) * std::pow(10.0, noise);
    data.table.records.push_back({RawCell::finite(eps_pct), RawCell::finite(temp),
                                  RawCell::finite(dose), RawCell::of_label("SS316"),
                                  RawCell::finite(life)});
  }
  return data;
}

std::vector<TrendRow> trend_sweep(const MlpParams& params, const PreprocessorState& state,
                                  const FeatureSchema& schema, const RawTable& base,
                                  const TrendConfig& cfg) {
  schema.validate();
  if (base.records.size() != 1) throw Error("base instance must be exactly one record");
  if (cfg.eps_points < 1) throw Error("need at least 1 strain grid point");
  if (cfg.doses.empty()) throw Error("need at least 1 dose");

  auto role_name = [&](RoleTag role) {
    int col = schema.role_column(role);
    if (col < 0) throw Error("schema lacks a required role feature");
    return schema.features[static_cast<std::size_t>(col)].name;
  };
  int eps_col = base.column(role_name(RoleTag::StrainAmplitude));
  int temp_col = base.column(role_name(RoleTag::TestTemperature));
  int dose_col = base.column(role_name(RoleTag::Dose));
  if (eps_col < 0 || temp_col < 0 || dose_col < 0)
    throw Error("base instance is missing a constrained column");

  RawTable grid;
  grid.columns = base.columns;
  grid.source = base.source;
  std::vector<TrendRow> rows;
  for (double dose : cfg.doses) {
    for (int k = 0; k < cfg.eps_points; ++k) {
      double frac = cfg.eps_points == 1
                        ? 0.0
                        : static_cast<double>(k) / static_cast<double>(cfg.eps_points - 1);
      double eps_pct = cfg.eps_pct_min + frac * (cfg.eps_pct_max - cfg.eps_pct_min);
      std::vector<RawCell> record = base.records.front();
      record[static_cast<std::size_t>(eps_col)] = RawCell::finite(eps_pct);
      record[static_cast<std::size_t>(temp_col)] = RawCell::finite(cfg.temperature);
      record[static_cast<std::size_t>(dose_col)] = RawCell::finite(dose);
      grid.records.push_back(std::move(record));
      TrendRow row;
      row.dose = dose;
      row.eps_pct = eps_pct;
      rows.push_back(row);
    }
  }

  Eigen::MatrixXd X = encode_features(grid, state, schema);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double pred_log = forward(params, X.row(static_cast<Eigen::Index>(i)).transpose());
    rows[i].pred_cycles = inverse_transform_target(pred_log);
  }
  return rows;
}

void save_trend_csv(const std::vector<TrendRow>& rows, const std::string& path) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& row : rows)
    out.push_back(
        {format_double(row.dose), format_double(row.eps_pct), format_double(row.pred_cycles)});
  write_csv(path, {"dose", "eps_pct", "pred_cycles"}, out);
}

}  // namespace fatigue
