#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "fatigue/cmb.hpp"
#include "fatigue/util.hpp"
#include "support.hpp"

using namespace fatigue;
using namespace testsupport;

namespace {

double law_rhs(double n, const CmbParams& p) {
  return p.sigma_ratio * std::pow(2.0 * n, p.b) + p.epsilon_f * std::pow(2.0 * n, p.c);
}

}  // namespace

TEST_CASE("solved life satisfies the strain-life equation") {
  CmbParams p;
  for (double eps : {0.0015, 0.003, 0.006, 0.012, 0.025, 0.05}) {
    double n = cmb_life(eps, p.temperature_ref, 0.0, p);
    CHECK(n >= 1.0);
    CHECK(n <= 1e9);
    CHECK(law_rhs(n, p) == doctest::Approx(eps).epsilon(1e-7));
  }
}

TEST_CASE("life decreases with strain and spans decades") {
  CmbParams p;
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.0015, 0.003, 0.006, 0.012, 0.025, 0.05}) {
    double n = cmb_life(eps, 20.0, 0.0, p);
    CHECK(n < prev);
    prev = n;
  }
  double long_life = cmb_life(0.0015, 20.0, 0.0, p);
  double short_life = cmb_life(0.05, 20.0, 0.0, p);
  CHECK(std::log10(long_life / short_life) > 3.0);
}

TEST_CASE("temperature and dose apply exact multiplicative knockdowns") {
  CmbParams p;
  double ref = cmb_life(0.004, 20.0, 0.0, p);
  double hot = cmb_life(0.004, 500.0, 10.0, p);
  double expected = ref * std::exp(-p.k_temperature * 480.0) * std::exp(-p.k_dose * 10.0);
  CHECK(hot == doctest::Approx(expected).epsilon(1e-12));

  // below the reference temperature there is no thermal knockdown
  CHECK(cmb_life(0.004, 0.0, 0.0, p) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(cmb_life(0.004, 20.0, 0.0, p) == ref);
  CHECK(cmb_life(0.004, 21.0, 0.0, p) < ref);
  CHECK(cmb_life(0.004, 20.0, 1.0, p) < ref);
}

TEST_CASE("strain amplitude domain is a fraction") {
  CmbParams p;
  CHECK_THROWS_AS(cmb_life(0.0, 20.0, 0.0, p), Error);
  CHECK_THROWS_AS(cmb_life(-0.01, 20.0, 0.0, p), Error);
  // percent-scale input is caught instead of silently accepted
  CHECK_THROWS_AS(cmb_life(0.5, 20.0, 0.0, p), Error);
  CHECK_THROWS_AS(cmb_life(0.1, 20.0, 0.0, p), Error);
  // inside (0, 0.1) but beyond the billion-cycle end of the curve
  CHECK_THROWS_WITH_AS(cmb_life(0.0005, 20.0, 0.0, p), doctest::Contains("attainable"), Error);
  CHECK_NOTHROW(cmb_life(0.0008, 20.0, 0.0, p));
}

TEST_CASE("law parameter validation") {
  CmbParams p;
  CHECK_NOTHROW(p.validate());
  CmbParams bad = p;
  bad.b = 0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.sigma_ratio = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.noise_sd = -0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("generator emits schema-shaped noisy records") {
  GeneratorConfig cfg;
  cfg.n = 60;
  cfg.seed = 9;
  SyntheticData data = generate_dataset(cfg);

  CHECK_NOTHROW(data.schema.validate());
  std::vector<std::string> want = data.schema.csv_columns();
  want.push_back(data.schema.target_name);
  CHECK(data.table.columns == want);
  CHECK(data.table.source == "synthetic");
  REQUIRE(data.table.records.size() == 60);

  int eps_col = data.table.column("strain_amplitude_pct");
  int temp_col = data.table.column("test_temperature_c");
  int dose_col = data.table.column("dose_dpa");
  int alloy_col = data.table.column("alloy");
  int target_col = data.table.target_column();
  REQUIRE(eps_col >= 0);
  REQUIRE(alloy_col >= 0);

  for (const auto& rec : data.table.records) {
    double eps = rec[static_cast<std::size_t>(eps_col)].value;
    double temp = rec[static_cast<std::size_t>(temp_col)].value;
    double dose = rec[static_cast<std::size_t>(dose_col)].value;
    CHECK(eps >= cfg.eps_pct_min);
    CHECK(eps <= cfg.eps_pct_max);
    CHECK(temp >= cfg.temperature_min);
    CHECK(temp <= cfg.temperature_max);
    CHECK(dose >= cfg.dose_min);
    CHECK(dose <= cfg.dose_max);
    const std::string& alloy = rec[static_cast<std::size_t>(alloy_col)].label;
    CHECK((alloy == "SS316" || alloy == "EUROFER97"));
    CHECK(rec[static_cast<std::size_t>(target_col)].value > 0.0);
  }

  // declarative bounds mirror the generator ranges
  int eps_feature = data.schema.feature_index("strain_amplitude_pct");
  CHECK(data.schema.features[static_cast<std::size_t>(eps_feature)].min == cfg.eps_pct_min);
  CHECK(data.schema.features[static_cast<std::size_t>(eps_feature)].max == cfg.eps_pct_max);

  SyntheticData again = generate_dataset(cfg);
  for (std::size_t r = 0; r < 60; ++r)
    for (std::size_t c = 0; c < data.table.columns.size(); ++c) {
      CHECK(again.table.records[r][c].value == data.table.records[r][c].value);
      CHECK(again.table.records[r][c].label == data.table.records[r][c].label);
    }

  cfg.seed = 10;
  SyntheticData other = generate_dataset(cfg);
  CHECK(other.table.records[0][0].value != data.table.records[0][0].value);
}

TEST_CASE("noise-free targets reproduce the law exactly") {
  GeneratorConfig cfg;
  cfg.n = 20;
  cfg.seed = 4;
  cfg.law.noise_sd = 0.0;
  SyntheticData data = generate_dataset(cfg);
  int eps_col = data.table.column("strain_amplitude_pct");
  int temp_col = data.table.column("test_temperature_c");
  int dose_col = data.table.column("dose_dpa");
  for (const auto& rec : data.table.records) {
    double expected = cmb_life(rec[static_cast<std::size_t>(eps_col)].value / 100.0,
                               rec[static_cast<std::size_t>(temp_col)].value,
                               rec[static_cast<std::size_t>(dose_col)].value, cfg.law);
    CHECK(rec.back().value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("trend sweep holds everything but strain and dose fixed") {
  FeatureSchema schema = role_schema();
  FeatureSpec extra;
  extra.name = "thickness_mm";
  schema.features.push_back(extra);
  schema.validate();

  RawTable fit_table;
  fit_table.columns = {"strain_amplitude_pct", "test_temperature_c", "dose_dpa", "thickness_mm",
                       "cycles_to_failure"};
  auto rec = [&](double e, double t, double d, double th, double n) {
    fit_table.records.push_back({RawCell::finite(e), RawCell::finite(t), RawCell::finite(d),
                                 RawCell::finite(th), RawCell::finite(n)});
  };
  rec(0.2, 22.0, 0.0, 1.0, 1000.0);
  rec(6.0, 700.0, 30.0, 3.0, 100.0);
  PreprocessorState state = fit_preprocessor(fit_table, schema);

  // affine model in encoded space: log10 N = 4 - 2 e - 0.5 T - d + 0.25 th
  MlpParams params;
  Eigen::MatrixXd W(1, 4);
  W << -2.0, -0.5, -1.0, 0.25;
  params.dims = {4, 1};
  params.W = {W};
  params.b = {Eigen::VectorXd::Constant(1, 4.0)};
  params.activation = Activation::Identity;

  RawTable base;
  base.columns = fit_table.columns;
  base.records.push_back(fit_table.records.front());
  base.records[0][3] = RawCell::finite(2.0);  // thickness held at this value

  TrendConfig cfg;
  cfg.doses = {0.0, 30.0};
  cfg.eps_points = 5;
  cfg.eps_pct_min = 0.2;
  cfg.eps_pct_max = 6.0;
  cfg.temperature = 361.0;

  std::vector<TrendRow> rows = trend_sweep(params, state, schema, base, cfg);
  REQUIRE(rows.size() == 10);

  int i = 0;
  for (double dose : {0.0, 30.0}) {
    for (int k = 0; k < 5; ++k) {
      double eps = 0.2 + (6.0 - 0.2) * k / 4.0;
      CHECK(rows[i].dose == dose);
      CHECK(rows[i].eps_pct == doctest::Approx(eps).epsilon(1e-12));
      double e_n = (eps - 0.2) / (6.0 - 0.2);
      double t_n = (361.0 - 22.0) / (700.0 - 22.0);
      double d_n = dose / 30.0;
      double th_n = (2.0 - 1.0) / (3.0 - 1.0);
      double logn = 4.0 - 2.0 * e_n - 0.5 * t_n - 1.0 * d_n + 0.25 * th_n;
      CHECK(rows[i].pred_cycles == doctest::Approx(std::pow(10.0, logn)).epsilon(1e-10));
      ++i;
    }
  }

  // strain grid is non-increasing in predicted life for this falling model
  for (int r = 1; r < 5; ++r) CHECK(rows[r].pred_cycles < rows[r - 1].pred_cycles);

  RawTable two = base;
  two.records.push_back(base.records[0]);
  CHECK_THROWS_AS(trend_sweep(params, state, schema, two, cfg), Error);
}

TEST_CASE("trend file layout") {
  std::vector<TrendRow> rows = {{0.0, 0.5, 1000.0}, {10.0, 0.5, 250.0}};
  std::string path = temp_path("trend.csv");
  save_trend_csv(rows, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "dose,eps_pct,pred_cycles");
  std::getline(in, line);
  CHECK(line == "0,0.5,1000");
  std::getline(in, line);
  CHECK(line == "10,0.5,250");
  std::filesystem::remove(path);
}
