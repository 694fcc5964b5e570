#include "fatigue/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "fatigue/util.hpp"

namespace fatigue {

int PreprocessorState::numeric_index(const std::string& name) const {
  for (std::size_t i = 0; i < numeric_names.size(); ++i)
    if (numeric_names[i] == name) return static_cast<int>(i);
  return -1;
}

void PreprocessorState::save(const std::string& path) const {
  nlohmann::ordered_json doc;
  doc["kind"] = "preprocessor";
  doc["version"] = 1;
  doc["schema_hash"] = to_hex(schema_hash);
  doc["sentinel_missing"] = sentinel_missing;
  doc["sentinel_infinite"] = sentinel_infinite;
  doc["target_transform"] = "log10";
  nlohmann::ordered_json feats = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < numeric_names.size(); ++i) {
    nlohmann::ordered_json f;
    f["name"] = numeric_names[i];
    f["min"] = mins[i];
    f["max"] = maxes[i];
    feats.push_back(std::move(f));
  }
  doc["features"] = std::move(feats);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

PreprocessorState PreprocessorState::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path + ": " + e.what());
  }
  if (doc.value("kind", "") != std::string("preprocessor"))
    throw Error(path + ": not a preprocessor file");
  PreprocessorState state;
  state.schema_hash = parse_hex(doc.at("schema_hash").get<std::string>());
  state.sentinel_missing = doc.at("sentinel_missing").get<double>();
  state.sentinel_infinite = doc.at("sentinel_infinite").get<double>();
  for (const auto& f : doc.at("features")) {
    state.numeric_names.push_back(f.at("name").get<std::string>());
    state.mins.push_back(f.at("min").get<double>());
    state.maxes.push_back(f.at("max").get<double>());
  }
  return state;
}

double fluence_to_dpa(double fluence) {
  if (fluence < 0.0) throw Error("fluence must be non-negative");
  return 7.0e-22 * fluence;
}

PreprocessorState fit_preprocessor(const RawTable& records, const FeatureSchema& schema) {
  schema.validate();
  PreprocessorState state;
  state.schema_hash = schema.hash();
  for (const auto& f : schema.features) {
    if (f.kind != FeatureKind::Numeric) continue;
    int col = records.column(f.name);
    if (col < 0) throw Error("column '" + f.name + "' absent from records");
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& record : records.records) {
      const RawCell& cell = record[static_cast<std::size_t>(col)];
      if (cell.state != RawCell::State::Finite) continue;
      if (!any) {
        lo = hi = cell.value;
        any = true;
      } else {
        lo = std::min(lo, cell.value);
        hi = std::max(hi, cell.value);
      }
    }
    if (!any) throw Error("feature '" + f.name + "' has no finite values to fit");
    if (lo == hi) throw Error("feature '" + f.name + "' is constant (" + format_double(lo) + ")");
    state.numeric_names.push_back(f.name);
    state.mins.push_back(lo);
    state.maxes.push_back(hi);
  }
  return state;
}

Eigen::MatrixXd encode_features(const RawTable& records, const PreprocessorState& state,
                                const FeatureSchema& schema) {
  schema.validate();
  if (state.schema_hash != schema.hash())
    throw Error("preprocessor was fitted against a different schema");

  const auto n = static_cast<Eigen::Index>(records.records.size());
  const auto d = static_cast<Eigen::Index>(schema.features.size());

  std::vector<int> src(schema.features.size());
  std::vector<int> numeric(schema.features.size(), -1);
  for (std::size_t j = 0; j < schema.features.size(); ++j) {
    const auto& f = schema.features[j];
    const std::string& col_name = f.kind == FeatureKind::OneHot ? f.group : f.name;
    src[j] = records.column(col_name);
    if (src[j] < 0) throw Error("column '" + col_name + "' absent from records");
    if (f.kind == FeatureKind::Numeric) {
      numeric[j] = state.numeric_index(f.name);
      if (numeric[j] < 0) throw Error("feature '" + f.name + "' missing from preprocessor state");
    }
  }

  // Per one-hot group, the known category labels, for unseen-label detection.
  std::map<std::string, std::vector<std::string>> group_labels;
  for (const auto& f : schema.features)
    if (f.kind == FeatureKind::OneHot) group_labels[f.group].push_back(f.category);

  Eigen::MatrixXd X(n, d);

  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& record = records.records[static_cast<std::size_t>(r)];
    std::string where = "record " + std::to_string(r + 1);

    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& f = schema.features[static_cast<std::size_t>(j)];
      const RawCell& cell = record[static_cast<std::size_t>(src[static_cast<std::size_t>(j)])];
      double v = 0.0;
      switch (f.kind) {
        case FeatureKind::Numeric: {
          if (cell.state == RawCell::State::Missing) {
            v = state.sentinel_missing;
          } else if (cell.state == RawCell::State::Infinite) {
            v = state.sentinel_infinite;
          } else if (cell.state == RawCell::State::Finite) {
            int k = numeric[static_cast<std::size_t>(j)];
            v = (cell.value - state.mins[static_cast<std::size_t>(k)]) /
                (state.maxes[static_cast<std::size_t>(k)] - state.mins[static_cast<std::size_t>(k)]);
          } else {
            throw Error(where + ": label in numeric column '" + f.name + "'");
          }
          break;
        }
        case FeatureKind::Flag: {
          if (cell.state == RawCell::State::Missing) v = state.sentinel_missing;
          else if (cell.state == RawCell::State::Infinite) v = state.sentinel_infinite;
          else if (cell.state == RawCell::State::Finite) v = cell.value;
          else throw Error(where + ": label in flag column '" + f.name + "'");
          break;
        }
        case FeatureKind::OneHot: {
          if (cell.state == RawCell::State::Missing) {
            v = 0.0;
          } else if (cell.state == RawCell::State::Label) {
            const auto& labels = group_labels[f.group];
            if (std::find(labels.begin(), labels.end(), cell.label) == labels.end())
              throw Error(where + ": unseen category '" + cell.label + "' in group '" + f.group + "'");
            v = cell.label == f.category ? 1.0 : 0.0;
          } else {
            throw Error(where + ": numeric value in categorical column '" + f.group + "'");
          }
          break;
        }
      }
      X(r, j) = v;
    }
  }
  return X;
}

EncodedDataset transform(const RawTable& records, const PreprocessorState& state,
                         const FeatureSchema& schema) {
  EncodedDataset ds;
  ds.X = encode_features(records, state, schema);

  const auto n = static_cast<Eigen::Index>(records.records.size());
  int target_col = records.column(schema.target_name);
  if (target_col < 0) throw Error("target column '" + schema.target_name + "' absent from records");

  ds.y.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const RawCell& target = records.records[static_cast<std::size_t>(r)][static_cast<std::size_t>(target_col)];
    std::string where = "record " + std::to_string(r + 1);
    if (target.state != RawCell::State::Finite)
      throw Error(where + ": target '" + schema.target_name + "' must be a finite number");
    if (target.value <= 0.0)
      throw Error(where + ": target '" + schema.target_name + "' must be positive, got " +
                  format_double(target.value));
    ds.y(r) = std::log10(target.value);
  }

  for (const auto& f : schema.features) ds.feature_names.push_back(f.name);
  for (std::size_t j = 0; j < ds.feature_names.size(); ++j)
    ds.feature_index[ds.feature_names[j]] = static_cast<int>(j);
  ds.col_strain = schema.role_column(RoleTag::StrainAmplitude);
  ds.col_temperature = schema.role_column(RoleTag::TestTemperature);
  ds.col_dose = schema.role_column(RoleTag::Dose);
  ds.source = records.source;
  ds.schema_hash = state.schema_hash;
  return ds;
}

double inverse_transform_target(double y_log) { return std::pow(10.0, y_log); }

std::pair<EncodedDataset, EncodedDataset> train_test_split(const EncodedDataset& dataset,
                                                           double ratio, std::uint64_t seed) {
  const int n = static_cast<int>(dataset.rows());
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("split ratio must lie in (0, 1)");
  if (n < 5) throw Error("need at least 5 rows to split");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const int n_train = static_cast<int>(std::lround(ratio * n));
  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  std::vector<int> test_idx(order.begin() + n_train, order.end());
  return {dataset.subset(train_idx), dataset.subset(test_idx)};
}

namespace {

double column_variance(const Eigen::MatrixXd& X, Eigen::Index j) {
  const Eigen::Index n = X.rows();
  if (n < 2) return 0.0;
  double mean = X.col(j).mean();
  double ss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double diff = X(r, j) - mean;
    ss += diff * diff;
  }
  return ss / static_cast<double>(n - 1);
}

double column_pearson(const Eigen::MatrixXd& X, Eigen::Index a, Eigen::Index b) {
  const Eigen::Index n = X.rows();
  double ma = X.col(a).mean();
  double mb = X.col(b).mean();
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double da = X(r, a) - ma;
    double db = X(r, b) - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace

PruneResult correlation_prune(const EncodedDataset& dataset, double threshold) {
  const Eigen::Index d = dataset.cols();
  if (d < 2) throw Error("need at least 2 columns to prune");

  auto is_protected = [&](Eigen::Index j) {
    int c = static_cast<int>(j);
    return c == dataset.col_strain || c == dataset.col_temperature || c == dataset.col_dose;
  };

  std::vector<bool> alive(static_cast<std::size_t>(d), true);
  std::vector<double> variance(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) variance[static_cast<std::size_t>(j)] = column_variance(dataset.X, j);

  PruneResult result;

  for (Eigen::Index j = 0; j < d; ++j) {
    if (is_protected(j)) continue;
    if (variance[static_cast<std::size_t>(j)] == 0.0) {
      alive[static_cast<std::size_t>(j)] = false;
      result.removed.push_back(dataset.feature_names[static_cast<std::size_t>(j)]);
    }
  }

  bool found = true;
  while (found) {
    found = false;
    for (Eigen::Index i = 0; i < d && !found; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < d && !found; ++j) {
        if (!alive[static_cast<std::size_t>(j)]) continue;
        if (is_protected(i) && is_protected(j)) continue;
        double rho = column_pearson(dataset.X, i, j);
        if (std::abs(rho) < threshold) continue;
        Eigen::Index victim;
        if (is_protected(i)) victim = j;
        else if (is_protected(j)) victim = i;
        else if (variance[static_cast<std::size_t>(i)] < variance[static_cast<std::size_t>(j)]) victim = i;
        else victim = j;
        alive[static_cast<std::size_t>(victim)] = false;
        result.removed.push_back(dataset.feature_names[static_cast<std::size_t>(victim)]);
        found = true;
      }
    }
  }

  EncodedDataset& out = result.dataset;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < d; ++j)
    if (alive[static_cast<std::size_t>(j)]) keep.push_back(j);

  out.X.resize(dataset.X.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.X.col(static_cast<Eigen::Index>(k)) = dataset.X.col(keep[k]);
  out.y = dataset.y;
  auto remap = [&](int old_col) {
    for (std::size_t k = 0; k < keep.size(); ++k)
      if (static_cast<int>(keep[k]) == old_col) return static_cast<int>(k);
    return -1;
  };
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::string& name = dataset.feature_names[static_cast<std::size_t>(keep[k])];
    out.feature_names.push_back(name);
    out.feature_index[name] = static_cast<int>(k);
  }
  out.col_strain = remap(dataset.col_strain);
  out.col_temperature = remap(dataset.col_temperature);
  out.col_dose = remap(dataset.col_dose);
  out.source = dataset.source;
  out.schema_hash = dataset.schema_hash;
  return result;
}

}  // namespace fatigue
