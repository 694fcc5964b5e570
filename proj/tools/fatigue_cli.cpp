// Command-line front end: dataset synthesis, preprocessing, training,
// evaluation, prediction, attribution, trend sweeps, pruning, and
// hyperparameter studies. Every run writes its artifacts under a
// deterministic run directory derived from the effective configuration,
// together with a config copy and a manifest of content hashes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fatigue/cmb.hpp"
#include "fatigue/csv.hpp"
#include "fatigue/dataset.hpp"
#include "fatigue/loss.hpp"
#include "fatigue/metrics.hpp"
#include "fatigue/mlp.hpp"
#include "fatigue/preprocess.hpp"
#include "fatigue/schema.hpp"
#include "fatigue/shapley.hpp"
#include "fatigue/tomlite.hpp"
#include "fatigue/trainer.hpp"
#include "fatigue/util.hpp"

namespace fs = std::filesystem;
using namespace fatigue;

namespace {

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string hash_hex(const std::string& path) { return to_hex(fnv1a64(read_file_bytes(path))); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(msg);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(what + ": bad integer '" + tok + "'");
    }
  }
  require(!out.empty(), what + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(what + ": bad number '" + tok + "'");
    }
  }
  require(!out.empty(), what + ": empty list");
  return out;
}

// Flag > config file > built-in default.
struct Resolver {
  const toml::Document* doc = nullptr;

  const toml::Table* table(const std::string& name) const {
    return doc ? doc->find_table(name) : nullptr;
  }
  const toml::Table* root() const { return doc ? &doc->root : nullptr; }

  static bool set(const CLI::Option* o) { return o != nullptr && o->count() > 0; }
  // shared flags register one option per subcommand; only the parsed one counts
  static bool set(const std::vector<CLI::Option*>& os) {
    for (const CLI::Option* o : os)
      if (set(o)) return true;
    return false;
  }

  template <class Opt>
  double num(const Opt& o, double flag_value, const toml::Table* t, const char* key,
             double fallback) const {
    if (set(o)) return flag_value;
    return t ? t->get_number(key, fallback) : fallback;
  }
  template <class Opt>
  long integer(const Opt& o, long flag_value, const toml::Table* t, const char* key,
               long fallback) const {
    if (set(o)) return flag_value;
    return t ? t->get_integer(key, fallback) : fallback;
  }
  template <class Opt>
  std::string str(const Opt& o, const std::string& flag_value, const toml::Table* t,
                  const char* key, const std::string& fallback) const {
    if (set(o)) return flag_value;
    return t ? t->get_string(key, fallback) : fallback;
  }
  template <class Opt>
  bool boolean(const Opt& o, bool flag_value, const toml::Table* t, const char* key,
               bool fallback) const {
    if (set(o)) return flag_value;
    return t ? t->get_bool(key, fallback) : fallback;
  }
};

// A run directory named after the hash of the effective configuration, so a
// repeat run with the same configuration lands in the same place and
// overwrites its artifacts byte for byte.
struct Run {
  fs::path dir;
  std::string command;
  std::string config_text;
  std::vector<std::pair<std::string, std::string>> inputs;  // label, path
  std::vector<std::string> outputs;                         // file names inside dir

  static Run open(const std::string& command, const std::string& out_root,
                  const toml::Document& effective) {
    Run r;
    r.command = command;
    r.config_text = toml::serialize(effective);
    const std::string stamp = to_hex(fnv1a64(command + "\n" + r.config_text)).substr(0, 12);
    r.dir = fs::path(out_root) / (command + "-" + stamp);
    fs::create_directories(r.dir);
    return r;
  }

  void input(const std::string& label, const std::string& path) {
    if (!path.empty()) inputs.emplace_back(label, path);
  }

  std::string out(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }

  void finish() {
    {
      std::ofstream cfg(dir / "config.toml", std::ios::binary);
      cfg << config_text;
    }
    nlohmann::ordered_json man;
    man["command"] = command;
    man["config"] = config_text;
    man["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [label, path] : inputs) {
      man["inputs"][label] = {{"path", path}, {"fnv1a64", hash_hex(path)}};
    }
    man["outputs"] = nlohmann::ordered_json::object();
    man["outputs"]["config.toml"] = hash_hex((dir / "config.toml").string());
    for (const auto& name : outputs) {
      man["outputs"][name] = hash_hex((dir / name).string());
    }
    {
      std::ofstream mf(dir / "manifest.json", std::ios::binary);
      mf << man.dump(2) << "\n";
    }
    std::cout << "run_dir " << dir.string() << "\n";
    std::cout << "wrote " << (dir / "config.toml").string() << "\n";
    for (const auto& name : outputs) std::cout << "wrote " << (dir / name).string() << "\n";
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
  }
};

std::string cell_text(const RawCell& cell) {
  switch (cell.state) {
    case RawCell::State::Missing: return "";
    case RawCell::State::Finite: return format_double(cell.value);
    case RawCell::State::Infinite: return "inf";
    case RawCell::State::Label: return cell.label;
  }
  return "";
}

RawCell cell_from_text(const std::string& text) {
  if (text.empty()) return RawCell::missing();
  if (text == "inf" || text == "+inf") return RawCell::infinite();
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos == text.size()) return RawCell::finite(v);
  } catch (const std::exception&) {
  }
  return RawCell::of_label(text);
}

void check_model_matches_preprocessor(const MlpParams& params, const PreprocessorState& state) {
  if (params.schema_hash != 0 && state.schema_hash != 0 &&
      params.schema_hash != state.schema_hash) {
    throw Error("schema hash mismatch between model (" + to_hex(params.schema_hash) +
                ") and preprocessor (" + to_hex(state.schema_hash) + ")");
  }
}

std::vector<std::string> schema_feature_names(const FeatureSchema& schema) {
  std::vector<std::string> names;
  names.reserve(schema.features.size());
  for (const auto& f : schema.features) names.push_back(f.name);
  return names;
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return {mean, std::sqrt(acc / (n - 1.0))};
}

// Shared option state. Only one subcommand parses per invocation.
struct CommonFlags {
  std::string config_path;
  std::string out_root;
  std::string schema_path;
  std::string data_path;
  std::string model_path;
  std::string pre_path;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 7;
  std::string hidden_text;

  std::vector<CLI::Option*> o_out, o_schema, o_data, o_model, o_pre, o_split, o_split_seed,
      o_hidden;

  void add_config(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file (TOML)");
    o_out.push_back(cmd->add_option("--out-root", out_root, "output root directory"));
  }
  void add_schema_data(CLI::App* cmd) {
    o_schema.push_back(cmd->add_option("--schema", schema_path, "feature schema file"));
    o_data.push_back(cmd->add_option("--data", data_path, "dataset CSV"));
  }
  void add_model_pre(CLI::App* cmd) {
    o_model.push_back(cmd->add_option("--model", model_path, "model file"));
    o_pre.push_back(cmd->add_option("--preprocessor", pre_path, "fitted preprocessor file"));
  }
  void add_split(CLI::App* cmd) {
    o_split.push_back(cmd->add_option("--split", split_ratio, "train fraction of the split"));
    o_split_seed.push_back(cmd->add_option("--split-seed", split_seed, "split shuffle seed"));
  }
  void add_hidden(CLI::App* cmd) {
    o_hidden.push_back(
        cmd->add_option("--hidden", hidden_text, "hidden layer widths, comma separated"));
  }
};

struct TrainFlags {
  std::uint64_t seed = 0;
  long epochs = 600, batch = 25;
  double kappa = 0.3, weight_decay = 0.004, lr_peak = 1e-3, lr_end = 1e-5, gamma = 10.0;
  std::vector<CLI::Option*> o_seed, o_epochs, o_batch, o_kappa, o_wd, o_lr_peak, o_lr_end,
      o_gamma;

  void add(CLI::App* cmd) {
    o_seed.push_back(cmd->add_option("--seed", seed, "training seed"));
    o_epochs.push_back(cmd->add_option("--epochs", epochs, "training epochs"));
    o_batch.push_back(cmd->add_option("--batch", batch, "mini-batch size"));
    o_kappa.push_back(cmd->add_option("--kappa", kappa, "warmup fraction of total steps"));
    o_wd.push_back(cmd->add_option("--weight-decay", weight_decay, "decoupled weight decay"));
    o_lr_peak.push_back(cmd->add_option("--lr-peak", lr_peak, "peak learning rate"));
    o_lr_end.push_back(cmd->add_option("--lr-end", lr_end, "final learning rate"));
    o_gamma.push_back(cmd->add_option("--gamma", gamma, "sigmoid decay steepness"));
  }
};

struct LossFlags {
  double omega = 0.2, beta = 100.0;
  std::string mode = "hinge";
  std::vector<CLI::Option*> o_omega, o_beta, o_mode;

  void add(CLI::App* cmd) {
    o_omega.push_back(cmd->add_option("--omega", omega, "constraint penalty weight"));
    o_beta.push_back(cmd->add_option("--beta", beta, "residual transform steepness"));
    o_mode.push_back(cmd->add_option("--mode", mode, "constraint mode: literal or hinge"));
  }
};

struct Resolved {
  Resolver rs;
  toml::Document owned_doc;
  bool has_doc = false;
  std::string out_root;
  std::string schema_path, data_path, model_path, pre_path;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 7;
  std::vector<int> hidden = {110, 70, 30};
};

Resolved resolve_common(const CommonFlags& cf) {
  Resolved r;
  if (!cf.config_path.empty()) {
    r.owned_doc = toml::parse_file(cf.config_path);
    r.has_doc = true;
    r.rs.doc = &r.owned_doc;
  }
  const toml::Table* root = r.rs.root();
  std::string env_root;
  if (const char* env = std::getenv("FATIGUE_OUT_ROOT")) env_root = env;
  if (env_root.empty()) env_root = "runs";
  r.out_root = r.rs.str(cf.o_out, cf.out_root, root, "output_root", env_root);
  r.schema_path = r.rs.str(cf.o_schema, cf.schema_path, root, "schema", "");
  r.data_path = r.rs.str(cf.o_data, cf.data_path, root, "dataset", "");
  r.model_path = r.rs.str(cf.o_model, cf.model_path, root, "model", "");
  r.pre_path = r.rs.str(cf.o_pre, cf.pre_path, root, "preprocessor", "");
  r.split_ratio = r.rs.num(cf.o_split, cf.split_ratio, root, "split_ratio", 0.8);
  r.split_seed = static_cast<std::uint64_t>(
      r.rs.integer(cf.o_split_seed, static_cast<long>(cf.split_seed), root, "split_seed", 7));
  if (Resolver::set(cf.o_hidden)) {
    r.hidden = parse_int_list(cf.hidden_text, "--hidden");
  } else if (root != nullptr && root->has("hidden")) {
    r.hidden.clear();
    for (double v : root->get_number_array("hidden")) r.hidden.push_back(static_cast<int>(v));
    require(!r.hidden.empty(), "config key 'hidden' must be a non-empty array");
  }
  return r;
}

TrainConfig resolve_train(const Resolved& r, const TrainFlags& tf) {
  const toml::Table* t = r.rs.table("train");
  TrainConfig cfg;
  cfg.batch_size = static_cast<int>(r.rs.integer(tf.o_batch, tf.batch, t, "batch_size", 25));
  cfg.epochs = static_cast<int>(r.rs.integer(tf.o_epochs, tf.epochs, t, "epochs", 600));
  cfg.weight_decay = r.rs.num(tf.o_wd, tf.weight_decay, t, "weight_decay", 0.004);
  cfg.kappa = r.rs.num(tf.o_kappa, tf.kappa, t, "kappa", 0.3);
  cfg.lr_peak = r.rs.num(tf.o_lr_peak, tf.lr_peak, t, "lr_peak", 1e-3);
  cfg.lr_end = r.rs.num(tf.o_lr_end, tf.lr_end, t, "lr_end", 1e-5);
  cfg.gamma = r.rs.num(tf.o_gamma, tf.gamma, t, "gamma", 10.0);
  cfg.seed = static_cast<std::uint64_t>(
      r.rs.integer(tf.o_seed, static_cast<long>(tf.seed), t, "seed", 0));
  return cfg;
}

LossConfig resolve_loss(const Resolved& r, const LossFlags& lf) {
  const toml::Table* t = r.rs.table("loss");
  LossConfig cfg;
  cfg.delta = t ? t->get_number("delta", 1.0) : 1.0;
  cfg.q = t ? t->get_number("q", 0.01) : 0.01;
  cfg.omega = r.rs.num(lf.o_omega, lf.omega, t, "omega", 0.2);
  cfg.beta = r.rs.num(lf.o_beta, lf.beta, t, "beta", 100.0);
  cfg.mode = constraint_mode_from_string(r.rs.str(lf.o_mode, lf.mode, t, "mode", "hinge"));
  return cfg;
}

void echo_paths(toml::Document& eff, const Resolved& r, bool with_model_pre) {
  eff.root.set("output_root", toml::Value::of(r.out_root));
  if (!r.schema_path.empty()) eff.root.set("schema", toml::Value::of(r.schema_path));
  if (!r.data_path.empty()) eff.root.set("dataset", toml::Value::of(r.data_path));
  if (with_model_pre) {
    if (!r.model_path.empty()) eff.root.set("model", toml::Value::of(r.model_path));
    if (!r.pre_path.empty()) eff.root.set("preprocessor", toml::Value::of(r.pre_path));
  }
}

void echo_train_loss(toml::Document& eff, const TrainConfig& tc, const LossConfig& lc,
                     const std::vector<int>& hidden) {
  std::vector<double> hs;
  for (int h : hidden) hs.push_back(static_cast<double>(h));
  eff.root.set("hidden", toml::Value::of(hs));
  toml::Table& t = eff.table("train");
  t.set("batch_size", toml::Value::of(static_cast<double>(tc.batch_size)));
  t.set("epochs", toml::Value::of(static_cast<double>(tc.epochs)));
  t.set("weight_decay", toml::Value::of(tc.weight_decay));
  t.set("kappa", toml::Value::of(tc.kappa));
  t.set("lr_peak", toml::Value::of(tc.lr_peak));
  t.set("lr_end", toml::Value::of(tc.lr_end));
  t.set("gamma", toml::Value::of(tc.gamma));
  t.set("seed", toml::Value::of(static_cast<double>(tc.seed)));
  toml::Table& l = eff.table("loss");
  l.set("delta", toml::Value::of(lc.delta));
  l.set("q", toml::Value::of(lc.q));
  l.set("omega", toml::Value::of(lc.omega));
  l.set("beta", toml::Value::of(lc.beta));
  l.set("mode", toml::Value::of(to_string(lc.mode)));
}

FeatureSchema load_schema_checked(const std::string& path, const std::string& cmd) {
  require(!path.empty(), cmd + " requires a schema (--schema or config key 'schema')");
  FeatureSchema schema = FeatureSchema::load(path);
  schema.validate();
  return schema;
}

RawTable load_data_checked(const std::string& path, const FeatureSchema& schema,
                           const std::string& cmd, bool require_target = true) {
  require(!path.empty(), cmd + " requires a dataset (--data or config key 'dataset')");
  return load_csv(path, schema, require_target);
}

PreprocessorState load_pre_checked(const std::string& path, const std::string& cmd) {
  require(!path.empty(), cmd + " requires a preprocessor (--preprocessor or config key)");
  return PreprocessorState::load(path);
}

MlpParams load_model_checked(const std::string& path, const std::string& cmd) {
  require(!path.empty(), cmd + " requires a model (--model or config key 'model')");
  return MlpParams::load(path);
}

int cmd_synth(const CommonFlags& cf, const CLI::Option* o_n, long n, const CLI::Option* o_seed,
              std::uint64_t seed, const CLI::Option* o_noise, double noise) {
  Resolved r = resolve_common(cf);
  const toml::Table* t = r.rs.table("synth");
  GeneratorConfig gc;
  gc.n = static_cast<int>(r.rs.integer(o_n, n, t, "n", 500));
  gc.seed = static_cast<std::uint64_t>(
      r.rs.integer(o_seed, static_cast<long>(seed), t, "seed", 0));
  gc.law.noise_sd = r.rs.num(o_noise, noise, t, "noise_sd", 0.05);
  gc.eps_pct_min = t ? t->get_number("eps_pct_min", gc.eps_pct_min) : gc.eps_pct_min;
  gc.eps_pct_max = t ? t->get_number("eps_pct_max", gc.eps_pct_max) : gc.eps_pct_max;
  gc.temperature_min = t ? t->get_number("temperature_min", gc.temperature_min) : gc.temperature_min;
  gc.temperature_max = t ? t->get_number("temperature_max", gc.temperature_max) : gc.temperature_max;
  gc.dose_min = t ? t->get_number("dose_min", gc.dose_min) : gc.dose_min;
  gc.dose_max = t ? t->get_number("dose_max", gc.dose_max) : gc.dose_max;
  gc.law.validate();
  require(gc.n >= 1, "synth: n must be at least 1");

  toml::Document eff;
  eff.root.set("output_root", toml::Value::of(r.out_root));
  toml::Table& es = eff.table("synth");
  es.set("n", toml::Value::of(static_cast<double>(gc.n)));
  es.set("seed", toml::Value::of(static_cast<double>(gc.seed)));
  es.set("noise_sd", toml::Value::of(gc.law.noise_sd));
  es.set("eps_pct_min", toml::Value::of(gc.eps_pct_min));
  es.set("eps_pct_max", toml::Value::of(gc.eps_pct_max));
  es.set("temperature_min", toml::Value::of(gc.temperature_min));
  es.set("temperature_max", toml::Value::of(gc.temperature_max));
  es.set("dose_min", toml::Value::of(gc.dose_min));
  es.set("dose_max", toml::Value::of(gc.dose_max));

  SyntheticData data = generate_dataset(gc);
  Run run = Run::open("synth", r.out_root, eff);
  data.schema.save(run.out("schema.toml"));
  save_csv(data.table, run.out("data.csv"));
  run.finish();
  return 0;
}

int cmd_preprocess(const CommonFlags& cf) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "preprocess");
  RawTable table = load_data_checked(r.data_path, schema, "preprocess");
  PreprocessorState state = fit_preprocessor(table, schema);

  toml::Document eff;
  echo_paths(eff, r, false);
  Run run = Run::open("preprocess", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);
  state.save(run.out("preprocessor.json"));

  std::vector<std::vector<std::string>> rows;
  for (const auto& f : schema.features) {
    std::string lo, hi;
    int idx = state.numeric_index(f.name);
    if (idx >= 0) {
      lo = format_double(state.mins[static_cast<std::size_t>(idx)]);
      hi = format_double(state.maxes[static_cast<std::size_t>(idx)]);
    }
    rows.push_back({f.name, to_string(f.kind), to_string(f.role), f.unit, lo, hi});
  }
  write_csv(run.out("feature_table.csv"),
            {"feature", "kind", "role", "unit", "fitted_min", "fitted_max"}, rows);
  run.finish();
  return 0;
}

int cmd_train(const CommonFlags& cf, const TrainFlags& tf, const LossFlags& lf) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "train");
  RawTable table = load_data_checked(r.data_path, schema, "train");
  PreprocessorState state =
      r.pre_path.empty() ? fit_preprocessor(table, schema) : PreprocessorState::load(r.pre_path);
  EncodedDataset enc = transform(table, state, schema);

  TrainConfig tc = resolve_train(r, tf);
  tc.validate();
  LossConfig lc = resolve_loss(r, lf);
  lc.col_strain = enc.col_strain;
  lc.col_temperature = enc.col_temperature;
  lc.col_dose = enc.col_dose;
  lc.validate(static_cast<int>(enc.cols()));

  toml::Document eff;
  echo_paths(eff, r, true);
  eff.root.set("split_ratio", toml::Value::of(r.split_ratio));
  eff.root.set("split_seed", toml::Value::of(static_cast<double>(r.split_seed)));
  echo_train_loss(eff, tc, lc, r.hidden);

  auto [train_set, test_set] = train_test_split(enc, r.split_ratio, r.split_seed);

  std::vector<int> dims;
  dims.push_back(static_cast<int>(enc.cols()));
  for (int h : r.hidden) dims.push_back(h);
  dims.push_back(1);
  MlpParams params = init_params(dims, tc.seed);
  params.schema_hash = enc.schema_hash;

  TrainResult result = train(std::move(params), train_set.X, train_set.y, lc, tc);

  Run run = Run::open("train", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);
  if (!r.pre_path.empty()) run.input("preprocessor", r.pre_path);
  result.params.save(run.out("model.json"));
  result.history.save(run.out("history.csv"));
  state.save(run.out("preprocessor.json"));
  MetricsRecord train_metrics = evaluate(result.params, train_set);
  MetricsRecord test_metrics = evaluate(result.params, test_set);
  {
    std::ofstream mf(run.out("metrics.txt"), std::ios::binary);
    mf << "[train]\n" << metrics_report(train_metrics);
    mf << "[test]\n" << metrics_report(test_metrics);
  }
  run.finish();
  return 0;
}

int cmd_eval(const CommonFlags& cf) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "eval");
  RawTable table = load_data_checked(r.data_path, schema, "eval");
  PreprocessorState state = load_pre_checked(r.pre_path, "eval");
  MlpParams params = load_model_checked(r.model_path, "eval");
  check_model_matches_preprocessor(params, state);
  EncodedDataset enc = transform(table, state, schema);

  toml::Document eff;
  echo_paths(eff, r, true);
  Run run = Run::open("eval", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);
  run.input("model", r.model_path);
  run.input("preprocessor", r.pre_path);

  MetricsRecord metrics = evaluate(params, enc);
  save_metrics(metrics, run.out("metrics.txt"));
  Eigen::VectorXd preds = forward_batch(params, enc.X);
  parity_export(enc.y, preds, run.out("parity.csv"));
  run.finish();
  std::cout << metrics_report(metrics);
  return 0;
}

int cmd_predict(const CommonFlags& cf, const std::vector<std::string>& sets) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "predict");
  PreprocessorState state = load_pre_checked(r.pre_path, "predict");
  MlpParams params = load_model_checked(r.model_path, "predict");
  check_model_matches_preprocessor(params, state);

  RawTable table;
  if (!sets.empty()) {
    table.columns = schema.csv_columns();
    table.columns.push_back(schema.target_name);
    table.source = "cli";
    table.records.emplace_back(table.columns.size(), RawCell::missing());
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      require(eq != std::string::npos, "--set expects name=value, got '" + kv + "'");
      const std::string name = kv.substr(0, eq);
      const int col = table.column(name);
      require(col >= 0 && col != table.target_column(),
              "--set names an unknown input column: " + name);
      table.records[0][static_cast<std::size_t>(col)] = cell_from_text(kv.substr(eq + 1));
    }
  } else {
    table = load_data_checked(r.data_path, schema, "predict", false);
  }
  require(!table.records.empty(), "predict: no records to predict");

  toml::Document eff;
  echo_paths(eff, r, true);
  if (!sets.empty()) {
    toml::Table& st = eff.table("predict");
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      st.set(kv.substr(0, eq), toml::Value::of(kv.substr(eq + 1)));
    }
  }
  Run run = Run::open("predict", r.out_root, eff);
  run.input("schema", r.schema_path);
  if (sets.empty()) run.input("dataset", r.data_path);
  run.input("model", r.model_path);
  run.input("preprocessor", r.pre_path);

  Eigen::MatrixXd X = encode_features(table, state, schema);
  Eigen::VectorXd preds = forward_batch(params, X);
  std::vector<std::string> header(table.columns.begin(), table.columns.end() - 1);
  header.push_back("predicted_cycles");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c + 1 < table.columns.size(); ++c) {
      row.push_back(cell_text(table.records[i][c]));
    }
    row.push_back(format_double(inverse_transform_target(preds(static_cast<Eigen::Index>(i)))));
    rows.push_back(std::move(row));
  }
  write_csv(run.out("predictions.csv"), header, rows);
  run.finish();
  return 0;
}

int cmd_explain(const CommonFlags& cf, const CLI::Option* o_exact, bool exact,
                const CLI::Option* o_perms, long perms, const CLI::Option* o_background,
                long background, const CLI::Option* o_instances, long instances,
                const CLI::Option* o_seed, std::uint64_t seed) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "explain");
  PreprocessorState state = load_pre_checked(r.pre_path, "explain");
  MlpParams params = load_model_checked(r.model_path, "explain");
  check_model_matches_preprocessor(params, state);
  RawTable table = load_data_checked(r.data_path, schema, "explain", false);
  Eigen::MatrixXd X = encode_features(table, state, schema);
  require(X.rows() > 0, "explain: dataset has no records");

  const toml::Table* t = r.rs.table("explain");
  const bool use_exact = r.rs.boolean(o_exact, exact, t, "exact", false);
  const int n_perms = static_cast<int>(r.rs.integer(o_perms, perms, t, "permutations", 200));
  const int n_background =
      static_cast<int>(r.rs.integer(o_background, background, t, "background", 100));
  const int n_instances =
      static_cast<int>(r.rs.integer(o_instances, instances, t, "instances", 20));
  const std::uint64_t shap_seed = static_cast<std::uint64_t>(
      r.rs.integer(o_seed, static_cast<long>(seed), t, "seed", 0));
  require(n_perms >= 1, "explain: permutations must be at least 1");
  require(n_background >= 1, "explain: background must be at least 1");
  require(n_instances >= 1, "explain: instances must be at least 1");

  toml::Document eff;
  echo_paths(eff, r, true);
  toml::Table& et = eff.table("explain");
  et.set("exact", toml::Value::of(use_exact));
  et.set("permutations", toml::Value::of(static_cast<double>(n_perms)));
  et.set("background", toml::Value::of(static_cast<double>(n_background)));
  et.set("instances", toml::Value::of(static_cast<double>(n_instances)));
  et.set("seed", toml::Value::of(static_cast<double>(shap_seed)));

  Run run = Run::open("explain", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);
  run.input("model", r.model_path);
  run.input("preprocessor", r.pre_path);

  // Background rows come from a seeded shuffle; explained instances are the
  // leading dataset rows in file order.
  const int n = static_cast<int>(X.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 rng(splitmix64(shap_seed));
  std::shuffle(order.begin(), order.end(), rng);
  const int bk = std::min(n_background, n);
  Eigen::MatrixXd B(bk, X.cols());
  for (int i = 0; i < bk; ++i) B.row(i) = X.row(order[static_cast<std::size_t>(i)]);
  const int ni = std::min(n_instances, n);
  Eigen::MatrixXd instances_X = X.topRows(ni);

  ModelFn model = [&params](const Eigen::VectorXd& v) { return forward(params, v); };
  ShapResult result = explain_instances(model, instances_X, B, schema_feature_names(schema),
                                        use_exact, n_perms, shap_seed);
  save_shap_csv(result, run.out("shap.csv"));
  save_summary_csv(summary(result), run.out("shap_summary.csv"));
  run.finish();
  return 0;
}

int cmd_trends(const CommonFlags& cf, const CLI::Option* o_temp, double temperature,
               const CLI::Option* o_points, long points, const CLI::Option* o_eps_min,
               double eps_min, const CLI::Option* o_eps_max, double eps_max,
               const CLI::Option* o_doses, const std::string& doses_text,
               const CLI::Option* o_base_row, long base_row) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "trends");
  PreprocessorState state = load_pre_checked(r.pre_path, "trends");
  MlpParams params = load_model_checked(r.model_path, "trends");
  check_model_matches_preprocessor(params, state);

  const toml::Table* t = r.rs.table("trends");
  TrendConfig tc;
  tc.temperature = r.rs.num(o_temp, temperature, t, "temperature", tc.temperature);
  tc.eps_points = static_cast<int>(
      r.rs.integer(o_points, points, t, "eps_points", tc.eps_points));
  tc.eps_pct_min = r.rs.num(o_eps_min, eps_min, t, "eps_pct_min", tc.eps_pct_min);
  tc.eps_pct_max = r.rs.num(o_eps_max, eps_max, t, "eps_pct_max", tc.eps_pct_max);
  if (Resolver::set(o_doses)) {
    tc.doses = parse_double_list(doses_text, "--doses");
  } else if (t != nullptr && t->has("doses")) {
    tc.doses = t->get_number_array("doses");
    require(!tc.doses.empty(), "trends: doses list is empty");
  }
  const long row_index = r.rs.integer(o_base_row, base_row, t, "base_row", 0);

  RawTable base;
  base.columns = schema.csv_columns();
  base.columns.push_back(schema.target_name);
  base.source = "cli";
  base.records.emplace_back(base.columns.size(), RawCell::missing());
  bool have_base = false;
  if (!r.data_path.empty()) {
    RawTable data = load_csv(r.data_path, schema, false);
    require(row_index >= 0 && row_index < static_cast<long>(data.records.size()),
            "trends: base_row " + std::to_string(row_index) + " out of range for " +
                std::to_string(data.records.size()) + " records");
    base.records[0] = data.records[static_cast<std::size_t>(row_index)];
    have_base = true;
  }
  if (const toml::Table* bt = r.rs.table("base")) {
    for (const auto& [key, value] : bt->entries) {
      const int col = base.column(key);
      require(col >= 0, "trends: [base] names an unknown column: " + key);
      if (value.kind == toml::Value::Kind::String) {
        base.records[0][static_cast<std::size_t>(col)] = RawCell::of_label(value.str);
      } else {
        base.records[0][static_cast<std::size_t>(col)] =
            RawCell::finite(value.as_number("[base] " + key));
      }
      have_base = true;
    }
  }
  require(have_base, "trends requires a base record (--data or a [base] config table)");

  toml::Document eff;
  echo_paths(eff, r, true);
  toml::Table& tt = eff.table("trends");
  tt.set("temperature", toml::Value::of(tc.temperature));
  tt.set("eps_points", toml::Value::of(static_cast<double>(tc.eps_points)));
  tt.set("eps_pct_min", toml::Value::of(tc.eps_pct_min));
  tt.set("eps_pct_max", toml::Value::of(tc.eps_pct_max));
  tt.set("doses", toml::Value::of(tc.doses));
  tt.set("base_row", toml::Value::of(static_cast<double>(row_index)));
  toml::Table& bt_echo = eff.table("base");
  for (std::size_t c = 0; c + 1 < base.columns.size(); ++c) {
    bt_echo.set(base.columns[c], toml::Value::of(cell_text(base.records[0][c])));
  }

  Run run = Run::open("trends", r.out_root, eff);
  run.input("schema", r.schema_path);
  if (!r.data_path.empty()) run.input("dataset", r.data_path);
  run.input("model", r.model_path);
  run.input("preprocessor", r.pre_path);

  std::vector<TrendRow> rows = trend_sweep(params, state, schema, base, tc);
  save_trend_csv(rows, run.out("trend.csv"));
  run.finish();
  return 0;
}

int cmd_prune(const CommonFlags& cf, const CLI::Option* o_threshold, double threshold) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "prune");
  RawTable table = load_data_checked(r.data_path, schema, "prune");
  const toml::Table* t = r.rs.table("prune");
  const double thr = r.rs.num(o_threshold, threshold, t, "threshold", 0.7);

  toml::Document eff;
  echo_paths(eff, r, false);
  toml::Table& pt = eff.table("prune");
  pt.set("threshold", toml::Value::of(thr));
  Run run = Run::open("prune", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);

  PreprocessorState state = fit_preprocessor(table, schema);
  EncodedDataset enc = transform(table, state, schema);
  PruneResult pruned = correlation_prune(enc, thr);

  std::vector<std::vector<std::string>> rows;
  for (const auto& name : enc.feature_names) {
    const bool removed =
        std::find(pruned.removed.begin(), pruned.removed.end(), name) != pruned.removed.end();
    rows.push_back({name, removed ? "removed" : "kept"});
  }
  write_csv(run.out("prune_report.csv"), {"feature", "action"}, rows);
  run.finish();
  return 0;
}

int cmd_search(const CommonFlags& cf, const TrainFlags& tf, const LossFlags& lf,
               const CLI::Option* o_trials, long trials, const CLI::Option* o_seed,
               std::uint64_t seed) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "search");
  RawTable table = load_data_checked(r.data_path, schema, "search");
  PreprocessorState state = fit_preprocessor(table, schema);
  EncodedDataset enc = transform(table, state, schema);

  const toml::Table* t = r.rs.table("search");
  const int n_trials = static_cast<int>(r.rs.integer(o_trials, trials, t, "trials", 15));
  const std::uint64_t search_seed = static_cast<std::uint64_t>(
      r.rs.integer(o_seed, static_cast<long>(seed), t, "seed", 0));
  require(n_trials >= 1, "search: trials must be at least 1");

  SearchSpace space;
  if (t != nullptr) {
    space.hidden1_min = static_cast<int>(t->get_integer("hidden1_min", space.hidden1_min));
    space.hidden1_max = static_cast<int>(t->get_integer("hidden1_max", space.hidden1_max));
    space.hidden2_min = static_cast<int>(t->get_integer("hidden2_min", space.hidden2_min));
    space.hidden2_max = static_cast<int>(t->get_integer("hidden2_max", space.hidden2_max));
    space.hidden3_min = static_cast<int>(t->get_integer("hidden3_min", space.hidden3_min));
    space.hidden3_max = static_cast<int>(t->get_integer("hidden3_max", space.hidden3_max));
    space.kappa_min = t->get_number("kappa_min", space.kappa_min);
    space.kappa_max = t->get_number("kappa_max", space.kappa_max);
    space.batch_min = static_cast<int>(t->get_integer("batch_min", space.batch_min));
    space.batch_max = static_cast<int>(t->get_integer("batch_max", space.batch_max));
    space.epochs_min = static_cast<int>(t->get_integer("epochs_min", space.epochs_min));
    space.epochs_max = static_cast<int>(t->get_integer("epochs_max", space.epochs_max));
    space.weight_decay_min = t->get_number("weight_decay_min", space.weight_decay_min);
    space.weight_decay_max = t->get_number("weight_decay_max", space.weight_decay_max);
    space.omega_min = t->get_number("omega_min", space.omega_min);
    space.omega_max = t->get_number("omega_max", space.omega_max);
  }

  TrainConfig base_train = resolve_train(r, tf);
  base_train.validate();
  LossConfig base_loss = resolve_loss(r, lf);
  base_loss.col_strain = enc.col_strain;
  base_loss.col_temperature = enc.col_temperature;
  base_loss.col_dose = enc.col_dose;
  base_loss.validate(static_cast<int>(enc.cols()));

  toml::Document eff;
  echo_paths(eff, r, false);
  eff.root.set("split_ratio", toml::Value::of(r.split_ratio));
  eff.root.set("split_seed", toml::Value::of(static_cast<double>(r.split_seed)));
  echo_train_loss(eff, base_train, base_loss, r.hidden);
  toml::Table& st = eff.table("search");
  st.set("trials", toml::Value::of(static_cast<double>(n_trials)));
  st.set("seed", toml::Value::of(static_cast<double>(search_seed)));
  st.set("hidden1_min", toml::Value::of(static_cast<double>(space.hidden1_min)));
  st.set("hidden1_max", toml::Value::of(static_cast<double>(space.hidden1_max)));
  st.set("hidden2_min", toml::Value::of(static_cast<double>(space.hidden2_min)));
  st.set("hidden2_max", toml::Value::of(static_cast<double>(space.hidden2_max)));
  st.set("hidden3_min", toml::Value::of(static_cast<double>(space.hidden3_min)));
  st.set("hidden3_max", toml::Value::of(static_cast<double>(space.hidden3_max)));
  st.set("kappa_min", toml::Value::of(space.kappa_min));
  st.set("kappa_max", toml::Value::of(space.kappa_max));
  st.set("batch_min", toml::Value::of(static_cast<double>(space.batch_min)));
  st.set("batch_max", toml::Value::of(static_cast<double>(space.batch_max)));
  st.set("epochs_min", toml::Value::of(static_cast<double>(space.epochs_min)));
  st.set("epochs_max", toml::Value::of(static_cast<double>(space.epochs_max)));
  st.set("weight_decay_min", toml::Value::of(space.weight_decay_min));
  st.set("weight_decay_max", toml::Value::of(space.weight_decay_max));
  st.set("omega_min", toml::Value::of(space.omega_min));
  st.set("omega_max", toml::Value::of(space.omega_max));

  auto [train_set, test_set] = train_test_split(enc, r.split_ratio, r.split_seed);
  SearchResult result = random_search(space, n_trials, train_set.X, train_set.y, base_loss,
                                      base_train, search_seed);

  Run run = Run::open("search", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);

  std::vector<std::vector<std::string>> rows;
  for (const auto& trial : result.leaderboard) {
    std::string status = trial.failed ? "failed: " + one_line(trial.error) : "ok";
    std::replace(status.begin(), status.end(), ',', ';');
    rows.push_back({std::to_string(trial.trial),
                    std::to_string(trial.hidden.size() > 0 ? trial.hidden[0] : 0),
                    std::to_string(trial.hidden.size() > 1 ? trial.hidden[1] : 0),
                    std::to_string(trial.hidden.size() > 2 ? trial.hidden[2] : 0),
                    std::to_string(trial.train_cfg.batch_size),
                    std::to_string(trial.train_cfg.epochs),
                    format_double(trial.train_cfg.weight_decay),
                    format_double(trial.train_cfg.kappa), format_double(trial.omega),
                    format_double(trial.val_mse), format_double(trial.val_r2), status});
  }
  write_csv(run.out("leaderboard.csv"),
            {"trial", "hidden1", "hidden2", "hidden3", "batch_size", "epochs", "weight_decay",
             "kappa", "omega", "val_mse", "val_r2", "status"},
            rows);

  toml::Document best;
  std::vector<double> bh;
  for (int h : result.best.hidden) bh.push_back(static_cast<double>(h));
  best.root.set("hidden", toml::Value::of(bh));
  toml::Table& btr = best.table("train");
  btr.set("batch_size", toml::Value::of(static_cast<double>(result.best.train_cfg.batch_size)));
  btr.set("epochs", toml::Value::of(static_cast<double>(result.best.train_cfg.epochs)));
  btr.set("weight_decay", toml::Value::of(result.best.train_cfg.weight_decay));
  btr.set("kappa", toml::Value::of(result.best.train_cfg.kappa));
  btr.set("lr_peak", toml::Value::of(result.best.train_cfg.lr_peak));
  btr.set("lr_end", toml::Value::of(result.best.train_cfg.lr_end));
  btr.set("gamma", toml::Value::of(result.best.train_cfg.gamma));
  btr.set("seed", toml::Value::of(static_cast<double>(result.best.train_cfg.seed)));
  toml::Table& blo = best.table("loss");
  blo.set("delta", toml::Value::of(base_loss.delta));
  blo.set("q", toml::Value::of(base_loss.q));
  blo.set("omega", toml::Value::of(result.best.omega));
  blo.set("beta", toml::Value::of(base_loss.beta));
  blo.set("mode", toml::Value::of(to_string(base_loss.mode)));
  toml::write_file(best, run.out("best.toml"));
  run.finish();
  return 0;
}

int cmd_sweep_beta(const CommonFlags& cf, const TrainFlags& tf, const LossFlags& lf,
                   const CLI::Option* o_seeds, long seeds) {
  Resolved r = resolve_common(cf);
  FeatureSchema schema = load_schema_checked(r.schema_path, "sweep-beta");
  RawTable table = load_data_checked(r.data_path, schema, "sweep-beta");
  PreprocessorState state = fit_preprocessor(table, schema);
  EncodedDataset enc = transform(table, state, schema);

  const toml::Table* t = r.rs.table("sweep_beta");
  const int n_seeds = static_cast<int>(r.rs.integer(o_seeds, seeds, t, "seeds", 3));
  require(n_seeds >= 1, "sweep-beta: seeds must be at least 1");

  TrainConfig base_train = resolve_train(r, tf);
  base_train.validate();
  LossConfig base_loss = resolve_loss(r, lf);
  base_loss.col_strain = enc.col_strain;
  base_loss.col_temperature = enc.col_temperature;
  base_loss.col_dose = enc.col_dose;
  base_loss.validate(static_cast<int>(enc.cols()));

  toml::Document eff;
  echo_paths(eff, r, false);
  eff.root.set("split_ratio", toml::Value::of(r.split_ratio));
  eff.root.set("split_seed", toml::Value::of(static_cast<double>(r.split_seed)));
  echo_train_loss(eff, base_train, base_loss, r.hidden);
  toml::Table& sb = eff.table("sweep_beta");
  sb.set("seeds", toml::Value::of(static_cast<double>(n_seeds)));

  auto [train_set, test_set] = train_test_split(enc, r.split_ratio, r.split_seed);
  std::vector<int> dims;
  dims.push_back(static_cast<int>(enc.cols()));
  for (int h : r.hidden) dims.push_back(h);
  dims.push_back(1);

  const std::vector<double> betas = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  std::vector<std::vector<std::string>> summary_rows;
  std::vector<std::vector<std::string>> run_rows;
  Run run = Run::open("sweep-beta", r.out_root, eff);
  run.input("schema", r.schema_path);
  run.input("dataset", r.data_path);
  for (double beta : betas) {
    std::vector<double> r2s, mses;
    for (int s = 0; s < n_seeds; ++s) {
      TrainConfig tc = base_train;
      tc.seed = base_train.seed + static_cast<std::uint64_t>(s);
      LossConfig lc = base_loss;
      lc.beta = beta;
      MlpParams params = init_params(dims, tc.seed);
      params.schema_hash = enc.schema_hash;
      TrainResult trained = train(std::move(params), train_set.X, train_set.y, lc, tc);
      MetricsRecord metrics = evaluate(trained.params, test_set);
      r2s.push_back(metrics.r2);
      mses.push_back(metrics.mse);
      run_rows.push_back({format_double(beta), std::to_string(tc.seed),
                          format_double(metrics.r2), format_double(metrics.mse)});
    }
    auto [r2_mean, r2_sd] = mean_sd(r2s);
    auto [mse_mean, mse_sd] = mean_sd(mses);
    summary_rows.push_back({format_double(beta), format_double(r2_mean), format_double(r2_sd),
                            format_double(mse_mean), format_double(mse_sd)});
  }
  write_csv(run.out("beta_sweep.csv"), {"beta", "r2_mean", "r2_sd", "mse_mean", "mse_sd"},
            summary_rows);
  write_csv(run.out("beta_sweep_runs.csv"), {"beta", "seed", "r2", "mse"}, run_rows);
  run.finish();
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Physics-constrained fatigue life models: data synthesis, training, "
               "evaluation, and attribution"};
  app.require_subcommand(1);

  CommonFlags cf;
  TrainFlags tf;
  LossFlags lf;

  auto* synth = app.add_subcommand("synth", "generate a synthetic strain-life dataset");
  cf.add_config(synth);
  long synth_n = 500;
  std::uint64_t synth_seed = 0;
  double synth_noise = 0.05;
  auto* o_n = synth->add_option("--n", synth_n, "number of records");
  auto* o_synth_seed = synth->add_option("--seed", synth_seed, "generator seed");
  auto* o_noise = synth->add_option("--noise", synth_noise, "log10 noise level");

  auto* preprocess = app.add_subcommand("preprocess", "fit and save a preprocessor");
  cf.add_config(preprocess);
  cf.add_schema_data(preprocess);

  auto* train_cmd = app.add_subcommand("train", "train a model on a dataset split");
  cf.add_config(train_cmd);
  cf.add_schema_data(train_cmd);
  cf.add_model_pre(train_cmd);
  cf.add_split(train_cmd);
  cf.add_hidden(train_cmd);
  tf.add(train_cmd);
  lf.add(train_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset");
  cf.add_config(eval_cmd);
  cf.add_schema_data(eval_cmd);
  cf.add_model_pre(eval_cmd);

  auto* predict = app.add_subcommand("predict", "predict cycles to failure");
  cf.add_config(predict);
  cf.add_schema_data(predict);
  cf.add_model_pre(predict);
  std::vector<std::string> set_values;
  predict->add_option("--set", set_values, "input value as name=value; repeatable");

  auto* explain = app.add_subcommand("explain", "per-feature attributions for predictions");
  cf.add_config(explain);
  cf.add_schema_data(explain);
  cf.add_model_pre(explain);
  bool explain_exact = false;
  long explain_perms = 200, explain_background = 100, explain_instances = 20;
  std::uint64_t explain_seed = 0;
  auto* o_exact = explain->add_flag("--exact", explain_exact, "exact enumeration");
  auto* o_perms = explain->add_option("--permutations", explain_perms, "sampling permutations");
  auto* o_background = explain->add_option("--background", explain_background,
                                           "background sample size");
  auto* o_instances = explain->add_option("--instances", explain_instances,
                                          "number of leading rows to explain");
  auto* o_explain_seed = explain->add_option("--seed", explain_seed, "sampling seed");

  auto* trends = app.add_subcommand("trends", "strain-life curves over a dose grid");
  cf.add_config(trends);
  cf.add_schema_data(trends);
  cf.add_model_pre(trends);
  double trend_temp = 300.0, trend_eps_min = 0.14, trend_eps_max = 6.15;
  long trend_points = 20, trend_base_row = 0;
  std::string trend_doses;
  auto* o_temp = trends->add_option("--temperature", trend_temp, "fixed test temperature");
  auto* o_points = trends->add_option("--points", trend_points, "strain grid points");
  auto* o_eps_min = trends->add_option("--eps-min", trend_eps_min, "strain range start, percent");
  auto* o_eps_max = trends->add_option("--eps-max", trend_eps_max, "strain range end, percent");
  auto* o_doses = trends->add_option("--doses", trend_doses, "dose levels, comma separated");
  auto* o_base_row = trends->add_option("--base-row", trend_base_row,
                                        "dataset row used as the base record");

  auto* prune = app.add_subcommand("prune", "report correlation-pruned features");
  cf.add_config(prune);
  cf.add_schema_data(prune);
  double prune_threshold = 0.7;
  auto* o_threshold = prune->add_option("--threshold", prune_threshold,
                                        "absolute correlation threshold");

  auto* search = app.add_subcommand("search", "random hyperparameter search");
  cf.add_config(search);
  cf.add_schema_data(search);
  cf.add_split(search);
  cf.add_hidden(search);
  tf.add(search);
  lf.add(search);
  long search_trials = 15;
  std::uint64_t search_seed = 0;
  auto* o_trials = search->add_option("--trials", search_trials, "number of trials");
  auto* o_search_seed = search->add_option("--search-seed", search_seed, "sampling seed");

  auto* sweep = app.add_subcommand("sweep-beta", "metric table over the residual steepness grid");
  cf.add_config(sweep);
  cf.add_schema_data(sweep);
  cf.add_split(sweep);
  cf.add_hidden(sweep);
  tf.add(sweep);
  lf.add(sweep);
  long sweep_seeds = 3;
  auto* o_seeds = sweep->add_option("--seeds", sweep_seeds, "seeds per grid point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 2;
  }

  if (synth->parsed()) {
    return cmd_synth(cf, o_n, synth_n, o_synth_seed, synth_seed, o_noise, synth_noise);
  }
  if (preprocess->parsed()) return cmd_preprocess(cf);
  if (train_cmd->parsed()) return cmd_train(cf, tf, lf);
  if (eval_cmd->parsed()) return cmd_eval(cf);
  if (predict->parsed()) return cmd_predict(cf, set_values);
  if (explain->parsed()) {
    return cmd_explain(cf, o_exact, explain_exact, o_perms, explain_perms, o_background,
                       explain_background, o_instances, explain_instances, o_explain_seed,
                       explain_seed);
  }
  if (trends->parsed()) {
    return cmd_trends(cf, o_temp, trend_temp, o_points, trend_points, o_eps_min, trend_eps_min,
                      o_eps_max, trend_eps_max, o_doses, trend_doses, o_base_row, trend_base_row);
  }
  if (prune->parsed()) return cmd_prune(cf, o_threshold, prune_threshold);
  if (search->parsed()) {
    return cmd_search(cf, tf, lf, o_trials, search_trials, o_search_seed, search_seed);
  }
  if (sweep->parsed()) return cmd_sweep_beta(cf, tf, lf, o_seeds, sweep_seeds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
}
