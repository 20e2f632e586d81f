//
// Copyright 2026 The Dialogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dialogic/experiment.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "dialogic/checkpoint.h"
#include "dialogic/corpus.h"
#include "dialogic/errors.h"
#include "dialogic/rng.h"

namespace dialogic {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Typed, path-aware access to one JSON object of the config.
class Section {
 public:
  Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ != nullptr && !obj_->is_object()) {
      throw ConfigError(path_, "must be an object");
    }
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    if (obj_ == nullptr) return;
    for (const auto& [key, _] : obj_->items()) {
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) throw ConfigError(join(path_, key), "unknown field");
    }
  }

  const json* find(const std::string& key) const {
    if (obj_ == nullptr) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  Section child(const std::string& key) const { return Section(find(key), join(path_, key)); }

  double number(const std::string& key, double fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(join(path_, key), "must be a number");
    return v->get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_unsigned()) {
      throw ConfigError(join(path_, key), "must be a nonnegative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(join(path_, key), "must be a string");
    return v->get<std::string>();
  }

  const std::string& path() const { return path_; }

 private:
  const json* obj_;
  std::string path_;
};

template <class Parse>
auto parse_enum(const Section& s, const std::string& key, std::string_view fallback_name,
                Parse parse) {
  const std::string name = s.string(key, std::string(fallback_name));
  auto value = parse(name);
  if (!value) throw ConfigError(join(s.path(), key), "unknown value '" + name + "'");
  return *value;
}

TemplateSet templates_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "must map category names to template lists");
  TemplateSet out;
  for (const auto& [name, list] : doc.items()) {
    auto category = category_from_name(name);
    if (!category) throw ConfigError(join(path, name), "unknown category");
    if (!list.is_array()) throw ConfigError(join(path, name), "must be a list of strings");
    for (const auto& item : list) {
      if (!item.is_string()) throw ConfigError(join(path, name), "must be a list of strings");
      out[category_index(*category)].push_back(item.get<std::string>());
    }
  }
  for (Category c : all_categories()) {
    if (out[category_index(c)].empty()) {
      throw ConfigError(join(path, std::string(category_name(c))), "category has no templates");
    }
  }
  return out;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<LabeledExample> load_all_splits(const ExperimentConfig& config) {
  std::vector<LabeledExample> all;
  for (const char* name : {"train", "validation", "test"}) {
    const auto path = data_dir(config) / (std::string(name) + ".jsonl");
    if (!std::filesystem::exists(path)) {
      throw DatasetError(DatasetError::Kind::kIo, 0,
                         "dataset file '" + path.string() + "' does not exist; run synth first");
    }
    auto part = load_dataset(path);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  validate_examples(all);
  return all;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc,
                                         const std::filesystem::path& base_dir) {
  const Section root(&doc, "");
  root.allow_only({"output_dir", "corpus", "encoder", "train", "eval"});
  ExperimentConfig cfg;

  cfg.output_dir = root.string("output_dir", "out");
  if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;

  // corpus
  const Section corpus = root.child("corpus");
  corpus.allow_only({"n_per_class", "templates", "noise", "seed", "splits"});
  cfg.corpus.n_per_class = corpus.unsigned_int("n_per_class", cfg.corpus.n_per_class);
  if (cfg.corpus.n_per_class == 0) throw ConfigError("corpus.n_per_class", "must be positive");
  cfg.corpus.seed = corpus.unsigned_int("seed", cfg.corpus.seed);
  if (const json* t = corpus.find("templates")) {
    if (t->is_string() && t->get<std::string>() == "builtin") {
      cfg.corpus.templates_source = "builtin";
    } else if (t->is_string()) {
      std::filesystem::path path = t->get<std::string>();
      if (path.is_relative()) path = base_dir / path;
      std::ifstream in(path);
      if (!in) throw ConfigError("corpus.templates", "cannot open '" + path.string() + "'");
      json file;
      try {
        file = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("corpus.templates", std::string("invalid JSON: ") + e.what());
      }
      cfg.corpus.templates = templates_from_json(file, "corpus.templates");
      cfg.corpus.templates_source = path.string();
    } else {
      cfg.corpus.templates = templates_from_json(*t, "corpus.templates");
      cfg.corpus.templates_source = "inline";
    }
  }
  const Section noise = corpus.child("noise");
  noise.allow_only({"target_cer", "substitution", "deletion", "insertion", "seed"});
  NoiseSpec& n = cfg.corpus.noise;
  n.target_cer = noise.number("target_cer", n.target_cer);
  n.substitution_weight = noise.number("substitution", n.substitution_weight);
  n.deletion_weight = noise.number("deletion", n.deletion_weight);
  n.insertion_weight = noise.number("insertion", n.insertion_weight);
  n.rng_seed = noise.unsigned_int("seed", n.rng_seed);
  try {
    n.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("corpus." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }
  const Section splits = corpus.child("splits");
  splits.allow_only({"train", "validation", "test"});
  cfg.corpus.splits.train = splits.number("train", cfg.corpus.splits.train);
  cfg.corpus.splits.validation = splits.number("validation", cfg.corpus.splits.validation);
  cfg.corpus.splits.test = splits.number("test", cfg.corpus.splits.test);
  try {
    cfg.corpus.splits.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("corpus." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }

  // encoder
  const Section enc = root.child("encoder");
  enc.allow_only({"embed_dim", "max_seq_len", "architecture", "seed"});
  EncoderConfig& e = cfg.train.encoder;
  e.embed_dim = enc.unsigned_int("embed_dim", e.embed_dim);
  e.max_seq_len = enc.unsigned_int("max_seq_len", e.max_seq_len);
  e.rng_seed = enc.unsigned_int("seed", e.rng_seed);
  e.architecture = parse_enum(enc, "architecture",
                              architecture_name(e.architecture), architecture_from_name);
  if (e.architecture != Architecture::kTinyReference) {
    throw ConfigError("encoder.architecture",
                      "only tiny-reference encoders can be trained; external adapters are "
                      "loaded from checkpoints");
  }
  e.n_classes = kNumCategories;
  e.validate();

  // train
  const Section tr = root.child("train");
  tr.allow_only({"gamma", "margin", "pairing_mode", "batch_size", "epochs", "learning_rate",
                 "seed", "early_stop_patience", "pool_capacity", "pool_cadence"});
  TrainConfig& t = cfg.train;
  t.loss.gamma = tr.number("gamma", t.loss.gamma);
  t.loss.margin = tr.number("margin", t.loss.margin);
  t.loss.pairing_mode = parse_enum(tr, "pairing_mode",
                                   pairing_mode_name(t.loss.pairing_mode),
                                   pairing_mode_from_name);
  t.batch_size = tr.unsigned_int("batch_size", t.batch_size);
  t.epochs = tr.unsigned_int("epochs", t.epochs);
  t.learning_rate = tr.number("learning_rate", t.learning_rate);
  t.rng_seed = tr.unsigned_int("seed", t.rng_seed);
  t.early_stop_patience = tr.unsigned_int("early_stop_patience", t.early_stop_patience);
  t.pool_capacity = tr.unsigned_int("pool_capacity", t.pool_capacity);
  t.pool_cadence = parse_enum(tr, "pool_cadence",
                              pool_cadence_name(t.pool_cadence), pool_cadence_from_name);
  if (!(t.learning_rate > 0.0)) throw ConfigError("train.learning_rate", "must be positive");
  t.loss.validate();
  if (t.pool_capacity == 0) throw ConfigError("train.pool_capacity", "must be positive");
  if (t.batch_size == 0) throw ConfigError("train.batch_size", "must be positive");

  // eval
  const Section ev = root.child("eval");
  ev.allow_only({"n_per_side", "seed"});
  cfg.eval.n_per_side = ev.unsigned_int("n_per_side", cfg.eval.n_per_side);
  if (cfg.eval.n_per_side == 0) throw ConfigError("eval.n_per_side", "must be positive");
  cfg.eval.seed = ev.unsigned_int("seed", cfg.eval.seed);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig cfg = parse_experiment_config(doc, path.parent_path());
  if (const char* override_dir = std::getenv(kOutputDirEnv);
      override_dir != nullptr && *override_dir != '\0') {
    cfg.output_dir = override_dir;
  }
  return cfg;
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json templates_json;
  for (Category c : all_categories()) {
    templates_json[std::string(category_name(c))] = corpus.templates[category_index(c)];
  }
  ordered_json doc;
  doc["corpus"] = {
      {"n_per_class", corpus.n_per_class},
      {"templates", templates_json},
      {"noise",
       {{"target_cer", corpus.noise.target_cer},
        {"substitution", corpus.noise.substitution_weight},
        {"deletion", corpus.noise.deletion_weight},
        {"insertion", corpus.noise.insertion_weight},
        {"seed", corpus.noise.rng_seed}}},
      {"seed", corpus.seed},
      {"splits",
       {{"train", corpus.splits.train},
        {"validation", corpus.splits.validation},
        {"test", corpus.splits.test}}},
  };
  doc["encoder"] = {{"embed_dim", train.encoder.embed_dim},
                    {"max_seq_len", train.encoder.max_seq_len},
                    {"architecture", std::string(architecture_name(train.encoder.architecture))},
                    {"seed", train.encoder.rng_seed}};
  ordered_json tr = train.to_json();
  tr.erase("encoder");
  doc["train"] = tr;
  doc["eval"] = {{"n_per_side", eval.n_per_side}, {"seed", eval.seed}};
  return doc;
}

std::string ExperimentConfig::hash() const {
  const std::string text = to_json().dump();
  return hex64(fnv1a(text.data(), text.size()));
}

std::string_view train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kBaseline: return "baseline";
    case TrainMode::kAll: return "all";
    case TrainMode::kHard: return "hard";
  }
  return "baseline";
}

std::optional<TrainMode> train_mode_from_name(std::string_view name) {
  if (name == "baseline") return TrainMode::kBaseline;
  if (name == "all") return TrainMode::kAll;
  if (name == "hard") return TrainMode::kHard;
  return std::nullopt;
}

TrainConfig apply_mode(TrainConfig config, TrainMode mode) {
  switch (mode) {
    case TrainMode::kBaseline:
      config.loss.pairing_mode = PairingMode::kNone;
      config.loss.gamma = 1.0;
      break;
    case TrainMode::kAll:
    case TrainMode::kHard:
      config.loss.pairing_mode =
          mode == TrainMode::kAll ? PairingMode::kRandomAll : PairingMode::kHard;
      if (!(config.loss.gamma < 1.0)) {
        throw ConfigError("train.gamma", "must be below 1 for the '" +
                                             std::string(train_mode_name(mode)) + "' mode");
      }
      break;
  }
  return config;
}

std::filesystem::path data_dir(const ExperimentConfig& config) {
  return config.output_dir / "data";
}

std::filesystem::path run_dir(const ExperimentConfig& config, TrainMode mode) {
  return config.output_dir / "runs" / std::string(train_mode_name(mode));
}

SynthSummary cmd_synth(const std::filesystem::path& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const SyntheticCorpus corpus = generate_synthetic_corpus(
      cfg.corpus.n_per_class, cfg.corpus.templates, cfg.corpus.noise, cfg.corpus.seed,
      cfg.corpus.splits);

  const auto dir = data_dir(cfg);
  std::filesystem::create_directories(dir);
  SynthSummary summary;
  summary.realized_cer = corpus.realized_cer();
  ordered_json files = ordered_json::object();
  for (Split split : {Split::kTrain, Split::kValidation, Split::kTest}) {
    const auto part = filter_split(corpus.examples, split);
    const std::string name(split_name(split));
    write_dataset(dir / (name + ".jsonl"), part);
    files[name] = {{"path", name + ".jsonl"}, {"examples", part.size()}};
    if (split == Split::kTrain) summary.n_train = part.size();
    if (split == Split::kValidation) summary.n_validation = part.size();
    if (split == Split::kTest) summary.n_test = part.size();
  }

  ordered_json manifest;
  manifest["created_at"] = utc_timestamp();
  manifest["config_hash"] = cfg.hash();
  manifest["corpus_seed"] = cfg.corpus.seed;
  manifest["noise_seed"] = cfg.corpus.noise.rng_seed;
  manifest["n_per_class"] = cfg.corpus.n_per_class;
  manifest["templates"] = cfg.corpus.templates_source;
  manifest["target_cer"] = cfg.corpus.noise.target_cer;
  manifest["realized_cer"] = summary.realized_cer;
  manifest["files"] = files;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

TrainResult cmd_train(const std::filesystem::path& config_path, TrainMode mode) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const TrainConfig train_cfg = apply_mode(cfg.train, mode);
  const auto dataset = load_all_splits(cfg);

  ordered_json meta = {{"mode", std::string(train_mode_name(mode))},
                       {"config_hash", cfg.hash()}};
  TrainResult result = train(train_cfg, dataset, meta);

  const auto dir = run_dir(cfg, mode);
  std::filesystem::create_directories(dir);
  std::string log;
  for (const auto& line : result.log_lines) log += line + "\n";
  write_text(dir / "train_log.jsonl", log);

  ordered_json ckpt_meta = meta;
  ckpt_meta["best_epoch"] = result.best_epoch;
  ckpt_meta["best_val_macro_f1"] =
      result.best_epoch == 0 ? ordered_json(nullptr) : ordered_json(result.best_val_macro_f1);
  save_checkpoint(dir / "checkpoint.json", result.best, ckpt_meta);
  return result;
}

EvalOutput cmd_eval(const std::filesystem::path& checkpoint_path,
                    const std::filesystem::path& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  if (!std::filesystem::exists(checkpoint_path)) {
    throw CheckpointError("checkpoint '" + checkpoint_path.string() + "' does not exist");
  }
  const auto encoder = load_encoder(checkpoint_path);

  const auto test_path = data_dir(cfg) / "test.jsonl";
  if (!std::filesystem::exists(test_path)) {
    throw DatasetError(DatasetError::Kind::kIo, 0,
                       "test split '" + test_path.string() + "' does not exist; run synth first");
  }
  const auto test_pool = filter_split(load_dataset(test_path), Split::kTest);
  const auto sets = build_binary_sets(test_pool, cfg.eval.n_per_side, cfg.eval.seed);

  std::string run = checkpoint_path.parent_path().filename().string();
  if (run.empty()) run = checkpoint_path.stem().string();
  RunMetadata meta{run, cfg.hash(), cfg.eval.seed, checkpoint_id(checkpoint_path)};

  EvalOutput out;
  out.report = evaluate_all(*encoder, sets, meta);
  const std::pair<std::string, MetricsReport> variants[] = {{run, out.report}};
  out.table = render_table(variants);

  const auto dir = cfg.output_dir / "eval" / run;
  std::filesystem::create_directories(dir);
  out.report_path = dir / "metrics.json";
  write_text(out.report_path, out.report.to_json());
  write_text(dir / "table.txt", out.table);
  return out;
}

}  // namespace dialogic
