/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "crackseg/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "crackseg/pmap_io.hpp"
#include "crackseg/pnm.hpp"
#include "crackseg/rng.hpp"
#include "crackseg/svg.hpp"

namespace crackseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw FormatError(path.string() + ": write failed");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const ImageSample& sample_by_id(const std::vector<ImageSample>& corpus,
                                const std::string& id) {
  for (const ImageSample& s : corpus) {
    if (s.id == id) return s;
  }
  throw std::invalid_argument("unknown sample id: " + id);
}

std::vector<Mask> masks_of(const std::vector<ImageSample>& corpus,
                           const std::vector<std::string>& ids) {
  std::vector<Mask> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(sample_by_id(corpus, id).mask);
  return out;
}

json metrics_json(const EvalResult& r, Strategy strategy) {
  json j;
  j["strategy"] = strategy_name(strategy);
  j["counts"] = {{"tp", r.counts.tp},
                 {"fp", r.counts.fp},
                 {"fn", r.counts.fn},
                 {"tn", r.counts.tn}};
  j["crack"] = {{"precision", r.crack.precision},
                {"recall", r.crack.recall},
                {"f1", r.crack.f1},
                {"mpa", r.crack.mpa}};
  j["background"] = {{"precision", r.background.precision},
                     {"recall", r.background.recall},
                     {"f1", r.background.f1},
                     {"mpa", r.background.mpa}};
  j["global-accuracy"] = r.crack.global_accuracy;
  return j;
}

}  // namespace

std::vector<ImageSample> load_data(const RunConfig& cfg) {
  std::vector<ImageSample> corpus;
  if (cfg.data.synthetic) {
    corpus = gen_synthetic(*cfg.data.synthetic);
  } else if (!cfg.data.dir.empty()) {
    corpus = load_corpus(cfg.data.dir);
  } else {
    throw std::invalid_argument("config names no data source");
  }
  validate(cfg.arch);
  for (const ImageSample& s : corpus) {
    if (s.pixels[0].rows() != cfg.arch.input_rows ||
        s.pixels[0].cols() != cfg.arch.input_cols) {
      throw std::invalid_argument(
          "corpus/arch shape incompatibility: sample " + s.id + " is " +
          std::to_string(s.pixels[0].rows()) + "x" +
          std::to_string(s.pixels[0].cols()) + ", arch expects " +
          std::to_string(cfg.arch.input_rows) + "x" +
          std::to_string(cfg.arch.input_cols));
    }
  }
  return corpus;
}

Plane strategy_score(const ProbMap& probs, Strategy strategy,
                     const PriorMap& priors) {
  if (strategy_uses_ml(strategy)) return ml_adjusted_score(probs, priors);
  return probs.crack;
}

TrainResult train_model(const RunConfig& cfg,
                        const std::vector<ImageSample>& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const ImageSample& s : corpus) ids.push_back(s.id);

  TrainResult result;
  result.split = split_dataset(ids, cfg.seed);
  const std::vector<Mask> train_masks = masks_of(corpus, result.split.train);
  result.priors = frequency_map(train_masks, cfg.prior_alpha);
  result.weights = strategy_uses_mfw(cfg.strategy)
                       ? median_frequency_weights(global_frequencies(train_masks))
                       : uniform_weights();

  NetParams params = init_params(cfg.arch, derive_seed(cfg.seed, 1));
  OptimizerState state = opt_init(cfg.optimizer, params);

  double best_loss = std::numeric_limits<double>::infinity();
  double best_mpa = -1.0;
  NetParams best = params;
  const std::vector<double> grid = default_thresholds();

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // seeded reshuffle per epoch
    std::vector<std::string> order = result.split.train;
    Rng rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_index(i + 1)]);
    }

    double train_loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      Gradients batch_grads = zeros_like(params);
      for (std::size_t k = start; k < stop; ++k) {
        const ImageSample& s = sample_by_id(corpus, order[k]);
        auto [probs, cache] = forward(params, s.pixels);
        train_loss_sum += weighted_cross_entropy(probs, s.mask, result.weights);
        accumulate(batch_grads, backward(params, cache, s.mask, result.weights));
      }
      scale(batch_grads, 1.0 / static_cast<double>(stop - start));
      opt_step(cfg.optimizer, state, params, batch_grads);
    }

    EpochLog row;
    row.epoch = epoch;
    row.train_loss = train_loss_sum / static_cast<double>(order.size());

    double val_loss_sum = 0.0;
    std::vector<Plane> val_scores;
    std::vector<Mask> val_masks;
    for (const std::string& id : result.split.val) {
      const ImageSample& s = sample_by_id(corpus, id);
      auto [probs, cache] = forward(params, s.pixels);
      val_loss_sum += weighted_cross_entropy(probs, s.mask, result.weights);
      if (cfg.select_by_mpa) {
        val_scores.push_back(strategy_score(probs, cfg.strategy, result.priors));
        val_masks.push_back(s.mask);
      }
    }
    row.val_loss = val_loss_sum / static_cast<double>(result.split.val.size());

    if (cfg.select_by_mpa) {
      row.val_mpa = mpa(pr_curve(val_scores, val_masks, grid));
      row.snapshotted = row.val_mpa > best_mpa;
      if (row.snapshotted) {
        best_mpa = row.val_mpa;
        best = params;
      }
    } else {
      row.snapshotted = row.val_loss < best_loss;
      if (row.snapshotted) {
        best_loss = row.val_loss;
        best = params;
      }
    }
    result.log.push_back(row);
  }
  result.model = std::move(best);
  return result;
}

EvalResult evaluate_scores(const std::vector<std::string>& ids,
                           const std::vector<Plane>& crack_scores,
                           const std::vector<Mask>& truths,
                           const std::vector<double>& thresholds) {
  if (ids.size() != crack_scores.size() || ids.size() != truths.size()) {
    throw std::invalid_argument("evaluate_scores: misaligned lists");
  }
  EvalResult r;
  std::vector<Plane> bg_scores;
  std::vector<Mask> bg_truths;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Mask decision = threshold_plane(crack_scores[k], 0.5);
    r.counts += confusion(decision, truths[k]);
    r.masks.emplace_back(ids[k], std::move(decision));
    bg_scores.push_back(1.0 - crack_scores[k]);
    bg_truths.push_back((truths[k] == 0).cast<std::uint8_t>());
  }
  r.curve = pr_curve(crack_scores, truths, thresholds);
  r.bg_curve = pr_curve(bg_scores, bg_truths, thresholds);

  r.crack.precision = precision(r.counts);
  r.crack.recall = recall(r.counts);
  r.crack.f1 = f1_score(r.crack.precision, r.crack.recall);
  r.crack.mpa = mpa(r.curve);
  r.crack.global_accuracy = global_accuracy(r.counts);

  // Background metrics are the crack metrics of the swapped confusion table.
  const ConfusionCounts bg{r.counts.tn, r.counts.fn, r.counts.fp, r.counts.tp};
  r.background.precision = precision(bg);
  r.background.recall = recall(bg);
  r.background.f1 = f1_score(r.background.precision, r.background.recall);
  r.background.mpa = mpa(r.bg_curve);
  r.background.global_accuracy = global_accuracy(bg);
  return r;
}

EvalResult evaluate_model(const NetParams& model, const PriorMap& priors,
                          Strategy strategy,
                          const std::vector<ImageSample>& samples,
                          const std::vector<double>& thresholds) {
  std::vector<std::string> ids;
  std::vector<Plane> scores;
  std::vector<Mask> truths;
  ids.reserve(samples.size());
  for (const ImageSample& s : samples) {
    auto [probs, cache] = forward(model, s.pixels);
    ids.push_back(s.id);
    scores.push_back(strategy_score(probs, strategy, priors));
    truths.push_back(s.mask);
  }
  return evaluate_scores(ids, scores, truths, thresholds);
}

double validation_mpa(const RunConfig& cfg,
                      const std::vector<ImageSample>& corpus) {
  const TrainResult t = train_model(cfg, corpus);
  std::vector<ImageSample> val;
  for (const std::string& id : t.split.val) {
    val.push_back(sample_by_id(corpus, id));
  }
  const EvalResult r = evaluate_model(t.model, t.priors, cfg.strategy, val,
                                      default_thresholds());
  return r.crack.mpa;
}

void cmd_synth(const RunConfig& cfg) {
  if (!cfg.data.synthetic) {
    throw std::invalid_argument("synth requires a synthetic data block");
  }
  fs::create_directories(cfg.out_dir);
  const std::vector<ImageSample> samples = gen_synthetic(*cfg.data.synthetic);
  json manifest;
  manifest["count"] = samples.size();
  manifest["crack-fraction"] = batch_crack_fraction(samples);
  json list = json::array();
  for (const ImageSample& s : samples) {
    save_image((fs::path(cfg.out_dir) / (s.id + ".ppm")).string(), s.pixels);
    save_mask((fs::path(cfg.out_dir) / (s.id + "_mask.pgm")).string(), s.mask);
    list.push_back({{"id", s.id}, {"crack-fraction", crack_fraction(s.mask)}});
  }
  manifest["samples"] = list;
  write_file(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_train(const RunConfig& cfg) {
  const std::vector<ImageSample> corpus = load_data(cfg);
  const TrainResult t = train_model(cfg, corpus);
  fs::create_directories(cfg.out_dir);
  save_netp((fs::path(cfg.out_dir) / "model.netp").string(), t.model);
  save_priormap((fs::path(cfg.out_dir) / "priors.pmap").string(), t.priors);
  std::string log = "epoch,train_loss,val_loss,snapshot\n";
  for (const EpochLog& row : t.log) {
    log += std::to_string(row.epoch) + "," + fmt_g(row.train_loss) + "," +
           fmt_g(row.val_loss) + "," + (row.snapshotted ? "1" : "0") + "\n";
  }
  write_file(fs::path(cfg.out_dir) / "log.csv", log);
}

void cmd_eval(const RunConfig& cfg) {
  const std::vector<ImageSample> corpus = load_data(cfg);
  std::vector<std::string> ids;
  for (const ImageSample& s : corpus) ids.push_back(s.id);
  const DatasetSplit split = split_dataset(ids, cfg.seed);

  const fs::path out(cfg.out_dir);
  const NetParams model = load_netp((out / "model.netp").string());
  PriorMap priors;
  if (strategy_uses_ml(cfg.strategy)) {
    const fs::path prior_path = out / "priors.pmap";
    if (!fs::exists(prior_path)) {
      throw FormatError(prior_path.string() +
                        ": missing prior file required by the ml decision rule");
    }
    priors = load_priormap(prior_path.string());
  } else {
    // unused by *-map strategies; keep a valid placeholder
    priors.background = Plane::Constant(cfg.arch.input_rows, cfg.arch.input_cols, 0.5);
    priors.crack = Plane::Constant(cfg.arch.input_rows, cfg.arch.input_cols, 0.5);
  }

  std::vector<ImageSample> test;
  for (const std::string& id : split.test) {
    test.push_back(sample_by_id(corpus, id));
  }
  const EvalResult r = evaluate_model(model, priors, cfg.strategy, test,
                                      default_thresholds());

  write_file(out / "metrics.json", metrics_json(r, cfg.strategy).dump(2) + "\n");
  write_file(out / "pr_curve.csv", pr_curve_csv(r.curve));
  write_file(out / "pr_curve.svg",
             pr_curve_svg({{strategy_name(cfg.strategy), r.curve}}));
  fs::create_directories(out / "masks");
  for (const auto& [id, mask] : r.masks) {
    save_mask((out / "masks" / (id + ".pgm")).string(), mask);
  }
}

void cmd_tune(const RunConfig& cfg) {
  const std::vector<ImageSample> corpus = load_data(cfg);

  auto apply_params = [&cfg](const std::map<std::string, double>& p) {
    RunConfig c = cfg;
    for (const auto& [name, value] : p) {
      if (name == "learning-rate") c.optimizer.learning_rate = value;
      else if (name == "momentum") c.optimizer.momentum = value;
      else if (name == "rho") c.optimizer.rho = value;
      else if (name == "beta1") c.optimizer.beta1 = value;
      else if (name == "beta2") c.optimizer.beta2 = value;
      else if (name == "epsilon") c.optimizer.epsilon = value;
      else throw std::invalid_argument("tune: unknown hyperparameter " + name);
    }
    validate(c.optimizer);
    return c;
  };

  const Objective objective = [&](const std::map<std::string, double>& p) {
    return validation_mpa(apply_params(p), corpus);
  };

  // Force the configured defaults into the initial design so tuning can
  // never end below the default point.
  std::map<std::string, double> defaults;
  for (const SearchDim& d : cfg.space.dims) {
    double v = 0.0;
    if (d.name == "learning-rate") v = cfg.optimizer.learning_rate;
    else if (d.name == "momentum") v = cfg.optimizer.momentum;
    else if (d.name == "rho") v = cfg.optimizer.rho;
    else if (d.name == "beta1") v = cfg.optimizer.beta1;
    else if (d.name == "beta2") v = cfg.optimizer.beta2;
    else if (d.name == "epsilon") v = cfg.optimizer.epsilon;
    else throw std::invalid_argument("tune: unknown hyperparameter " + d.name);
    defaults[d.name] = std::clamp(v, d.lower, d.upper);
  }

  const TuneResult result = tune(objective, cfg.space, cfg.budget,
                                 derive_seed(cfg.seed, 77), {defaults});

  json j;
  json best;
  best["params"] = result.best_params;
  best["objective"] = result.best_objective;
  j["best"] = best;
  json history = json::array();
  for (const TuneEntry& e : result.history) {
    history.push_back({{"params", e.params}, {"objective", e.objective}});
  }
  j["history"] = history;
  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "tune.json", j.dump(2) + "\n");

  // final retrain at the best hyperparameters
  const RunConfig best_cfg = apply_params(result.best_params);
  const TrainResult t = train_model(best_cfg, corpus);
  save_netp((fs::path(cfg.out_dir) / "model.netp").string(), t.model);
  save_priormap((fs::path(cfg.out_dir) / "priors.pmap").string(), t.priors);
  std::string log = "epoch,train_loss,val_loss,snapshot\n";
  for (const EpochLog& row : t.log) {
    log += std::to_string(row.epoch) + "," + fmt_g(row.train_loss) + "," +
           fmt_g(row.val_loss) + "," + (row.snapshotted ? "1" : "0") + "\n";
  }
  write_file(fs::path(cfg.out_dir) / "log.csv", log);
}

void cmd_compare(const RunConfig& cfg) {
  if (cfg.compare_inputs.empty()) {
    throw std::invalid_argument("compare requires input directories");
  }
  struct Row {
    std::string strategy;
    double values[8];
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::string, PrCurve>> curves;
  for (const std::string& dir : cfg.compare_inputs) {
    const fs::path metrics_path = fs::path(dir) / "metrics.json";
    const fs::path curve_path = fs::path(dir) / "pr_curve.csv";
    if (!fs::exists(metrics_path) || !fs::exists(curve_path)) {
      throw FormatError(dir + ": missing strategy output (metrics.json / pr_curve.csv)");
    }
    const json m = json::parse(read_file(metrics_path));
    Row row;
    row.strategy = m.at("strategy").get<std::string>();
    row.values[0] = m.at("crack").at("precision").get<double>();
    row.values[1] = m.at("crack").at("recall").get<double>();
    row.values[2] = m.at("crack").at("f1").get<double>();
    row.values[3] = m.at("crack").at("mpa").get<double>();
    row.values[4] = m.at("background").at("precision").get<double>();
    row.values[5] = m.at("background").at("recall").get<double>();
    row.values[6] = m.at("background").at("f1").get<double>();
    row.values[7] = m.at("background").at("mpa").get<double>();
    rows.push_back(row);
    curves.emplace_back(row.strategy, parse_pr_curve_csv(read_file(curve_path)));
  }

  std::string csv =
      "strategy,crack_precision,crack_recall,crack_f1,crack_mpa,"
      "background_precision,background_recall,background_f1,background_mpa\n";
  double sums[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (const Row& row : rows) {
    csv += row.strategy;
    for (int k = 0; k < 8; ++k) {
      csv += "," + fmt_g(row.values[k]);
      sums[k] += row.values[k];
    }
    csv += "\n";
  }
  csv += "average";
  for (double s : sums) {
    csv += "," + fmt_g(s / static_cast<double>(rows.size()));
  }
  csv += "\n";

  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "compare.csv", csv);
  write_file(fs::path(cfg.out_dir) / "pr_curve.svg", pr_curve_svg(curves));
}

}  // namespace crackseg
