// Copyright 2026 The annobias Authors
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

#include "annobias/wel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>

#include "annobias/eval.hpp"
#include "annobias/random.hpp"
#include "annobias/report.hpp"

namespace annobias {

namespace {

constexpr int kManifestVersion = 1;
// Stream ids reserved next to the per-variant streams 1..K.
constexpr std::uint64_t kHoldoutStream = 0xC0FFEE0001ULL;
constexpr std::uint64_t kLearnerStream = 0xC0FFEE0002ULL;

std::vector<std::size_t> annotated_indices(const AnnotatedDataset& dataset) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset.instances()[i].annotations.empty()) out.push_back(i);
  }
  return out;
}

LabelVariant draw_variant(const AnnotatedDataset& dataset,
                          std::span<const std::size_t> eligible,
                          std::uint64_t master_seed, std::size_t index) {
  LabelVariant variant;
  variant.variant_index = index;
  variant.seed_used = variant_seed(master_seed, index);
  variant.labels.reserve(eligible.size());
  Rng rng(variant.seed_used);
  for (std::size_t i : eligible) {
    const auto& annotations = dataset.instances()[i].annotations;
    const std::size_t pick = rng.uniform_index(annotations.size());
    variant.labels.push_back({i, pick, annotations[pick].label()});
  }
  return variant;
}

}  // namespace

std::uint64_t variant_seed(std::uint64_t master_seed, std::size_t variant_index) {
  return derive_seed(master_seed, variant_index);
}

VariantSample sample_label_variants(const AnnotatedDataset& dataset,
                                    std::size_t k, std::uint64_t master_seed,
                                    Execution exec) {
  dataset.require_categorical();
  if (k == 0) throw Error(Errc::kInvalidArgument, "K must be >= 1");
  const auto eligible = annotated_indices(dataset);
  if (eligible.empty()) {
    throw Error(Errc::kEmptyAnnotations, "no annotated instance to sample from");
  }
  VariantSample sample;
  sample.n_excluded = dataset.size() - eligible.size();
  sample.variants.resize(k);
  const auto count = static_cast<std::int64_t>(k);
  if (exec == Execution::kSerial) {
    for (std::int64_t v = 0; v < count; ++v) {
      sample.variants[static_cast<std::size_t>(v)] =
          draw_variant(dataset, eligible, master_seed, static_cast<std::size_t>(v) + 1);
    }
    return sample;
  }
#pragma omp parallel for schedule(static) num_threads(kernels::thread_count())
  for (std::int64_t v = 0; v < count; ++v) {
    sample.variants[static_cast<std::size_t>(v)] =
        draw_variant(dataset, eligible, master_seed, static_cast<std::size_t>(v) + 1);
  }
  return sample;
}

// --- weights ----------------------------------------------------------------

std::string_view weight_scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kF1Proportional: return "f1";
    case WeightScheme::kInverseCe: return "inv-ce";
    case WeightScheme::kInverseMd: return "inv-md";
    case WeightScheme::kSoftmax: return "softmax";
  }
  return "f1";
}

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "f1") return WeightScheme::kF1Proportional;
  if (name == "inv-ce") return WeightScheme::kInverseCe;
  if (name == "inv-md") return WeightScheme::kInverseMd;
  if (name == "softmax") return WeightScheme::kSoftmax;
  throw Error(Errc::kInvalidArgument,
              "unknown weight scheme '" + std::string(name) + "'");
}

WeightResult compute_weights(std::span<const double> scores,
                             WeightScheme scheme, double temperature) {
  if (scores.empty()) throw Error(Errc::kInvalidArgument, "no scores to weight");
  if (!(temperature > 0.0)) {
    throw Error(Errc::kInvalidArgument, "softmax temperature must be > 0");
  }
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw Error(Errc::kInvalidArgument, "holdout scores must be finite and >= 0");
    }
  }
  const std::size_t k = scores.size();
  WeightResult result;
  std::vector<double> raw(k);
  switch (scheme) {
    case WeightScheme::kF1Proportional:
      for (std::size_t i = 0; i < k; ++i) raw[i] = scores[i];
      break;
    case WeightScheme::kInverseCe:
    case WeightScheme::kInverseMd:
      for (std::size_t i = 0; i < k; ++i) raw[i] = 1.0 / (kInverseLossEpsilon + scores[i]);
      break;
    case WeightScheme::kSoftmax: {
      const double n = static_cast<double>(k);
      const double mean = kernels::ordered_sum(scores) / n;
      double var = 0.0;
      for (double s : scores) var += (s - mean) * (s - mean);
      const double sd = std::sqrt(var / n);
      std::vector<double> z(k, 0.0);
      if (sd > 0.0) {
        for (std::size_t i = 0; i < k; ++i) z[i] = (scores[i] - mean) / sd / temperature;
      }
      const double peak = *std::max_element(z.begin(), z.end());
      for (std::size_t i = 0; i < k; ++i) raw[i] = std::exp(z[i] - peak);
      break;
    }
  }
  const double total = kernels::ordered_sum(raw);
  if (!(total > 0.0)) {
    result.degenerate = true;
    result.weights.assign(k, 1.0 / static_cast<double>(k));
    return result;
  }
  result.weights.resize(k);
  for (std::size_t i = 0; i < k; ++i) result.weights[i] = raw[i] / total;
  return result;
}

// --- training ---------------------------------------------------------------

nlohmann::json WelConfig::to_json() const {
  return {
      {"k", k},
      {"seed", seed},
      {"learner", learner.to_json()},
      {"weight_scheme", weight_scheme_name(scheme)},
      {"temperature", temperature},
      {"holdout", {{"prefer_dev", holdout.prefer_dev},
                   {"carve_fraction", holdout.carve_fraction}}},
  };
}

WeightingSplit weighting_split(const AnnotatedDataset& dataset,
                               const HoldoutSpec& spec, std::uint64_t seed) {
  WeightingSplit split;
  std::vector<std::size_t> pool;
  std::vector<std::size_t> dev;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Instance& inst = dataset.instances()[i];
    if (inst.annotations.empty()) continue;
    if (inst.split == Split::kTrain || inst.split == Split::kUnspecified) {
      pool.push_back(i);
    } else if (inst.split == Split::kDev) {
      dev.push_back(i);
    }
  }
  if (spec.prefer_dev && !dev.empty()) {
    split.train = std::move(pool);
    split.holdout = std::move(dev);
    split.holdout_is_dev = true;
  } else {
    if (!(spec.carve_fraction > 0.0 && spec.carve_fraction < 1.0)) {
      throw Error(Errc::kInvalidArgument, "carve fraction must be in (0, 1)");
    }
    std::vector<std::size_t> shuffled = pool;
    Rng rng(derive_seed(seed, kHoldoutStream));
    rng.shuffle(shuffled);
    auto take = static_cast<std::size_t>(
        std::llround(spec.carve_fraction * static_cast<double>(pool.size())));
    take = std::clamp<std::size_t>(take, pool.size() > 1 ? 1 : 0,
                                   pool.size() > 1 ? pool.size() - 1 : 0);
    split.holdout.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(take));
    split.train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(take), shuffled.end());
    std::sort(split.holdout.begin(), split.holdout.end());
    std::sort(split.train.begin(), split.train.end());
  }
  if (split.train.empty()) {
    throw Error(Errc::kEmptyTraining, "no annotated training instances");
  }
  if (split.holdout.empty()) {
    throw Error(Errc::kEmptyTraining, "no annotated holdout instances");
  }
  return split;
}

WelEnsemble::WelEnsemble(LabelSet labels,
                         std::vector<std::shared_ptr<const Predictor>> predictors,
                         std::vector<double> weights, WelConfig config,
                         std::vector<LearnerScores> holdout_scores,
                         std::vector<std::uint64_t> variant_seeds,
                         bool degenerate_weights)
    : labels_(std::move(labels)),
      predictors_(std::move(predictors)),
      weights_(std::move(weights)),
      config_(std::move(config)),
      holdout_scores_(std::move(holdout_scores)),
      variant_seeds_(std::move(variant_seeds)),
      degenerate_weights_(degenerate_weights) {
  if (predictors_.empty() || predictors_.size() != weights_.size()) {
    throw Error(Errc::kInvariantViolation, "one weight per predictor required");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(Errc::kInvariantViolation, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::kInvariantViolation, "weights do not sum to 1");
  }
  for (const auto& p : predictors_) {
    if (!p || p->num_labels() != labels_.size()) {
      throw Error(Errc::kInvariantViolation, "predictor/label set mismatch");
    }
  }
}

namespace {

PredictionSet predict_indices(const Predictor& predictor,
                              const AnnotatedDataset& dataset,
                              std::span<const std::size_t> indices,
                              const std::string& model_id) {
  PredictionSet out(model_id);
  for (std::size_t i : indices) {
    const Instance& inst = dataset.instances()[i];
    out.add(inst.id, predictor.predict_proba(inst.text));
  }
  return out;
}

struct TrainedLearner {
  std::shared_ptr<const Predictor> predictor;
  LearnerScores scores;
};

TrainedLearner train_one(const AnnotatedDataset& train,
                         const AnnotatedDataset& holdout,
                         const LabelVariant& variant, const WelConfig& config) {
  std::vector<LabeledText> data;
  data.reserve(variant.labels.size());
  for (const SampledLabel& s : variant.labels) {
    data.push_back({train.instances()[s.instance_index].text, s.label});
  }
  TrainConfig learner = config.learner;
  learner.seed = derive_seed(variant.seed_used, kLearnerStream);
  TrainedLearner out;
  out.predictor = fit(learner, train.label_set().size(), data);
  std::vector<std::size_t> all(holdout.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const PredictionSet preds = predict_indices(
      *out.predictor, holdout, all,
      "learner-" + std::to_string(variant.variant_index));
  const EvalReport eval = evaluate(preds, holdout,
                                   default_averaging(holdout.label_set()),
                                   Execution::kSerial);
  out.scores = {eval.f1, eval.ce, eval.md};
  return out;
}

double scheme_score(const LearnerScores& s, WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kInverseCe: return s.ce;
    case WeightScheme::kInverseMd: return s.md;
    case WeightScheme::kF1Proportional:
    case WeightScheme::kSoftmax: break;
  }
  return s.f1;
}

}  // namespace

WelEnsemble train_wel(const AnnotatedDataset& dataset, const WelConfig& config) {
  dataset.require_categorical();
  config.learner.validate();
  if (config.k == 0) throw Error(Errc::kInvalidArgument, "K must be >= 1");
  const WeightingSplit split = weighting_split(dataset, config.holdout, config.seed);
  const AnnotatedDataset train = dataset.subset(split.train);
  const AnnotatedDataset holdout = dataset.subset(split.holdout);

  const VariantSample sample =
      sample_label_variants(train, config.k, config.seed, Execution::kSerial);

  std::vector<TrainedLearner> learners(config.k);
  std::vector<std::exception_ptr> errors(config.k);
  const int threads = config.threads > 0 ? config.threads : kernels::thread_count();
  const auto count = static_cast<std::int64_t>(config.k);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t v = 0; v < count; ++v) {
    const auto i = static_cast<std::size_t>(v);
    try {
      learners[i] = train_one(train, holdout, sample.variants[i], config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::shared_ptr<const Predictor>> predictors;
  std::vector<LearnerScores> scores;
  std::vector<double> scheme_scores;
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < config.k; ++i) {
    predictors.push_back(learners[i].predictor);
    scores.push_back(learners[i].scores);
    scheme_scores.push_back(scheme_score(learners[i].scores, config.scheme));
    seeds.push_back(sample.variants[i].seed_used);
  }
  const WeightResult weights =
      compute_weights(scheme_scores, config.scheme, config.temperature);
  WelEnsemble ensemble(dataset.label_set(), std::move(predictors),
                       weights.weights, config, std::move(scores),
                       std::move(seeds), weights.degenerate);
  ensemble.provenance["holdout_source"] = split.holdout_is_dev ? "dev" : "carve-out";
  ensemble.provenance["n_train"] = split.train.size();
  ensemble.provenance["n_holdout"] = split.holdout.size();
  return ensemble;
}

SoftLabel wel_predict(const WelEnsemble& ensemble, std::string_view text) {
  const auto& predictors = ensemble.predictors();
  const auto& weights = ensemble.weights();
  std::vector<double> mix(ensemble.label_set().size(), 0.0);
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    const SoftLabel out = predictors[k]->predict_proba(text);
    for (std::size_t c = 0; c < mix.size(); ++c) mix[c] += weights[k] * out[c];
  }
  for (double& v : mix) v = std::clamp(v, 0.0, 1.0);
  return SoftLabel::from_probs(std::move(mix));
}

namespace {

template <typename PredictFn>
PredictionSet predict_all(const AnnotatedDataset& dataset,
                          const std::string& model_id, PredictFn&& predict,
                          Execution exec) {
  const std::size_t n = dataset.size();
  std::vector<std::optional<SoftLabel>> outputs(n);
  // map_items only carries doubles, so collect SoftLabels directly.
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(kernels::thread_count()) \
    if (exec == Execution::kParallel)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      outputs[idx] = predict(dataset.instances()[idx].text);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  PredictionSet out(model_id);
  for (std::size_t i = 0; i < n; ++i) {
    out.add(dataset.instances()[i].id, std::move(*outputs[i]));
  }
  return out;
}

}  // namespace

PredictionSet predict_dataset(const WelEnsemble& ensemble,
                              const AnnotatedDataset& dataset,
                              const std::string& model_id, Execution exec) {
  return predict_all(
      dataset, model_id,
      [&](std::string_view text) { return wel_predict(ensemble, text); }, exec);
}

PredictionSet predict_dataset(const Predictor& predictor,
                              const AnnotatedDataset& dataset,
                              const std::string& model_id, Execution exec) {
  return predict_all(
      dataset, model_id,
      [&](std::string_view text) { return predictor.predict_proba(text); }, exec);
}

WelEnsemble reweight(const WelEnsemble& ensemble, WeightScheme scheme,
                     double temperature) {
  std::vector<double> scores;
  for (const auto& s : ensemble.holdout_scores()) scores.push_back(scheme_score(s, scheme));
  const WeightResult weights = compute_weights(scores, scheme, temperature);
  WelConfig config = ensemble.config();
  config.scheme = scheme;
  config.temperature = temperature;
  WelEnsemble out(ensemble.label_set(), ensemble.predictors(), weights.weights, config,
                  ensemble.holdout_scores(), ensemble.variant_seeds(), weights.degenerate);
  out.provenance = ensemble.provenance;
  return out;
}

std::vector<GridPoint> weight_grid(const WelEnsemble& ensemble,
                                   const AnnotatedDataset& dataset,
                                   std::span<const double> temperatures,
                                   F1Averaging averaging, Execution exec) {
  if (temperatures.empty()) {
    throw Error(Errc::kInvalidArgument, "weight grid needs at least one temperature");
  }
  std::vector<std::pair<WeightScheme, double>> points = {
      {WeightScheme::kF1Proportional, 1.0},
      {WeightScheme::kInverseCe, 1.0},
      {WeightScheme::kInverseMd, 1.0}};
  for (double t : temperatures) points.emplace_back(WeightScheme::kSoftmax, t);

  std::vector<GridPoint> grid;
  for (const auto& [scheme, temperature] : points) {
    const WelEnsemble candidate = reweight(ensemble, scheme, temperature);
    const PredictionSet preds = predict_dataset(candidate, dataset, "wel", exec);
    grid.push_back({scheme, temperature, candidate.weights(), candidate.degenerate_weights(),
                    evaluate(preds, dataset, averaging, exec)});
  }
  return grid;
}

std::unique_ptr<Predictor> train_majority_vote_baseline(
    const AnnotatedDataset& dataset, const WelConfig& config) {
  dataset.require_categorical();
  const WeightingSplit split = weighting_split(dataset, config.holdout, config.seed);
  std::vector<LabeledText> data;
  data.reserve(split.train.size());
  for (std::size_t i : split.train) {
    const Instance& inst = dataset.instances()[i];
    data.push_back({inst.text, majority_label(inst, dataset.label_set())});
  }
  TrainConfig learner = config.learner;
  learner.seed = derive_seed(config.seed, kLearnerStream);
  return fit(learner, dataset.label_set().size(), data);
}

// --- debiasing --------------------------------------------------------------

DebiasResult debias_output(std::span<const double> prediction,
                           const DebiasConfig& config,
                           const std::string& instance_id) {
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
    throw Error(Errc::kInvalidArgument, "lambda must be finite and >= 0");
  }
  auto it = config.bias.find(instance_id);
  if (it == config.bias.end()) {
    throw Error(Errc::kMissingBiasComponent,
                "no bias component for '" + instance_id + "'");
  }
  const std::vector<double>& b = it->second;
  if (b.size() != prediction.size()) {
    throw Error(Errc::kDimensionMismatch,
                "bias component length differs from the prediction");
  }
  std::vector<double> raw(prediction.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!std::isfinite(b[k])) {
      throw Error(Errc::kInvalidArgument, "non-finite bias component");
    }
    raw[k] = prediction[k] - config.lambda * b[k];
  }
  bool valid = true;
  double sum = 0.0;
  for (double v : raw) {
    valid = valid && v >= 0.0 && v <= 1.0;
    sum += v;
  }
  valid = valid && std::abs(sum - 1.0) <= SoftLabel::kSumTolerance;
  if (valid) {
    return {raw, SoftLabel::from_probs(raw), false};
  }
  std::vector<double> clamped(raw.size());
  double mass = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    clamped[k] = std::max(raw[k], 0.0);
    mass += clamped[k];
  }
  if (!(mass > 0.0)) {
    return {raw, SoftLabel::uniform(raw.size()), true};
  }
  for (double& v : clamped) v /= mass;
  return {raw, SoftLabel::from_probs(std::move(clamped)), false};
}

std::map<std::string, std::vector<double>> read_bias_components(std::istream& in) {
  std::map<std::string, std::vector<double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    try {
      const auto record = nlohmann::json::parse(line);
      auto id = record.at("instance_id").get<std::string>();
      auto bias = record.at("bias").get<std::vector<double>>();
      if (!out.emplace(id, std::move(bias)).second) {
        throw Error(Errc::kDuplicateId, where + "instance '" + id + "' repeats");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, where + e.what());
    }
  }
  return out;
}

// --- persistence ------------------------------------------------------------

namespace {

std::string learner_file(std::size_t k) {
  char name[32];
  std::snprintf(name, sizeof(name), "learner_%03zu.json", k + 1);
  return name;
}

}  // namespace

nlohmann::json ensemble_manifest(const WelEnsemble& ensemble) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& s : ensemble.holdout_scores()) {
    scores.push_back({{"f1", s.f1}, {"ce", s.ce}, {"md", s.md}});
  }
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t k = 0; k < ensemble.predictors().size(); ++k) {
    files.push_back(learner_file(k));
  }
  nlohmann::json labels = ensemble.label_set().labels();
  return {
      {"format", "annobias.wel"},
      {"version", kManifestVersion},
      {"tool_version", kToolVersion},
      {"config", ensemble.config().to_json()},
      {"label_set", labels},
      {"positive_label", ensemble.label_set().positive()
                             ? nlohmann::json(ensemble.label_set().name(
                                   *ensemble.label_set().positive()))
                             : nlohmann::json(nullptr)},
      {"variant_seeds", ensemble.variant_seeds()},
      {"holdout_scores", scores},
      {"weights", ensemble.weights()},
      {"degenerate_weights", ensemble.degenerate_weights()},
      {"learners", files},
      {"provenance", ensemble.provenance},
  };
}

void save_ensemble(const WelEnsemble& ensemble, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create '" + dir.string() + "'");
  for (std::size_t k = 0; k < ensemble.predictors().size(); ++k) {
    write_file_atomic(dir / learner_file(k),
                      ensemble.predictors()[k]->to_json().dump() + "\n");
  }
  write_file_atomic(dir / "manifest.json", ensemble_manifest(ensemble).dump(2) + "\n");
}

WelEnsemble load_ensemble(const std::filesystem::path& dir) {
  try {
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    if (manifest.at("format") != "annobias.wel" ||
        manifest.at("version").get<int>() != kManifestVersion) {
      throw Error(Errc::kParseError, "unsupported ensemble manifest");
    }
    const auto& cfg = manifest.at("config");
    WelConfig config;
    config.k = cfg.at("k").get<std::size_t>();
    config.seed = cfg.at("seed").get<std::uint64_t>();
    config.learner = TrainConfig::from_json(cfg.at("learner"));
    config.scheme = parse_weight_scheme(cfg.at("weight_scheme").get<std::string>());
    config.temperature = cfg.at("temperature").get<double>();
    config.holdout.prefer_dev = cfg.at("holdout").at("prefer_dev").get<bool>();
    config.holdout.carve_fraction = cfg.at("holdout").at("carve_fraction").get<double>();

    std::optional<std::string> positive;
    if (!manifest.at("positive_label").is_null()) {
      positive = manifest.at("positive_label").get<std::string>();
    }
    LabelSet labels(manifest.at("label_set").get<std::vector<std::string>>(), positive);
    std::vector<std::shared_ptr<const Predictor>> predictors;
    for (const auto& file : manifest.at("learners")) {
      predictors.push_back(predictor_from_json(
          nlohmann::json::parse(read_file(dir / file.get<std::string>()))));
    }
    std::vector<LearnerScores> scores;
    for (const auto& s : manifest.at("holdout_scores")) {
      scores.push_back({s.at("f1").get<double>(), s.at("ce").get<double>(),
                        s.at("md").get<double>()});
    }
    WelEnsemble ensemble(std::move(labels), std::move(predictors),
                         manifest.at("weights").get<std::vector<double>>(),
                         config, std::move(scores),
                         manifest.at("variant_seeds").get<std::vector<std::uint64_t>>(),
                         manifest.at("degenerate_weights").get<bool>());
    ensemble.provenance = manifest.value("provenance", nlohmann::json::object());
    return ensemble;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("ensemble manifest: ") + e.what());
  }
}

}  // namespace annobias
