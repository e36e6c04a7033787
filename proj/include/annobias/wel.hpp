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

// Weak Ensemble Learning.
//
// K label variants are drawn from a multi-annotator dataset by sampling one
// annotator label per instance. One weak predictor is trained per variant,
// scored on a holdout split, and the scores are turned into convex weights.
// The ensemble prediction is the weighted sum of the predictors' soft
// outputs. Post-hoc debiasing subtracts a scaled bias component from any
// model output.
//
// Determinism: variant k draws from its own stream derive_seed(seed, k), so
// results do not depend on K, on the thread count used for training, or on
// the order in which learners finish.

#ifndef ANNOBIAS_WEL_HPP_
#define ANNOBIAS_WEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "annobias/core.hpp"
#include "annobias/divergence.hpp"
#include "annobias/eval.hpp"
#include "annobias/kernels.hpp"
#include "annobias/learners.hpp"

namespace annobias {

struct SampledLabel {
  std::size_t instance_index = 0;    // into dataset.instances()
  std::size_t annotation_index = 0;  // into instance.annotations
  std::size_t label = 0;
};

struct LabelVariant {
  std::size_t variant_index = 0;  // 1-based
  std::uint64_t seed_used = 0;
  std::vector<SampledLabel> labels;
};

struct VariantSample {
  std::vector<LabelVariant> variants;
  // Unannotated instances left out of every variant.
  std::size_t n_excluded = 0;
};

std::uint64_t variant_seed(std::uint64_t master_seed, std::size_t variant_index);

// K variants; per instance one annotation drawn uniformly from the variant's
// stream. Throws kInvalidArgument when K == 0 and kEmptyAnnotations when no
// instance is annotated.
VariantSample sample_label_variants(const AnnotatedDataset& dataset,
                                    std::size_t k, std::uint64_t master_seed,
                                    Execution exec = Execution::kParallel);

enum class WeightScheme {
  kF1Proportional,  // w_k ∝ F1_k
  kInverseCe,       // w_k ∝ 1 / (eps + CE_k)
  kInverseMd,       // w_k ∝ 1 / (eps + MD_k)
  kSoftmax,         // w_k ∝ exp(z_k / tau), z = standardized F1
};

std::string_view weight_scheme_name(WeightScheme scheme);
// Accepts the CLI spellings f1, inv-ce, inv-md, softmax.
WeightScheme parse_weight_scheme(std::string_view name);

inline constexpr double kInverseLossEpsilon = 1e-6;

struct WeightResult {
  std::vector<double> weights;
  // Scores carried no signal (all-zero F1); weights fell back to uniform.
  bool degenerate = false;
};

// Normalized weights from per-learner holdout scores (F1 for
// kF1Proportional/kSoftmax, the loss for the inverse schemes).
WeightResult compute_weights(std::span<const double> scores,
                             WeightScheme scheme, double temperature = 1.0);

struct HoldoutSpec {
  // Use the dev split when it has annotated instances.
  bool prefer_dev = true;
  // Otherwise carve this fraction out of the training pool.
  double carve_fraction = 0.15;
};

struct WelConfig {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  TrainConfig learner;
  WeightScheme scheme = WeightScheme::kF1Proportional;
  double temperature = 1.0;
  HoldoutSpec holdout;
  // Team size for per-learner training; 0 = OpenMP default.
  int threads = 0;

  nlohmann::json to_json() const;
};

// Train pool: annotated instances with split train or unspecified.
struct WeightingSplit {
  std::vector<std::size_t> train;    // indices into dataset.instances()
  std::vector<std::size_t> holdout;
  bool holdout_is_dev = false;
};

// Throws kEmptyTraining when either side ends up empty.
WeightingSplit weighting_split(const AnnotatedDataset& dataset,
                               const HoldoutSpec& spec, std::uint64_t seed);

struct LearnerScores {
  double f1 = 0.0;
  double ce = 0.0;
  double md = 0.0;
};

class WelEnsemble {
 public:
  WelEnsemble(LabelSet labels, std::vector<std::shared_ptr<const Predictor>> predictors,
              std::vector<double> weights, WelConfig config,
              std::vector<LearnerScores> holdout_scores,
              std::vector<std::uint64_t> variant_seeds,
              bool degenerate_weights = false);

  const LabelSet& label_set() const noexcept { return labels_; }
  const std::vector<std::shared_ptr<const Predictor>>& predictors() const noexcept {
    return predictors_;
  }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const WelConfig& config() const noexcept { return config_; }
  WeightScheme scheme() const noexcept { return config_.scheme; }
  const std::vector<LearnerScores>& holdout_scores() const noexcept {
    return holdout_scores_;
  }
  const std::vector<std::uint64_t>& variant_seeds() const noexcept {
    return variant_seeds_;
  }
  bool degenerate_weights() const noexcept { return degenerate_weights_; }

  // Free-form provenance copied into the manifest (holdout source, sizes,
  // dataset fingerprint, ...).
  nlohmann::json provenance = nlohmann::json::object();

 private:
  LabelSet labels_;
  std::vector<std::shared_ptr<const Predictor>> predictors_;
  std::vector<double> weights_;
  WelConfig config_;
  std::vector<LearnerScores> holdout_scores_;
  std::vector<std::uint64_t> variant_seeds_;
  bool degenerate_weights_;
};

// Trains the ensemble. Throws kEmptyTraining when the train pool or the
// holdout is empty.
WelEnsemble train_wel(const AnnotatedDataset& dataset, const WelConfig& config);

// y_hat = sum_k w_k f_k(text), summed in learner order.
SoftLabel wel_predict(const WelEnsemble& ensemble, std::string_view text);

// wel_predict for every instance of `dataset`.
PredictionSet predict_dataset(const WelEnsemble& ensemble,
                              const AnnotatedDataset& dataset,
                              const std::string& model_id,
                              Execution exec = Execution::kParallel);
PredictionSet predict_dataset(const Predictor& predictor,
                              const AnnotatedDataset& dataset,
                              const std::string& model_id,
                              Execution exec = Execution::kParallel);

// The same learners with weights recomputed from the stored holdout scores.
WelEnsemble reweight(const WelEnsemble& ensemble, WeightScheme scheme,
                     double temperature = 1.0);

struct GridPoint {
  WeightScheme scheme = WeightScheme::kF1Proportional;
  double temperature = 1.0;
  std::vector<double> weights;
  bool degenerate = false;
  EvalReport metrics;
};

// Evaluates every weighting scheme on `dataset`. Temperatures only affect
// the softmax scheme, which gets one point per temperature; the other
// schemes get one point each. Throws kInvalidArgument on an empty or
// non-positive temperature list.
std::vector<GridPoint> weight_grid(const WelEnsemble& ensemble,
                                   const AnnotatedDataset& dataset,
                                   std::span<const double> temperatures,
                                   F1Averaging averaging,
                                   Execution exec = Execution::kParallel);

// Single learner trained on majority-vote labels of the same train pool
// train_wel uses (the CE-only baseline).
std::unique_ptr<Predictor> train_majority_vote_baseline(
    const AnnotatedDataset& dataset, const WelConfig& config);

struct DebiasConfig {
  double lambda = 0.0;
  // instance id -> b(x), same length as the label set.
  std::map<std::string, std::vector<double>> bias;
};

struct DebiasResult {
  // f(x) - lambda * b(x) before projection.
  std::vector<double> raw;
  SoftLabel adjusted;
  // Every component of raw was <= 0; adjusted fell back to uniform.
  bool fallback_uniform = false;
};

// raw = f(x) - lambda * b(x); negative components are clamped to 0 and the
// result renormalized when raw is not already a distribution. Throws
// kMissingBiasComponent, kDimensionMismatch, kInvalidArgument (lambda < 0 or
// non-finite b).
DebiasResult debias_output(std::span<const double> prediction,
                           const DebiasConfig& config,
                           const std::string& instance_id);

// JSON Lines of {"instance_id": str, "bias": [real, ...]}.
std::map<std::string, std::vector<double>> read_bias_components(std::istream& in);

// Directory layout: manifest.json + learner_<k>.json per learner.
void save_ensemble(const WelEnsemble& ensemble, const std::filesystem::path& dir);
WelEnsemble load_ensemble(const std::filesystem::path& dir);
nlohmann::json ensemble_manifest(const WelEnsemble& ensemble);

}  // namespace annobias

#endif  // ANNOBIAS_WEL_HPP_
