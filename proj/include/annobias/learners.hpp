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

// Weak text classifiers behind a common Predictor interface.
//
// Two learners ship with the library:
//  - majority-class: ignores the text and predicts the Laplace-smoothed
//    training label distribution;
//  - hashed-linear: multinomial logistic regression over signed, hashed
//    word (and optionally character) n-gram counts, trained by mini-batch
//    gradient descent on cross-entropy.
//
// External models plug in by writing a PredictionSet file instead.

#ifndef ANNOBIAS_LEARNERS_HPP_
#define ANNOBIAS_LEARNERS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "annobias/core.hpp"

namespace annobias {

enum class LearnerKind { kMajorityClass, kHashedLinear };

std::string_view learner_kind_name(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view name);

struct TrainConfig {
  std::uint64_t seed = 0;
  LearnerKind kind = LearnerKind::kHashedLinear;
  // Defaults: full-batch gradient descent run close to convergence.
  int epochs = 200;
  double learning_rate = 2.0;
  std::size_t hash_dims = std::size_t{1} << 14;
  int ngram_min = 1;
  int ngram_max = 2;
  // Character n-grams over code points; disabled when char_ngram_max == 0.
  int char_ngram_min = 0;
  int char_ngram_max = 0;
  // 0 means full batch.
  std::size_t batch_size = 0;
  double l2 = 2e-3;
  bool shuffle = true;
  // Additive smoothing of the majority-class distribution.
  double smoothing = 1.0;

  // Throws kInvalidArgument.
  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct LabeledText {
  std::string text;
  std::size_t label = 0;
};

// Sorted, deduplicated sparse vector.
struct SparseFeatures {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
};

// Lower-cased whitespace tokens (ASCII case folding only).
std::vector<std::string> tokenize(std::string_view text);

// Signed hashing trick: each n-gram adds +/-1 to bucket hash % hash_dims.
SparseFeatures hash_features(std::string_view text, const TrainConfig& config);

// 64-bit FNV-1a; stable across platforms, used for feature buckets.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual LearnerKind kind() const = 0;
  virtual std::size_t num_labels() const = 0;
  virtual SoftLabel predict_proba(std::string_view text) const = 0;
  // Self-describing dump; see FORMAT.md.
  virtual nlohmann::json to_json() const = 0;
};

class MajorityClassPredictor final : public Predictor {
 public:
  explicit MajorityClassPredictor(std::vector<double> distribution);

  LearnerKind kind() const override { return LearnerKind::kMajorityClass; }
  std::size_t num_labels() const override { return distribution_.size(); }
  SoftLabel predict_proba(std::string_view text) const override;
  nlohmann::json to_json() const override;

 private:
  SoftLabel distribution_;
};

class HashedLinearPredictor final : public Predictor {
 public:
  // `params` holds K x D weights (row-major) followed by K biases.
  HashedLinearPredictor(TrainConfig config, std::size_t num_labels,
                        std::vector<double> params,
                        std::vector<double> loss_history = {});

  LearnerKind kind() const override { return LearnerKind::kHashedLinear; }
  std::size_t num_labels() const override { return num_labels_; }
  SoftLabel predict_proba(std::string_view text) const override;
  SoftLabel predict_features(const SparseFeatures& features) const;
  nlohmann::json to_json() const override;

  const TrainConfig& config() const noexcept { return config_; }
  std::span<const double> params() const noexcept { return params_; }
  // Training objective after each epoch.
  const std::vector<double>& loss_history() const noexcept {
    return loss_history_;
  }

 private:
  TrainConfig config_;
  std::size_t num_labels_;
  std::vector<double> params_;
  std::vector<double> loss_history_;
};

// Softmax model helpers shared by training and the gradient check.
namespace linear {

std::size_t param_count(std::size_t num_labels, std::size_t dims);

// Class scores z_k = sum_j W[k, j] x_j + b_k.
std::vector<double> logits(std::span<const double> params,
                           std::size_t num_labels, std::size_t dims,
                           const SparseFeatures& x);

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> z);

// Per-example loss -sum_k t_k log p_k(x) + (l2 / 2) ||W||^2, and its
// gradient with respect to every parameter (written to `grad`).
double loss_and_gradient(std::span<const double> params,
                         std::size_t num_labels, std::size_t dims,
                         const SparseFeatures& x,
                         std::span<const double> target, double l2,
                         std::span<double> grad);

}  // namespace linear

// Trains a predictor over `num_labels` classes. Throws kEmptyTraining,
// kUnknownLabel and kInvalidArgument (bad config).
std::unique_ptr<Predictor> fit(const TrainConfig& config,
                               std::size_t num_labels,
                               std::span<const LabeledText> data);

// Inverse of Predictor::to_json. Throws kParseError.
std::unique_ptr<Predictor> predictor_from_json(const nlohmann::json& j);

}  // namespace annobias

#endif  // ANNOBIAS_LEARNERS_HPP_
