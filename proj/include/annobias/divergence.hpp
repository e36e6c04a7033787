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

// Disagreement between predictors, and between a predictor and the human
// annotation distribution.

#ifndef ANNOBIAS_DIVERGENCE_HPP_
#define ANNOBIAS_DIVERGENCE_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "annobias/core.hpp"
#include "annobias/kernels.hpp"

namespace annobias {

// Probabilistic outputs of one model, keyed by instance id.
class PredictionSet {
 public:
  explicit PredictionSet(std::string model_id,
                         std::optional<std::string> language = std::nullopt)
      : model_id_(std::move(model_id)), language_(std::move(language)) {}

  // Throws kDuplicateId on a repeated id and kDimensionMismatch when the
  // vector length differs from earlier entries.
  void add(std::string instance_id, SoftLabel output);

  const std::string& model_id() const noexcept { return model_id_; }
  const std::optional<std::string>& language() const noexcept {
    return language_;
  }
  const std::map<std::string, SoftLabel>& outputs() const noexcept {
    return outputs_;
  }
  std::size_t size() const noexcept { return outputs_.size(); }
  // 0 while empty.
  std::size_t num_labels() const noexcept { return num_labels_; }
  const SoftLabel* find(const std::string& instance_id) const;
  // Throws kCoverageGap.
  const SoftLabel& at(const std::string& instance_id) const;
  std::vector<std::string> ids() const;

 private:
  std::string model_id_;
  std::optional<std::string> language_;
  std::map<std::string, SoftLabel> outputs_;
  std::size_t num_labels_ = 0;
};

// Throws kCoverageGap naming (up to a handful of) the ids missing from `set`.
void require_coverage(const PredictionSet& set,
                      std::span<const std::string> ids);

struct DivergenceReport {
  // DR in [0, 1] or the delta (>= 0).
  double value = 0.0;
  std::size_t n_compared = 0;
  std::size_t n_excluded = 0;
  // Disagreements keyed by the first predictor's hard label (DR only).
  std::vector<std::size_t> per_label_disagreements;
};

// Fraction of `over` where the argmax labels differ.
DivergenceReport disagreement_rate(const PredictionSet& first,
                                   const PredictionSet& second,
                                   std::span<const std::string> over,
                                   TieBreak rule = TieBreak::kFirstInLabelSetOrder,
                                   Execution exec = Execution::kParallel);
// Over every id of `first`.
DivergenceReport disagreement_rate(const PredictionSet& first,
                                   const PredictionSet& second,
                                   TieBreak rule = TieBreak::kFirstInLabelSetOrder,
                                   Execution exec = Execution::kParallel);

enum class DeltaForm {
  // Mean absolute componentwise difference of the two distributions.
  kVector,
  // |f_pos(x) - y_pos(x)| on the positive-class probability only.
  kPositiveClass,
};

// Mean over annotated instances of |f(x) - y_human(x)|, with y_human the
// empirical soft label. Unannotated instances are excluded and counted.
DivergenceReport model_human_delta(const PredictionSet& predictions,
                                   const AnnotatedDataset& dataset,
                                   DeltaForm form = DeltaForm::kVector,
                                   Execution exec = Execution::kParallel);

using InstancePairing = std::vector<std::pair<std::string, std::string>>;

// DR between two language-specific predictors over aligned instance pairs.
// Throws kPairingNotBijective when an id repeats on either side or is
// missing from its predictor.
DivergenceReport multilingual_disagreement(
    const PredictionSet& first_language, const PredictionSet& second_language,
    const InstancePairing& pairing,
    TieBreak rule = TieBreak::kFirstInLabelSetOrder,
    Execution exec = Execution::kParallel);

// JSON Lines: {"instance_id": str, "model_id": str, "probs": [real, ...]}.
// All records of one file share the model id.
PredictionSet read_prediction_set(std::istream& in);
void write_prediction_set(std::ostream& out, const PredictionSet& set);

// CSV with header `first_id,second_id`.
InstancePairing read_pairing_csv(std::istream& in);

}  // namespace annobias

#endif  // ANNOBIAS_DIVERGENCE_HPP_
