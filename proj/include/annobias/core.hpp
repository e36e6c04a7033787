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

// Shared domain model: label sets, annotations, datasets and soft labels.
// Everything here is immutable once constructed.

#ifndef ANNOBIAS_CORE_HPP_
#define ANNOBIAS_CORE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "annobias/error.hpp"

namespace annobias {

// Ordered set of categorical labels. The order fixes the component order of
// every probability vector in the library.
class LabelSet {
 public:
  // Throws kInvalidArgument on fewer than two labels or duplicates. The
  // optional positive label must be a member.
  explicit LabelSet(std::vector<std::string> labels,
                    std::optional<std::string> positive = std::nullopt);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& name(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view label) const;
  // Throws kUnknownLabel.
  std::size_t require_index(std::string_view label) const;

  // Positive class used by binary F1 and the demographic gap. Defaults to the
  // last label when the set is binary and nothing was declared.
  std::optional<std::size_t> positive() const noexcept { return positive_; }

  bool operator==(const LabelSet& other) const {
    return labels_ == other.labels_ && positive_ == other.positive_;
  }

 private:
  std::vector<std::string> labels_;
  std::optional<std::size_t> positive_;
};

enum class TieBreak { kFirstInLabelSetOrder, kLastInLabelSetOrder };

// Index of the largest value; ties resolved by `rule`.
std::size_t argmax(std::span<const double> values,
                   TieBreak rule = TieBreak::kFirstInLabelSetOrder);

// One annotator's judgement: a categorical label index or a numeric score
// (ConvAbuse-style scales before binarization).
struct Annotation {
  std::string annotator_id;
  std::variant<std::size_t, double> value;

  static Annotation categorical(std::string annotator, std::size_t label) {
    return {std::move(annotator), label};
  }
  static Annotation numeric(std::string annotator, double score) {
    return {std::move(annotator), score};
  }

  bool is_numeric() const noexcept {
    return std::holds_alternative<double>(value);
  }
  // Throws kNumericMode on numeric annotations.
  std::size_t label() const;
  // Categorical labels are returned as their index.
  double score() const;

  bool operator==(const Annotation&) const = default;
};

enum class Split { kUnspecified, kTrain, kDev, kTest };

std::string_view split_name(Split split);
// Throws kUnknownSplit.
Split parse_split(std::string_view name);

struct Instance {
  std::string id;
  std::string text;
  std::string language;
  Split split = Split::kUnspecified;
  std::vector<Annotation> annotations;
  // Guideline-refinement round; present iff the dataset is iterative.
  std::optional<int> iteration;
  // Opaque JSON object carried through ingest unchanged ("" when absent).
  std::string meta_json;

  bool operator==(const Instance&) const = default;
};

struct AnnotatorProfile {
  std::string annotator_id;
  // dimension name ("culture", "gender", ...) -> group identifier
  std::map<std::string, std::string> groups;

  bool operator==(const AnnotatorProfile&) const = default;
};

enum class LabelMode { kCategorical, kNumeric };

class AnnotatedDataset {
 public:
  // Validates every invariant of the model:
  //  - unique instance ids (kDuplicateId)
  //  - at most one annotation per annotator per instance (kDuplicateAnnotator)
  //  - annotations match `mode` (kNumericMode) and the label set
  //    (kUnknownLabel)
  //  - iteration present on all instances or on none (kInvalidArgument)
  //  - unique profile ids (kDuplicateId)
  AnnotatedDataset(LabelSet label_set, std::vector<Instance> instances,
                   std::vector<AnnotatorProfile> profiles = {},
                   LabelMode mode = LabelMode::kCategorical);

  const LabelSet& label_set() const noexcept { return label_set_; }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const std::vector<AnnotatorProfile>& profiles() const noexcept {
    return profiles_;
  }
  LabelMode mode() const noexcept { return mode_; }
  bool iterative() const noexcept { return iterative_; }
  std::size_t size() const noexcept { return instances_.size(); }

  // Min/max annotations per instance over instances with at least one
  // annotation; (0, 0) when no instance is annotated.
  std::pair<std::size_t, std::size_t> annotator_range() const noexcept {
    return annotator_range_;
  }
  std::size_t unannotated_count() const noexcept { return unannotated_; }
  // Distinct annotator ids across all instances.
  std::size_t annotator_count() const noexcept { return annotator_count_; }

  const Instance* find(std::string_view id) const;
  const AnnotatorProfile* profile(std::string_view annotator_id) const;

  bool has_split(Split split) const;
  AnnotatedDataset subset(Split split) const;
  AnnotatedDataset subset(std::span<const std::size_t> indices) const;
  AnnotatedDataset with_profiles(std::vector<AnnotatorProfile> profiles) const;

  // Throws kNumericMode unless categorical.
  void require_categorical() const;

 private:
  LabelSet label_set_;
  std::vector<Instance> instances_;
  std::vector<AnnotatorProfile> profiles_;
  LabelMode mode_;
  bool iterative_ = false;
  std::pair<std::size_t, std::size_t> annotator_range_{0, 0};
  std::size_t unannotated_ = 0;
  std::size_t annotator_count_ = 0;
  std::unordered_map<std::string, std::size_t> instance_index_;
  std::unordered_map<std::string, std::size_t> profile_index_;
};

// Probability distribution over a LabelSet.
class SoftLabel {
 public:
  // Tolerance on |sum - 1| accepted by from_probs.
  static constexpr double kSumTolerance = 1e-9;

  // Throws kInvalidArgument unless every component is in [0, 1] and the
  // components sum to one within kSumTolerance.
  static SoftLabel from_probs(std::vector<double> probs);
  static SoftLabel one_hot(std::size_t size, std::size_t index);
  static SoftLabel uniform(std::size_t size);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  std::size_t argmax(TieBreak rule = TieBreak::kFirstInLabelSetOrder) const {
    return annobias::argmax(probs_, rule);
  }

  bool operator==(const SoftLabel&) const = default;

 private:
  explicit SoftLabel(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Per-label annotation counts. Throws kNumericMode on numeric annotations
// and kUnknownLabel on out-of-range indices.
std::vector<std::size_t> label_counts(const Instance& instance,
                                      const LabelSet& label_set);

// probs[k] = (# annotations with label k) / (# annotations).
// Throws kEmptyAnnotations, kNumericMode.
SoftLabel empirical_soft_label(const Instance& instance,
                               const LabelSet& label_set);

// Label with the highest count. Throws kEmptyAnnotations, kNumericMode.
std::size_t majority_label(const Instance& instance, const LabelSet& label_set,
                           TieBreak rule = TieBreak::kFirstInLabelSetOrder);

}  // namespace annobias

#endif  // ANNOBIAS_CORE_HPP_
