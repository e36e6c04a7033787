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

#include "annobias/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace annobias {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kEmptyAnnotations: return "EmptyAnnotations";
    case Errc::kNumericMode: return "NumericMode";
    case Errc::kUnknownLabel: return "UnknownLabel";
    case Errc::kDuplicateAnnotator: return "DuplicateAnnotator";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kRowSumMismatch: return "RowSumMismatch";
    case Errc::kNoPairableValues: return "NoPairableValues";
    case Errc::kCoverageGap: return "CoverageGap";
    case Errc::kPairingNotBijective: return "PairingNotBijective";
    case Errc::kUnknownGroup: return "UnknownGroup";
    case Errc::kDimensionMissing: return "DimensionMissing";
    case Errc::kNotIterative: return "NotIterative";
    case Errc::kEmptyIteration: return "EmptyIteration";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyTraining: return "EmptyTraining";
    case Errc::kMissingBiasComponent: return "MissingBiasComponent";
    case Errc::kParseError: return "ParseError";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kUnknownSplit: return "UnknownSplit";
    case Errc::kScoreOutOfRange: return "ScoreOutOfRange";
    case Errc::kEmptyDialogue: return "EmptyDialogue";
    case Errc::kIo: return "Io";
    case Errc::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

// --- LabelSet ---------------------------------------------------------------

LabelSet::LabelSet(std::vector<std::string> labels,
                   std::optional<std::string> positive)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(Errc::kInvalidArgument, "a label set needs at least 2 labels");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw Error(Errc::kInvalidArgument, "duplicate label '" + label + "'");
    }
  }
  if (positive) {
    positive_ = require_index(*positive);
  } else if (labels_.size() == 2) {
    positive_ = 1;
  }
}

std::optional<std::size_t> LabelSet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabelSet::require_index(std::string_view label) const {
  auto index = index_of(label);
  if (!index) {
    throw Error(Errc::kUnknownLabel,
                "label '" + std::string(label) + "' is not in the label set");
  }
  return *index;
}

std::size_t argmax(std::span<const double> values, TieBreak rule) {
  if (values.empty()) {
    throw Error(Errc::kInvalidArgument, "argmax of an empty vector");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const bool better = rule == TieBreak::kFirstInLabelSetOrder
                            ? values[k] > values[best]
                            : values[k] >= values[best];
    if (better) best = k;
  }
  return best;
}

// --- Annotation / Split -----------------------------------------------------

std::size_t Annotation::label() const {
  if (const auto* label = std::get_if<std::size_t>(&value)) return *label;
  throw Error(Errc::kNumericMode, "annotation by '" + annotator_id +
                                      "' is a numeric score, not a label");
}

double Annotation::score() const {
  if (const auto* score = std::get_if<double>(&value)) return *score;
  return static_cast<double>(std::get<std::size_t>(value));
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kUnspecified: break;
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name.empty()) return Split::kUnspecified;
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw Error(Errc::kUnknownSplit, "unknown split '" + std::string(name) + "'");
}

// --- AnnotatedDataset -------------------------------------------------------

AnnotatedDataset::AnnotatedDataset(LabelSet label_set,
                                   std::vector<Instance> instances,
                                   std::vector<AnnotatorProfile> profiles,
                                   LabelMode mode)
    : label_set_(std::move(label_set)),
      instances_(std::move(instances)),
      profiles_(std::move(profiles)),
      mode_(mode) {
  instance_index_.reserve(instances_.size());
  std::unordered_set<std::string> annotators;
  std::size_t min_ann = 0;
  std::size_t max_ann = 0;
  bool any_annotated = false;
  std::size_t with_iteration = 0;

  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const Instance& inst = instances_[i];
    if (!instance_index_.emplace(inst.id, i).second) {
      throw Error(Errc::kDuplicateId, "duplicate instance id '" + inst.id + "'");
    }
    if (inst.iteration) {
      if (*inst.iteration < 0) {
        throw Error(Errc::kInvalidArgument,
                    "negative iteration on instance '" + inst.id + "'");
      }
      ++with_iteration;
    }
    std::unordered_set<std::string_view> seen;
    for (const Annotation& ann : inst.annotations) {
      if (!seen.insert(ann.annotator_id).second) {
        throw Error(Errc::kDuplicateAnnotator,
                    "annotator '" + ann.annotator_id +
                        "' labels instance '" + inst.id + "' twice");
      }
      if (ann.is_numeric() != (mode_ == LabelMode::kNumeric)) {
        throw Error(Errc::kNumericMode,
                    "annotation on instance '" + inst.id +
                        "' does not match the dataset label mode");
      }
      if (!ann.is_numeric() && ann.label() >= label_set_.size()) {
        throw Error(Errc::kUnknownLabel,
                    "label index out of range on instance '" + inst.id + "'");
      }
      if (ann.is_numeric() && !std::isfinite(ann.score())) {
        throw Error(Errc::kInvalidArgument,
                    "non-finite score on instance '" + inst.id + "'");
      }
      annotators.insert(ann.annotator_id);
    }
    const std::size_t m = inst.annotations.size();
    if (m == 0) {
      ++unannotated_;
    } else if (!any_annotated) {
      min_ann = max_ann = m;
      any_annotated = true;
    } else {
      min_ann = std::min(min_ann, m);
      max_ann = std::max(max_ann, m);
    }
  }
  if (with_iteration != 0 && with_iteration != instances_.size()) {
    throw Error(Errc::kInvalidArgument,
                "iteration must be present on every instance or on none");
  }
  iterative_ = with_iteration != 0;
  annotator_range_ = {min_ann, max_ann};
  annotator_count_ = annotators.size();

  for (std::size_t p = 0; p < profiles_.size(); ++p) {
    if (!profile_index_.emplace(profiles_[p].annotator_id, p).second) {
      throw Error(Errc::kDuplicateId, "duplicate annotator profile '" +
                                          profiles_[p].annotator_id + "'");
    }
  }
}

const Instance* AnnotatedDataset::find(std::string_view id) const {
  auto it = instance_index_.find(std::string(id));
  return it == instance_index_.end() ? nullptr : &instances_[it->second];
}

const AnnotatorProfile* AnnotatedDataset::profile(
    std::string_view annotator_id) const {
  auto it = profile_index_.find(std::string(annotator_id));
  return it == profile_index_.end() ? nullptr : &profiles_[it->second];
}

bool AnnotatedDataset::has_split(Split split) const {
  return std::any_of(instances_.begin(), instances_.end(),
                     [split](const Instance& i) { return i.split == split; });
}

AnnotatedDataset AnnotatedDataset::subset(Split split) const {
  std::vector<Instance> picked;
  for (const Instance& inst : instances_) {
    if (inst.split == split) picked.push_back(inst);
  }
  return AnnotatedDataset(label_set_, std::move(picked), profiles_, mode_);
}

AnnotatedDataset AnnotatedDataset::subset(
    std::span<const std::size_t> indices) const {
  std::vector<Instance> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(instances_.at(i));
  return AnnotatedDataset(label_set_, std::move(picked), profiles_, mode_);
}

AnnotatedDataset AnnotatedDataset::with_profiles(
    std::vector<AnnotatorProfile> profiles) const {
  return AnnotatedDataset(label_set_, instances_, std::move(profiles), mode_);
}

void AnnotatedDataset::require_categorical() const {
  if (mode_ != LabelMode::kCategorical) {
    throw Error(Errc::kNumericMode,
                "dataset carries numeric scores; binarize it first");
  }
}

// --- SoftLabel --------------------------------------------------------------

SoftLabel SoftLabel::from_probs(std::vector<double> probs) {
  if (probs.empty()) {
    throw Error(Errc::kInvalidArgument, "empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::kInvalidArgument,
                  "probability component outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(Errc::kInvalidArgument, "probabilities do not sum to 1");
  }
  return SoftLabel(std::move(probs));
}

SoftLabel SoftLabel::one_hot(std::size_t size, std::size_t index) {
  std::vector<double> probs(size, 0.0);
  probs.at(index) = 1.0;
  return SoftLabel(std::move(probs));
}

SoftLabel SoftLabel::uniform(std::size_t size) {
  if (size == 0) throw Error(Errc::kInvalidArgument, "empty distribution");
  return SoftLabel(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

// --- label algebra ----------------------------------------------------------

std::vector<std::size_t> label_counts(const Instance& instance,
                                      const LabelSet& label_set) {
  std::vector<std::size_t> counts(label_set.size(), 0);
  for (const Annotation& ann : instance.annotations) {
    const std::size_t k = ann.label();
    if (k >= counts.size()) {
      throw Error(Errc::kUnknownLabel, "label index out of range");
    }
    ++counts[k];
  }
  return counts;
}

SoftLabel empirical_soft_label(const Instance& instance,
                               const LabelSet& label_set) {
  if (instance.annotations.empty()) {
    throw Error(Errc::kEmptyAnnotations,
                "instance '" + instance.id + "' has no annotations");
  }
  const auto counts = label_counts(instance, label_set);
  const double total = static_cast<double>(instance.annotations.size());
  std::vector<double> probs(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    probs[k] = static_cast<double>(counts[k]) / total;
  }
  return SoftLabel::from_probs(std::move(probs));
}

std::size_t majority_label(const Instance& instance, const LabelSet& label_set,
                           TieBreak rule) {
  if (instance.annotations.empty()) {
    throw Error(Errc::kEmptyAnnotations,
                "instance '" + instance.id + "' has no annotations");
  }
  const auto counts = label_counts(instance, label_set);
  std::vector<double> as_real(counts.begin(), counts.end());
  return argmax(as_real, rule);
}

}  // namespace annobias
