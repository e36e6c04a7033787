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

// Diagnostics driven by annotator metadata: demographic gap, annotator pool
// entropy, disagreement variance per guideline iteration and the distance
// between group embeddings.

#ifndef ANNOBIAS_METADATA_HPP_
#define ANNOBIAS_METADATA_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "annobias/core.hpp"

namespace annobias {

// A group within one metadata dimension, e.g. {"culture", "levantine"}.
struct GroupRef {
  std::string dimension;
  std::string group;
};

struct GroupSlice {
  std::string group_id;
  // Ids of instances carrying at least one annotation by a group member,
  // in dataset order.
  std::vector<std::string> instance_ids;
  std::size_t annotation_count = 0;
};

// Throws kUnknownGroup when no annotation comes from the group.
GroupSlice group_slice(const AnnotatedDataset& dataset, const GroupRef& group);

enum class GapLevel {
  // Every annotation votes: group positive rate vs. global positive rate.
  kAnnotation,
  // Majority label per instance: rate over the group's instances vs. over
  // all annotated instances.
  kAggregated,
};

// group mean - global mean, before taking the absolute value.
double signed_demographic_gap(const AnnotatedDataset& dataset,
                              const GroupRef& group, std::size_t positive_label,
                              GapLevel level = GapLevel::kAnnotation);

// G(a) in [0, 1]. Throws kUnknownGroup, kUnknownLabel, kNumericMode.
double demographic_gap(const AnnotatedDataset& dataset, const GroupRef& group,
                       std::size_t positive_label,
                       GapLevel level = GapLevel::kAnnotation);

// Share of annotations contributed by each group of `dimension`. Annotations
// whose annotator has no value for the dimension are left out (and counted
// in `unassigned` when given). Throws kDimensionMissing when nothing remains.
std::map<std::string, double> group_shares(const AnnotatedDataset& dataset,
                                           const std::string& dimension,
                                           std::size_t* unassigned = nullptr);

enum class LogBase { kNatural, kTwo };

// H(A) = -sum_a p(a) log p(a), 0 log 0 := 0.
double pool_entropy(const AnnotatedDataset& dataset,
                    const std::string& dimension,
                    LogBase base = LogBase::kNatural);

// Distinct iteration indices in ascending order. Throws kNotIterative.
std::vector<int> iterations(const AnnotatedDataset& dataset);

// Mean over annotated items of iteration t of the per-item label spread:
// population variance for numeric scores, Gini impurity 1 - sum_k p_k^2 for
// categorical labels. Throws kNotIterative, kEmptyIteration.
double iteration_variance(const AnnotatedDataset& dataset, int iteration);

class CulturalEmbedding {
 public:
  // Throws kInvalidArgument on an empty vector or non-finite components.
  explicit CulturalEmbedding(std::vector<double> vector);

  const std::vector<double>& vector() const noexcept { return vector_; }
  std::size_t dimension() const noexcept { return vector_.size(); }

 private:
  std::vector<double> vector_;
};

// Euclidean distance. Throws kDimensionMismatch.
double cultural_distance(const CulturalEmbedding& a,
                         const CulturalEmbedding& b);

// Stand-in embedding: the group's empirical label distribution over the
// label set. Throws kUnknownGroup.
CulturalEmbedding default_group_embedding(const AnnotatedDataset& dataset,
                                          const GroupRef& group);

// CSV with header `annotator_id,dimension,group`, one row per
// (annotator, dimension).
std::vector<AnnotatorProfile> read_profiles_csv(std::istream& in);
void write_profiles_csv(std::ostream& out,
                        const std::vector<AnnotatorProfile>& profiles);

// JSON Lines of {"group": str, "vector": [real, ...]}.
std::map<std::string, CulturalEmbedding> read_embeddings(std::istream& in);

}  // namespace annobias

#endif  // ANNOBIAS_METADATA_HPP_
