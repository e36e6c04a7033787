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

// Benchmark metrics for learning with disagreement: hard-label F1 against
// majority-vote gold, soft cross-entropy and Manhattan distance against the
// empirical annotation distribution.

#ifndef ANNOBIAS_EVAL_HPP_
#define ANNOBIAS_EVAL_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "annobias/core.hpp"
#include "annobias/divergence.hpp"
#include "annobias/kernels.hpp"

namespace annobias {

enum class F1Averaging { kBinary, kMicro, kMacro };

// Binary for two-label sets, micro otherwise.
F1Averaging default_averaging(const LabelSet& labels);

struct F1Result {
  double value = 0.0;
  // No positive prediction and no positive gold (or nothing to average):
  // value is 0 by convention.
  bool undefined = false;
};

// Majority-vote gold labels of annotated instances.
std::map<std::string, std::size_t> majority_gold(
    const AnnotatedDataset& dataset,
    TieBreak rule = TieBreak::kFirstInLabelSetOrder);

// Throws kCoverageGap when a gold id has no prediction.
F1Result f1_score(const PredictionSet& predictions,
                  const std::map<std::string, std::size_t>& gold,
                  std::size_t num_labels, F1Averaging averaging,
                  std::size_t positive_label = 1,
                  TieBreak rule = TieBreak::kFirstInLabelSetOrder);

// Clamp applied to predicted probabilities before taking logs.
inline constexpr double kCrossEntropyEpsilon = 1e-7;

// -sum_k p_k ln q_k with q clamped to [eps, 1 - eps] and renormalized.
double soft_cross_entropy(std::span<const double> target,
                          std::span<const double> predicted);

// Per annotated instance, in dataset order.
std::vector<double> per_instance_cross_entropy(
    const PredictionSet& predictions, const AnnotatedDataset& dataset,
    Execution exec = Execution::kParallel);
std::vector<double> per_instance_manhattan(const PredictionSet& predictions,
                                           const AnnotatedDataset& dataset,
                                           Execution exec = Execution::kParallel);

// Means of the per-instance values. Throw kCoverageGap.
double soft_cross_entropy(const PredictionSet& predictions,
                          const AnnotatedDataset& dataset,
                          Execution exec = Execution::kParallel);
double manhattan_distance(const PredictionSet& predictions,
                          const AnnotatedDataset& dataset,
                          Execution exec = Execution::kParallel);

struct EvalReport {
  double f1 = 0.0;
  bool f1_undefined = false;
  double ce = 0.0;
  double md = 0.0;
  std::size_t n = 0;
  std::size_t n_excluded = 0;
};

// F1 (declared positive label for binary averaging), CE and MD over the
// annotated instances of `dataset`.
EvalReport evaluate(const PredictionSet& predictions,
                    const AnnotatedDataset& dataset, F1Averaging averaging,
                    Execution exec = Execution::kParallel);

struct PairedTest {
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  // Two-sided.
  double p_value = 1.0;
  // One-sided against the alternative mean_difference > 0.
  double p_greater = 1.0;
  std::size_t n = 0;
};

// Paired Student t-test on a[i] - b[i].
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace annobias

#endif  // ANNOBIAS_EVAL_HPP_
