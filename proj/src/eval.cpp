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

#include "annobias/eval.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace annobias {

F1Averaging default_averaging(const LabelSet& labels) {
  return labels.size() == 2 && labels.positive() ? F1Averaging::kBinary
                                                 : F1Averaging::kMicro;
}

std::map<std::string, std::size_t> majority_gold(const AnnotatedDataset& dataset,
                                                 TieBreak rule) {
  dataset.require_categorical();
  std::map<std::string, std::size_t> gold;
  for (const Instance& inst : dataset.instances()) {
    if (inst.annotations.empty()) continue;
    gold.emplace(inst.id, majority_label(inst, dataset.label_set(), rule));
  }
  return gold;
}

F1Result f1_score(const PredictionSet& predictions,
                  const std::map<std::string, std::size_t>& gold,
                  std::size_t num_labels, F1Averaging averaging,
                  std::size_t positive_label, TieBreak rule) {
  std::vector<std::size_t> tp(num_labels, 0);
  std::vector<std::size_t> fp(num_labels, 0);
  std::vector<std::size_t> fn(num_labels, 0);
  std::vector<std::string> ids;
  for (const auto& [id, _] : gold) ids.push_back(id);
  require_coverage(predictions, ids);
  for (const auto& [id, truth] : gold) {
    if (truth >= num_labels) {
      throw Error(Errc::kUnknownLabel, "gold label out of range for '" + id + "'");
    }
    const std::size_t guess = predictions.at(id).argmax(rule);
    if (guess == truth) {
      ++tp[truth];
    } else {
      ++fp[guess];
      ++fn[truth];
    }
  }
  auto f1_of = [](std::size_t t, std::size_t p, std::size_t n) -> F1Result {
    const std::size_t denom = 2 * t + p + n;
    if (denom == 0) return {0.0, true};
    return {2.0 * static_cast<double>(t) / static_cast<double>(denom), false};
  };
  switch (averaging) {
    case F1Averaging::kBinary:
      if (positive_label >= num_labels) {
        throw Error(Errc::kUnknownLabel, "positive label out of range");
      }
      return f1_of(tp[positive_label], fp[positive_label], fn[positive_label]);
    case F1Averaging::kMicro: {
      std::size_t t = 0, p = 0, n = 0;
      for (std::size_t k = 0; k < num_labels; ++k) {
        t += tp[k];
        p += fp[k];
        n += fn[k];
      }
      return f1_of(t, p, n);
    }
    case F1Averaging::kMacro: {
      double sum = 0.0;
      std::size_t classes = 0;
      for (std::size_t k = 0; k < num_labels; ++k) {
        const F1Result r = f1_of(tp[k], fp[k], fn[k]);
        if (r.undefined) continue;  // label absent from gold and predictions
        sum += r.value;
        ++classes;
      }
      if (classes == 0) return {0.0, true};
      return {sum / static_cast<double>(classes), false};
    }
  }
  return {0.0, true};
}

double soft_cross_entropy(std::span<const double> target,
                          std::span<const double> predicted) {
  if (target.size() != predicted.size()) {
    throw Error(Errc::kDimensionMismatch, "cross-entropy length mismatch");
  }
  std::vector<double> q(predicted.size());
  double total = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = std::clamp(predicted[k], kCrossEntropyEpsilon,
                      1.0 - kCrossEntropyEpsilon);
    total += q[k];
  }
  double ce = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (target[k] > 0.0) ce -= target[k] * std::log(q[k] / total);
  }
  return ce;
}

namespace {

struct Compared {
  std::vector<const Instance*> instances;
  std::size_t excluded = 0;
};

Compared annotated(const PredictionSet& predictions,
                   const AnnotatedDataset& dataset) {
  dataset.require_categorical();
  Compared out;
  std::vector<std::string> ids;
  for (const Instance& inst : dataset.instances()) {
    if (inst.annotations.empty()) {
      ++out.excluded;
      continue;
    }
    out.instances.push_back(&inst);
    ids.push_back(inst.id);
  }
  require_coverage(predictions, ids);
  if (predictions.size() && predictions.num_labels() != dataset.label_set().size()) {
    throw Error(Errc::kDimensionMismatch,
                "predictions do not match the dataset label set");
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return kernels::ordered_sum(values) / static_cast<double>(values.size());
}

}  // namespace

std::vector<double> per_instance_cross_entropy(const PredictionSet& predictions,
                                               const AnnotatedDataset& dataset,
                                               Execution exec) {
  const Compared c = annotated(predictions, dataset);
  return kernels::map_items(
      c.instances.size(),
      [&](std::size_t i) {
        const SoftLabel p = empirical_soft_label(*c.instances[i], dataset.label_set());
        return soft_cross_entropy(p.probs(),
                                  predictions.at(c.instances[i]->id).probs());
      },
      exec);
}

std::vector<double> per_instance_manhattan(const PredictionSet& predictions,
                                           const AnnotatedDataset& dataset,
                                           Execution exec) {
  const Compared c = annotated(predictions, dataset);
  return kernels::map_items(
      c.instances.size(),
      [&](std::size_t i) {
        const SoftLabel p = empirical_soft_label(*c.instances[i], dataset.label_set());
        const SoftLabel& q = predictions.at(c.instances[i]->id);
        double sum = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) sum += std::abs(p[k] - q[k]);
        return sum;
      },
      exec);
}

double soft_cross_entropy(const PredictionSet& predictions,
                          const AnnotatedDataset& dataset, Execution exec) {
  return mean(per_instance_cross_entropy(predictions, dataset, exec));
}

double manhattan_distance(const PredictionSet& predictions,
                          const AnnotatedDataset& dataset, Execution exec) {
  return mean(per_instance_manhattan(predictions, dataset, exec));
}

EvalReport evaluate(const PredictionSet& predictions,
                    const AnnotatedDataset& dataset, F1Averaging averaging,
                    Execution exec) {
  const Compared c = annotated(predictions, dataset);
  EvalReport report;
  report.n = c.instances.size();
  report.n_excluded = c.excluded;
  const auto gold = majority_gold(dataset);
  const F1Result f1 =
      f1_score(predictions, gold, dataset.label_set().size(), averaging,
               dataset.label_set().positive().value_or(0));
  report.f1 = f1.value;
  report.f1_undefined = f1.undefined;
  report.ce = soft_cross_entropy(predictions, dataset, exec);
  report.md = manhattan_distance(predictions, dataset, exec);
  return report;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kInvalidArgument, "paired test needs equal lengths");
  }
  PairedTest out;
  out.n = a.size();
  if (out.n < 2) return out;
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double n = static_cast<double>(d.size());
  const double m = kernels::ordered_sum(d) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / (n - 1.0));
  out.mean_difference = m;
  if (sd == 0.0) {
    out.t_statistic = m == 0.0 ? 0.0 : std::copysign(INFINITY, m);
    out.p_value = m == 0.0 ? 1.0 : 0.0;
    out.p_greater = m > 0.0 ? 0.0 : 1.0;
    return out;
  }
  out.t_statistic = m / (sd / std::sqrt(n));
  const boost::math::students_t dist(n - 1.0);
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(
                          dist, std::abs(out.t_statistic)));
  out.p_greater = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
  return out;
}

}  // namespace annobias
