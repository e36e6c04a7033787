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

#include "annobias/agreement.hpp"

#include <string>

namespace annobias {

namespace {

const Annotation* annotation_by(const Instance& instance,
                                std::string_view annotator) {
  for (const Annotation& ann : instance.annotations) {
    if (ann.annotator_id == annotator) return &ann;
  }
  return nullptr;
}

}  // namespace

// --- PairedLabels -----------------------------------------------------------

PairedLabels::PairedLabels(std::size_t num_labels, std::vector<Pair> items)
    : num_labels_(num_labels), items_(std::move(items)) {
  for (const auto& [a, b] : items_) {
    if (a >= num_labels_ || b >= num_labels_) {
      throw Error(Errc::kUnknownLabel, "paired label out of range");
    }
  }
}

PairedLabels PairedLabels::from_dataset(const AnnotatedDataset& dataset,
                                        std::string_view first_annotator,
                                        std::string_view second_annotator,
                                        std::size_t* excluded) {
  dataset.require_categorical();
  std::vector<Pair> items;
  std::size_t skipped = 0;
  for (const Instance& inst : dataset.instances()) {
    const Annotation* a = annotation_by(inst, first_annotator);
    const Annotation* b = annotation_by(inst, second_annotator);
    if (a && b) {
      items.emplace_back(a->label(), b->label());
    } else {
      ++skipped;
    }
  }
  if (excluded) *excluded = skipped;
  return PairedLabels(dataset.label_set().size(), std::move(items));
}

// --- CountMatrix ------------------------------------------------------------

CountMatrix::CountMatrix(std::size_t num_labels, std::uint32_t raters,
                         std::vector<std::uint32_t> counts)
    : num_labels_(num_labels), raters_(raters), counts_(std::move(counts)) {
  if (num_labels_ == 0 || counts_.size() % num_labels_ != 0) {
    throw Error(Errc::kInvalidArgument, "count matrix shape mismatch");
  }
  if (raters_ < 2) {
    throw Error(Errc::kInvalidArgument, "Fleiss' kappa needs M >= 2 raters");
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    std::uint64_t sum = 0;
    for (std::uint32_t n : row(i)) sum += n;
    if (sum != raters_) {
      throw Error(Errc::kRowSumMismatch,
                  "row " + std::to_string(i) + " sums to " +
                      std::to_string(sum) + ", expected " +
                      std::to_string(raters_));
    }
  }
}

CountMatrix CountMatrix::from_dataset(const AnnotatedDataset& dataset,
                                      std::size_t* excluded) {
  dataset.require_categorical();
  const std::size_t k = dataset.label_set().size();
  const auto [min_ann, max_ann] = dataset.annotator_range();
  std::vector<std::uint32_t> counts;
  std::size_t skipped = 0;
  for (const Instance& inst : dataset.instances()) {
    if (inst.annotations.empty()) {
      ++skipped;
      continue;
    }
    for (std::size_t c : label_counts(inst, dataset.label_set())) {
      counts.push_back(static_cast<std::uint32_t>(c));
    }
  }
  if (excluded) *excluded = skipped;
  if (min_ann != max_ann) {
    throw Error(Errc::kRowSumMismatch,
                "annotations per instance vary between " +
                    std::to_string(min_ann) + " and " +
                    std::to_string(max_ann) +
                    "; Fleiss' kappa needs a constant M");
  }
  return CountMatrix(k, static_cast<std::uint32_t>(max_ann), std::move(counts));
}

// --- ReliabilityData --------------------------------------------------------

ReliabilityData::ReliabilityData(std::size_t num_labels,
                                 std::vector<std::vector<std::size_t>> items)
    : num_labels_(num_labels) {
  offsets_.reserve(items.size() + 1);
  offsets_.push_back(0);
  for (const auto& item : items) {
    for (std::size_t v : item) {
      if (v >= num_labels_) {
        throw Error(Errc::kUnknownLabel, "reliability value out of range");
      }
      values_.push_back(v);
    }
    offsets_.push_back(values_.size());
  }
}

ReliabilityData ReliabilityData::from_dataset(const AnnotatedDataset& dataset) {
  dataset.require_categorical();
  std::vector<std::vector<std::size_t>> items;
  items.reserve(dataset.size());
  for (const Instance& inst : dataset.instances()) {
    std::vector<std::size_t> values;
    values.reserve(inst.annotations.size());
    for (const Annotation& ann : inst.annotations) values.push_back(ann.label());
    items.push_back(std::move(values));
  }
  return ReliabilityData(dataset.label_set().size(), std::move(items));
}

// --- coefficients -----------------------------------------------------------

AgreementReport cohen_kappa(const PairedLabels& pairs, Execution exec) {
  const auto& items = pairs.items();
  if (items.empty()) {
    throw Error(Errc::kEmptyInput, "Cohen's kappa needs at least one pair");
  }
  const std::size_t k = pairs.num_labels();
  std::vector<std::size_t> first(items.size());
  std::vector<std::size_t> second(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    first[i] = items[i].first;
    second[i] = items[i].second;
  }
  const auto mismatch = kernels::mismatch_tallies(first, second, k, exec);
  // Per-annotator marginals as integer tallies.
  std::vector<std::uint64_t> m1(k, 0);
  std::vector<std::uint64_t> m2(k, 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++m1[first[i]];
    ++m2[second[i]];
  }
  const auto n = static_cast<std::uint64_t>(items.size());
  std::uint64_t marginal_products = 0;
  for (std::size_t c = 0; c < k; ++c) marginal_products += m1[c] * m2[c];

  AgreementReport report;
  report.n_items = items.size();
  report.observed =
      static_cast<double>(n - mismatch.mismatches) / static_cast<double>(n);
  report.expected = static_cast<double>(marginal_products) /
                    (static_cast<double>(n) * static_cast<double>(n));
  if (marginal_products == n * n) {
    report.degenerate = true;
    report.coefficient = 1.0;
    return report;
  }
  report.coefficient =
      (report.observed - report.expected) / (1.0 - report.expected);
  return report;
}

AgreementReport fleiss_kappa(const CountMatrix& counts, Execution exec) {
  const std::size_t rows = counts.rows();
  if (rows == 0) {
    throw Error(Errc::kEmptyInput, "Fleiss' kappa needs at least one item");
  }
  const auto tallies =
      kernels::fleiss_tallies(counts.counts(), counts.num_labels(), exec);
  const double n = static_cast<double>(rows);
  const double m = static_cast<double>(counts.raters());
  const double total = n * m;

  std::uint64_t squared_totals = 0;
  for (std::uint64_t t : tallies.label_totals) squared_totals += t * t;

  AgreementReport report;
  report.n_items = rows;
  report.observed =
      static_cast<double>(tallies.agreeing_pairs) / (n * m * (m - 1.0));
  report.expected = static_cast<double>(squared_totals) / (total * total);
  const auto total_int = static_cast<std::uint64_t>(rows) * counts.raters();
  if (squared_totals == total_int * total_int) {
    report.degenerate = true;
    report.coefficient = 1.0;
    return report;
  }
  report.coefficient =
      (report.observed - report.expected) / (1.0 - report.expected);
  return report;
}

namespace {

struct CoincidenceSums {
  // sum_{c != k} o_ck
  double off_diagonal = 0.0;
  // sum_{c != k} n_c n_k
  double expected_pairs = 0.0;
  // n = sum_c n_c
  double total_values = 0.0;
  kernels::CoincidenceTallies tallies;
};

CoincidenceSums coincidence_sums(const ReliabilityData& data, Execution exec) {
  CoincidenceSums sums;
  sums.tallies = kernels::coincidence_tallies(data.offsets(), data.values(),
                                              data.num_labels(), exec);
  const std::size_t k = data.num_labels();
  const auto& by_size = sums.tallies.pairs_by_size;
  for (std::size_t m = 2; m < by_size.size(); ++m) {
    if (by_size[m].empty()) continue;
    std::uint64_t off = 0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < k; ++j) {
        if (c != j) off += by_size[m][c * k + j];
      }
    }
    sums.off_diagonal += static_cast<double>(off) / static_cast<double>(m - 1);
  }
  std::uint64_t total = 0;
  std::uint64_t squares = 0;
  for (std::uint64_t nc : sums.tallies.value_totals) {
    total += nc;
    squares += nc * nc;
  }
  sums.total_values = static_cast<double>(total);
  sums.expected_pairs = static_cast<double>(total * total - squares);
  return sums;
}

}  // namespace

std::vector<double> coincidence_matrix(const ReliabilityData& data,
                                       Execution exec) {
  const auto tallies = kernels::coincidence_tallies(
      data.offsets(), data.values(), data.num_labels(), exec);
  const std::size_t k = data.num_labels();
  std::vector<double> o(k * k, 0.0);
  for (std::size_t m = 2; m < tallies.pairs_by_size.size(); ++m) {
    const auto& bucket = tallies.pairs_by_size[m];
    if (bucket.empty()) continue;
    for (std::size_t i = 0; i < k * k; ++i) {
      o[i] += static_cast<double>(bucket[i]) / static_cast<double>(m - 1);
    }
  }
  return o;
}

AgreementReport krippendorff_alpha(const ReliabilityData& data,
                                   Execution exec) {
  const CoincidenceSums sums = coincidence_sums(data, exec);
  if (sums.tallies.pairable_items == 0) {
    throw Error(Errc::kNoPairableValues,
                "no item carries two or more values");
  }
  AgreementReport report;
  report.n_items = sums.tallies.pairable_items;
  report.n_excluded = sums.tallies.skipped_items;
  const double n = sums.total_values;
  report.observed = sums.off_diagonal / n;
  report.expected = sums.expected_pairs / (n * (n - 1.0));
  if (sums.expected_pairs == 0.0) {
    report.degenerate = true;
    report.coefficient = 1.0;
    return report;
  }
  report.coefficient =
      1.0 - (n - 1.0) * sums.off_diagonal / sums.expected_pairs;
  return report;
}

AgreementReport krippendorff_alpha(const AnnotatedDataset& dataset,
                                   Execution exec) {
  return krippendorff_alpha(ReliabilityData::from_dataset(dataset), exec);
}

}  // namespace annobias
