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

// Chance-corrected inter-annotator agreement: Cohen's kappa, Fleiss' kappa
// and Krippendorff's alpha (nominal).
//
// When the chance term makes a coefficient 0/0 (every value identical) the
// coefficient is reported as 1.0 with `degenerate` set instead of throwing.

#ifndef ANNOBIAS_AGREEMENT_HPP_
#define ANNOBIAS_AGREEMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "annobias/core.hpp"
#include "annobias/kernels.hpp"

namespace annobias {

struct AgreementReport {
  double coefficient = 0.0;
  // p_o, p-bar or D_o depending on the coefficient.
  double observed = 0.0;
  // p_e, p-bar_e or D_e.
  double expected = 0.0;
  std::size_t n_items = 0;
  // Items dropped before computing (unpaired, unannotated, < 2 values).
  std::size_t n_excluded = 0;
  bool degenerate = false;
};

// Labels from exactly two annotators over their shared instances.
class PairedLabels {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  PairedLabels(std::size_t num_labels, std::vector<Pair> items);

  // Instances labelled by both annotators, in dataset order. `excluded`
  // receives the number of instances where at most one of them labelled.
  static PairedLabels from_dataset(const AnnotatedDataset& dataset,
                                   std::string_view first_annotator,
                                   std::string_view second_annotator,
                                   std::size_t* excluded = nullptr);

  std::size_t num_labels() const noexcept { return num_labels_; }
  const std::vector<Pair>& items() const noexcept { return items_; }

 private:
  std::size_t num_labels_;
  std::vector<Pair> items_;
};

// N x K matrix of per-instance label counts with a constant number of raters
// per row.
class CountMatrix {
 public:
  // `counts` is row-major. Throws kRowSumMismatch when a row does not sum to
  // `raters` and kInvalidArgument when raters < 2 or the shape is wrong.
  CountMatrix(std::size_t num_labels, std::uint32_t raters,
              std::vector<std::uint32_t> counts);

  // Rows from annotated instances. Every annotated instance must carry the
  // same number of annotations (kRowSumMismatch otherwise); unannotated
  // instances are skipped and counted in `excluded`.
  static CountMatrix from_dataset(const AnnotatedDataset& dataset,
                                  std::size_t* excluded = nullptr);

  std::size_t rows() const noexcept { return counts_.size() / num_labels_; }
  std::size_t num_labels() const noexcept { return num_labels_; }
  std::uint32_t raters() const noexcept { return raters_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::span<const std::uint32_t> row(std::size_t i) const {
    return std::span<const std::uint32_t>(counts_).subspan(i * num_labels_,
                                                           num_labels_);
  }

 private:
  std::size_t num_labels_;
  std::uint32_t raters_;
  std::vector<std::uint32_t> counts_;
};

// Values per item with missing annotations simply absent.
class ReliabilityData {
 public:
  ReliabilityData(std::size_t num_labels,
                  std::vector<std::vector<std::size_t>> items);

  static ReliabilityData from_dataset(const AnnotatedDataset& dataset);

  std::size_t num_labels() const noexcept { return num_labels_; }
  std::size_t items() const noexcept { return offsets_.size() - 1; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> values() const noexcept { return values_; }

 private:
  std::size_t num_labels_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> values_;
};

// kappa = (p_o - p_e) / (1 - p_e), with p_e from per-annotator marginals.
// Throws kEmptyInput.
AgreementReport cohen_kappa(const PairedLabels& pairs,
                            Execution exec = Execution::kParallel);

// Fleiss' kappa over a count matrix.
AgreementReport fleiss_kappa(const CountMatrix& counts,
                             Execution exec = Execution::kParallel);

// Nominal Krippendorff's alpha via the coincidence matrix, tolerating missing
// values. Throws kNoPairableValues when no item carries two values.
AgreementReport krippendorff_alpha(const ReliabilityData& data,
                                   Execution exec = Execution::kParallel);
AgreementReport krippendorff_alpha(const AnnotatedDataset& dataset,
                                   Execution exec = Execution::kParallel);

// The K x K coincidence matrix o_ck (row-major) built from the same tallies
// krippendorff_alpha uses.
std::vector<double> coincidence_matrix(const ReliabilityData& data,
                                       Execution exec = Execution::kParallel);

}  // namespace annobias

#endif  // ANNOBIAS_AGREEMENT_HPP_
