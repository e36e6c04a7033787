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

// Data-parallel inner loops shared by the metric modules.
//
// Every kernel has a serial reference path and an OpenMP path. Reductions
// over instances are either integer tallies (exact, order-independent) or a
// parallel per-item map followed by a serial sum in index order, so both
// paths return bit-identical results for any thread count.

#ifndef ANNOBIAS_KERNELS_HPP_
#define ANNOBIAS_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

namespace annobias {

enum class Execution { kSerial, kParallel };

namespace kernels {

// Sets the OpenMP team size used by kParallel kernels; 0 restores the
// runtime default.
void set_thread_count(int threads);
int thread_count();

// Tallies for Fleiss' kappa over a row-major N x K count matrix.
struct FleissTallies {
  // sum_i sum_k n_ik (n_ik - 1): ordered agreeing rater pairs.
  std::uint64_t agreeing_pairs = 0;
  // sum_i n_ik per label.
  std::vector<std::uint64_t> label_totals;
};

FleissTallies fleiss_tallies(std::span<const std::uint32_t> counts,
                             std::size_t num_labels, Execution exec);

// Tallies for the nominal coincidence matrix. Items are given in CSR form:
// values[offsets[u] .. offsets[u+1]) are the label indices assigned to
// item u. Items with fewer than two values are skipped.
struct CoincidenceTallies {
  // pairs_by_size[m][c * K + k]: ordered value pairs (c, k) from distinct
  // positions, summed over items that carry exactly m values. Dividing by
  // (m - 1) and summing over m yields the coincidence matrix.
  std::vector<std::vector<std::uint64_t>> pairs_by_size;
  // n_c: pairable values per label.
  std::vector<std::uint64_t> value_totals;
  std::uint64_t pairable_items = 0;
  std::uint64_t skipped_items = 0;
};

CoincidenceTallies coincidence_tallies(std::span<const std::size_t> offsets,
                                       std::span<const std::size_t> values,
                                       std::size_t num_labels, Execution exec);

// Exact count of positions where a[i] != b[i], plus a per-label breakdown
// keyed by a[i].
struct MismatchTallies {
  std::uint64_t mismatches = 0;
  std::vector<std::uint64_t> by_label;
};

MismatchTallies mismatch_tallies(std::span<const std::size_t> a,
                                 std::span<const std::size_t> b,
                                 std::size_t num_labels, Execution exec);

// Sum of values in index order.
double ordered_sum(std::span<const double> values);

// out[i] = fn(i) for i in [0, n). Under kParallel the items are spread over
// the OpenMP team; `fn` must be safe to call concurrently. The first
// exception (lowest index) is rethrown after the loop.
template <typename Fn>
std::vector<double> map_items(std::size_t n, Fn&& fn, Execution exec) {
  std::vector<double> out(n);
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace kernels
}  // namespace annobias

#endif  // ANNOBIAS_KERNELS_HPP_
