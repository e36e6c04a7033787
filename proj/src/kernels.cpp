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

#include "annobias/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>

#include "annobias/error.hpp"

namespace annobias::kernels {

namespace {

std::atomic<int> g_threads{0};

// Adds src into dst element-wise; sizes must match.
void accumulate(std::vector<std::uint64_t>& dst,
                const std::vector<std::uint64_t>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void fleiss_rows(std::span<const std::uint32_t> counts, std::size_t num_labels,
                 std::size_t begin, std::size_t end, FleissTallies& out) {
  for (std::size_t i = begin; i < end; ++i) {
    const std::uint32_t* row = counts.data() + i * num_labels;
    for (std::size_t k = 0; k < num_labels; ++k) {
      const std::uint64_t n = row[k];
      out.agreeing_pairs += n * (n == 0 ? 0 : n - 1);
      out.label_totals[k] += n;
    }
  }
}

void coincidence_items(std::span<const std::size_t> offsets,
                       std::span<const std::size_t> values,
                       std::size_t num_labels, std::size_t begin,
                       std::size_t end, std::vector<std::uint64_t>& row_counts,
                       CoincidenceTallies& out) {
  for (std::size_t u = begin; u < end; ++u) {
    const std::size_t lo = offsets[u];
    const std::size_t hi = offsets[u + 1];
    const std::size_t m = hi - lo;
    if (m < 2) {
      ++out.skipped_items;
      continue;
    }
    ++out.pairable_items;
    std::fill(row_counts.begin(), row_counts.end(), 0);
    for (std::size_t v = lo; v < hi; ++v) ++row_counts[values[v]];
    if (out.pairs_by_size.size() <= m) out.pairs_by_size.resize(m + 1);
    auto& bucket = out.pairs_by_size[m];
    if (bucket.empty()) bucket.assign(num_labels * num_labels, 0);
    for (std::size_t c = 0; c < num_labels; ++c) {
      const std::uint64_t nc = row_counts[c];
      if (nc == 0) continue;
      out.value_totals[c] += nc;
      for (std::size_t k = 0; k < num_labels; ++k) {
        const std::uint64_t nk = row_counts[k];
        bucket[c * num_labels + k] += c == k ? nc * (nc - 1) : nc * nk;
      }
    }
  }
}

void merge(CoincidenceTallies& dst, const CoincidenceTallies& src) {
  if (dst.pairs_by_size.size() < src.pairs_by_size.size()) {
    dst.pairs_by_size.resize(src.pairs_by_size.size());
  }
  for (std::size_t m = 0; m < src.pairs_by_size.size(); ++m) {
    if (src.pairs_by_size[m].empty()) continue;
    if (dst.pairs_by_size[m].empty()) {
      dst.pairs_by_size[m] = src.pairs_by_size[m];
    } else {
      accumulate(dst.pairs_by_size[m], src.pairs_by_size[m]);
    }
  }
  accumulate(dst.value_totals, src.value_totals);
  dst.pairable_items += src.pairable_items;
  dst.skipped_items += src.skipped_items;
}

// Static block partition of [0, n) for thread t of `teams`.
std::pair<std::size_t, std::size_t> block(std::size_t n, int t, int teams) {
  const std::size_t per = n / static_cast<std::size_t>(teams);
  const std::size_t extra = n % static_cast<std::size_t>(teams);
  const auto tt = static_cast<std::size_t>(t);
  const std::size_t begin = tt * per + std::min(tt, extra);
  return {begin, begin + per + (tt < extra ? 1 : 0)};
}

}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(threads, 0)); }

int thread_count() {
  const int configured = g_threads.load();
  return configured > 0 ? configured : omp_get_max_threads();
}

FleissTallies fleiss_tallies(std::span<const std::uint32_t> counts,
                             std::size_t num_labels, Execution exec) {
  if (num_labels == 0 || counts.size() % num_labels != 0) {
    throw Error(Errc::kInvalidArgument, "count matrix shape mismatch");
  }
  const std::size_t rows = counts.size() / num_labels;
  FleissTallies total;
  total.label_totals.assign(num_labels, 0);
  if (exec == Execution::kSerial) {
    fleiss_rows(counts, num_labels, 0, rows, total);
    return total;
  }
#pragma omp parallel num_threads(thread_count())
  {
    FleissTallies local;
    local.label_totals.assign(num_labels, 0);
    const auto [begin, end] =
        block(rows, omp_get_thread_num(), omp_get_num_threads());
    fleiss_rows(counts, num_labels, begin, end, local);
#pragma omp critical(annobias_fleiss)
    {
      total.agreeing_pairs += local.agreeing_pairs;
      accumulate(total.label_totals, local.label_totals);
    }
  }
  return total;
}

CoincidenceTallies coincidence_tallies(std::span<const std::size_t> offsets,
                                       std::span<const std::size_t> values,
                                       std::size_t num_labels, Execution exec) {
  if (offsets.empty() || offsets.back() != values.size()) {
    throw Error(Errc::kInvalidArgument, "malformed CSR item table");
  }
  for (std::size_t v : values) {
    if (v >= num_labels) {
      throw Error(Errc::kUnknownLabel, "value index out of range");
    }
  }
  const std::size_t items = offsets.size() - 1;
  CoincidenceTallies total;
  total.value_totals.assign(num_labels, 0);
  if (exec == Execution::kSerial) {
    std::vector<std::uint64_t> row(num_labels);
    coincidence_items(offsets, values, num_labels, 0, items, row, total);
    return total;
  }
#pragma omp parallel num_threads(thread_count())
  {
    CoincidenceTallies local;
    local.value_totals.assign(num_labels, 0);
    std::vector<std::uint64_t> row(num_labels);
    const auto [begin, end] =
        block(items, omp_get_thread_num(), omp_get_num_threads());
    coincidence_items(offsets, values, num_labels, begin, end, row, local);
#pragma omp critical(annobias_coincidence)
    merge(total, local);
  }
  return total;
}

MismatchTallies mismatch_tallies(std::span<const std::size_t> a,
                                 std::span<const std::size_t> b,
                                 std::size_t num_labels, Execution exec) {
  if (a.size() != b.size()) {
    throw Error(Errc::kInvalidArgument, "mismatch_tallies: length mismatch");
  }
  MismatchTallies total;
  total.by_label.assign(num_labels, 0);
  auto run = [&](std::size_t begin, std::size_t end, MismatchTallies& out) {
    for (std::size_t i = begin; i < end; ++i) {
      if (a[i] != b[i]) {
        ++out.mismatches;
        if (a[i] < num_labels) ++out.by_label[a[i]];
      }
    }
  };
  if (exec == Execution::kSerial) {
    run(0, a.size(), total);
    return total;
  }
#pragma omp parallel num_threads(thread_count())
  {
    MismatchTallies local;
    local.by_label.assign(num_labels, 0);
    const auto [begin, end] =
        block(a.size(), omp_get_thread_num(), omp_get_num_threads());
    run(begin, end, local);
#pragma omp critical(annobias_mismatch)
    {
      total.mismatches += local.mismatches;
      accumulate(total.by_label, local.by_label);
    }
  }
  return total;
}

double ordered_sum(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace annobias::kernels
