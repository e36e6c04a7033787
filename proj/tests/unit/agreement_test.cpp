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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "annobias/agreement.hpp"
#include "annobias/error.hpp"
#include "builders.hpp"
#include "oracles.hpp"

namespace annobias {
namespace {

using testing_util::make_dataset;
using Pairs = std::vector<PairedLabels::Pair>;

TEST(Cohen, IdenticalSequences) {
  const auto r = cohen_kappa(PairedLabels(2, Pairs{{0, 0}, {1, 1}, {1, 1}, {0, 0}}));
  EXPECT_EQ(r.coefficient, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Cohen, HandComputedZero) {
  // y1 = A A B B, y2 = A B A B: p_o = 0.5, p_e = 0.5.
  const auto r = cohen_kappa(PairedLabels(2, Pairs{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(r.observed, 0.5);
  EXPECT_DOUBLE_EQ(r.expected, 0.5);
  EXPECT_DOUBLE_EQ(r.coefficient, 0.0);
}

TEST(Cohen, AllSameLabelIsDegenerate) {
  const auto r = cohen_kappa(PairedLabels(2, Pairs{{0, 0}, {0, 0}, {0, 0}}));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.coefficient, 1.0);
}

TEST(Cohen, EmptyInput) {
  try {
    cohen_kappa(PairedLabels(2, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyInput);
  }
}

TEST(Cohen, IndependentDrawsConvergeToZero) {
  std::mt19937_64 rng(5);
  std::discrete_distribution<std::size_t> marginal({0.5, 0.3, 0.2});
  Pairs pairs;
  for (int i = 0; i < 10000; ++i) pairs.emplace_back(marginal(rng), marginal(rng));
  EXPECT_LT(std::abs(cohen_kappa(PairedLabels(3, pairs)).coefficient), 0.05);
}

TEST(Fleiss, WorkedExample) {
  // Rows {A:2}, {A:1,B:1}, {B:2}.
  const auto r = fleiss_kappa(CountMatrix(2, 2, {2, 0, 1, 1, 0, 2}));
  EXPECT_NEAR(r.observed, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.expected, 0.5, 1e-15);
  EXPECT_NEAR(r.coefficient, 1.0 / 3.0, 1e-12);
}

TEST(Fleiss, PerfectAgreement) {
  const auto r = fleiss_kappa(CountMatrix(3, 4, {4, 0, 0, 0, 4, 0, 0, 0, 4}));
  EXPECT_EQ(r.coefficient, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Fleiss, RowSumMismatch) {
  try {
    CountMatrix(2, 3, {3, 0, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRowSumMismatch);
  }
}

TEST(Fleiss, VaryingPanelFromDataset) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}, {"v", 0}}, {{"u", 1}}});
  try {
    CountMatrix::from_dataset(ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRowSumMismatch);
  }
}

TEST(Krippendorff, PerfectAgreementOnPairableItems) {
  const auto ds = make_dataset(
      {"a", "b"}, {{{"u", 0}, {"v", 0}}, {{"u", 1}, {"w", 1}, {"v", 1}}, {{"u", 0}}});
  const auto r = krippendorff_alpha(ds);
  EXPECT_EQ(r.coefficient, 1.0);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.n_excluded, 1u);
}

TEST(Krippendorff, AllValuesIdenticalIsDegenerate) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}, {"v", 0}}, {{"u", 0}, {"v", 0}}});
  const auto r = krippendorff_alpha(ds);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.coefficient, 1.0);
}

TEST(Krippendorff, NoPairableValues) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}}, {{"v", 1}}});
  try {
    krippendorff_alpha(ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNoPairableValues);
  }
}

TEST(Krippendorff, MixedSmallDatasetMatchesOracle) {
  // 4 items, 3 annotators, 2 missing cells.
  const auto ds = make_dataset({"a", "b", "c"}, {{{"u", 0}, {"v", 0}, {"w", 1}},
                                                 {{"u", 1}, {"v", 1}},
                                                 {{"u", 2}, {"v", 2}, {"w", 2}},
                                                 {{"v", 0}, {"w", 2}}});
  const auto expected = oracle::krippendorff(oracle::values_by_item(ds), 3);
  EXPECT_NEAR(krippendorff_alpha(ds).coefficient, expected.value, 1e-12);
}

TEST(Krippendorff, CoincidenceMatrixMarginalsCountPairableValues) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}, {"v", 1}, {"w", 1}}, {{"u", 0}}});
  const auto o = coincidence_matrix(ReliabilityData::from_dataset(ds));
  double total = 0.0;
  for (double x : o) total += x;
  EXPECT_DOUBLE_EQ(total, 3.0);
  EXPECT_DOUBLE_EQ(o[0 * 2 + 1], 1.0);
  EXPECT_DOUBLE_EQ(o[1 * 2 + 1], 1.0);
}

TEST(Krippendorff, TwoCompleteAnnotatorsMatchOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ds = oracle::random_dataset(rng, 2 + rng() % 30, 2, 2 + rng() % 3, true);
    const auto expected = oracle::krippendorff(oracle::values_by_item(ds), ds.label_set().size());
    const auto got = krippendorff_alpha(ds);
    ASSERT_EQ(got.degenerate, expected.degenerate);
    ASSERT_NEAR(got.coefficient, expected.value, 1e-12);
  }
}

class AgreementProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(AgreementProperties, MatchOraclesAndInvariants) {
  std::mt19937_64 rng(GetParam());
  const std::size_t k = 2 + rng() % 3;
  const auto ds = oracle::random_dataset(rng, 1 + rng() % 20, 2 + rng() % 4, k, true);
  const auto values = oracle::values_by_item(ds);
  const auto pairs = PairedLabels::from_dataset(ds, "a0", "a1");
  const auto counts = CountMatrix::from_dataset(ds);

  const auto c = cohen_kappa(pairs);
  const auto f = fleiss_kappa(counts);
  const auto expected_c = oracle::cohen(oracle::pairs_of(ds, "a0", "a1"), k);
  const auto expected_f = oracle::fleiss(values, k);
  EXPECT_EQ(c.degenerate, expected_c.degenerate);
  EXPECT_NEAR(c.coefficient, expected_c.value, 1e-12);
  EXPECT_EQ(f.degenerate, expected_f.degenerate);
  EXPECT_NEAR(f.coefficient, expected_f.value, 1e-12);
  EXPECT_LE(c.coefficient, 1.0);
  EXPECT_LE(f.coefficient, 1.0);

  // Serial and parallel paths agree bit for bit.
  EXPECT_EQ(cohen_kappa(pairs, Execution::kSerial).coefficient, c.coefficient);
  EXPECT_EQ(fleiss_kappa(counts, Execution::kSerial).coefficient, f.coefficient);

  // Permuting instances leaves the coefficients bit-identical.
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const auto permuted = ds.subset(order);
  EXPECT_EQ(cohen_kappa(PairedLabels::from_dataset(permuted, "a0", "a1")).coefficient,
            c.coefficient);
  EXPECT_EQ(fleiss_kappa(CountMatrix::from_dataset(permuted)).coefficient, f.coefficient);

  // Renaming labels bijectively changes nothing.
  std::vector<std::size_t> rename(k);
  for (std::size_t i = 0; i < k; ++i) rename[i] = i;
  std::shuffle(rename.begin(), rename.end(), rng);
  std::vector<std::vector<std::size_t>> renamed = values;
  for (auto& item : renamed) {
    for (auto& v : item) v = rename[v];
  }
  EXPECT_NEAR(krippendorff_alpha(ReliabilityData(k, renamed)).coefficient,
              krippendorff_alpha(ReliabilityData(k, values)).coefficient, 1e-12);
  EXPECT_NEAR(oracle::fleiss(renamed, k).value, f.coefficient, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, AgreementProperties, ::testing::Range<std::uint64_t>(1, 101));

TEST(Krippendorff, MissingDataMatchesOracleAndParallelIsBitIdentical) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ds = oracle::random_dataset(rng, 1 + rng() % 20, 2 + rng() % 4, 2 + rng() % 3,
                                           false);
    const auto values = oracle::values_by_item(ds);
    const bool pairable =
        std::any_of(values.begin(), values.end(), [](const auto& v) { return v.size() >= 2; });
    if (!pairable) continue;
    const auto data = ReliabilityData::from_dataset(ds);
    const auto serial = krippendorff_alpha(data, Execution::kSerial);
    const auto parallel = krippendorff_alpha(data, Execution::kParallel);
    ASSERT_EQ(serial.coefficient, parallel.coefficient);
    const auto expected = oracle::krippendorff(values, ds.label_set().size());
    ASSERT_EQ(serial.degenerate, expected.degenerate);
    ASSERT_NEAR(serial.coefficient, expected.value, 1e-12);
  }
}

}  // namespace
}  // namespace annobias
