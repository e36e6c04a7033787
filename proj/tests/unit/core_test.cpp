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

#include <random>

#include <gtest/gtest.h>

#include "annobias/core.hpp"
#include "annobias/error.hpp"
#include "builders.hpp"

namespace annobias {
namespace {

using testing_util::make_dataset;

Instance with_labels(std::initializer_list<std::size_t> labels) {
  Instance inst;
  inst.id = "i";
  std::size_t j = 0;
  for (std::size_t y : labels) {
    inst.annotations.push_back(Annotation::categorical("a" + std::to_string(++j), y));
  }
  return inst;
}

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no annobias::Error thrown";
  return Errc::kInvariantViolation;
}

const LabelSet kOffNot({"off", "not"});

TEST(EmpiricalSoftLabel, Unanimous) {
  const auto s = empirical_soft_label(with_labels({0, 0, 0}), kOffNot);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[1], 0.0);
}

TEST(EmpiricalSoftLabel, Counts) {
  const auto s = empirical_soft_label(with_labels({0, 1, 0}), kOffNot);
  EXPECT_DOUBLE_EQ(s[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s[1], 1.0 / 3.0);
}

TEST(EmpiricalSoftLabel, EmptyAnnotations) {
  EXPECT_EQ(error_code([] { empirical_soft_label(with_labels({}), kOffNot); }),
            Errc::kEmptyAnnotations);
}

TEST(EmpiricalSoftLabel, NumericModeRejected) {
  Instance inst;
  inst.id = "n";
  inst.annotations.push_back(Annotation::numeric("a", -1.0));
  EXPECT_EQ(error_code([&] { empirical_soft_label(inst, kOffNot); }), Errc::kNumericMode);
}

TEST(MajorityLabel, StrictMajority) {
  EXPECT_EQ(majority_label(with_labels({0, 0, 1}), kOffNot), 0u);
}

TEST(MajorityLabel, TieGoesToFirstInLabelSet) {
  EXPECT_EQ(majority_label(with_labels({1, 0}), kOffNot), 0u);
  EXPECT_EQ(majority_label(with_labels({1, 0}), kOffNot, TieBreak::kLastInLabelSetOrder), 1u);
}

TEST(MajorityLabel, Empty) {
  EXPECT_EQ(error_code([] { majority_label(with_labels({}), kOffNot); }),
            Errc::kEmptyAnnotations);
}

TEST(SoftLabelFuzz, EmpiricalIsValidAndMajorityIsArgmax) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + rng() % 4;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
    const LabelSet labels(names);
    Instance inst;
    inst.id = "f";
    const std::size_t m = 1 + rng() % 9;
    for (std::size_t j = 0; j < m; ++j) {
      inst.annotations.push_back(Annotation::categorical("a" + std::to_string(j), rng() % k));
    }
    const auto s = empirical_soft_label(inst, labels);
    double sum = 0.0;
    for (double p : s.probs()) {
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, 1.0);
      sum += p;
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
    for (auto rule : {TieBreak::kFirstInLabelSetOrder, TieBreak::kLastInLabelSetOrder}) {
      ASSERT_EQ(majority_label(inst, labels, rule), s.argmax(rule));
    }
  }
}

TEST(Dataset, RejectsDuplicateAnnotator) {
  EXPECT_EQ(error_code([] { make_dataset({"a", "b"}, {{{"u", 0}, {"u", 1}}}); }),
            Errc::kDuplicateAnnotator);
}

TEST(Dataset, RejectsDuplicateId) {
  std::vector<Instance> instances(2);
  instances[0].id = instances[1].id = "same";
  EXPECT_EQ(error_code([&] { AnnotatedDataset(kOffNot, instances); }), Errc::kDuplicateId);
}

TEST(Dataset, RejectsUnknownLabel) {
  EXPECT_EQ(error_code([] { make_dataset({"a", "b"}, {{{"u", 2}}}); }), Errc::kUnknownLabel);
}

TEST(Dataset, KeepsUnannotatedInstancesAndCountsThem) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}, {"v", 1}}, {}, {{"u", 1}}});
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.unannotated_count(), 1u);
  EXPECT_EQ(ds.annotator_count(), 2u);
  EXPECT_EQ(ds.annotator_range(), std::make_pair(std::size_t{1}, std::size_t{2}));
}

TEST(Dataset, SubsetBySplit) {
  std::vector<Instance> instances(3);
  instances[0].id = "a";
  instances[0].split = Split::kTrain;
  instances[1].id = "b";
  instances[1].split = Split::kTest;
  instances[2].id = "c";
  instances[2].split = Split::kTrain;
  const AnnotatedDataset ds(kOffNot, instances);
  EXPECT_TRUE(ds.has_split(Split::kTrain));
  EXPECT_FALSE(ds.has_split(Split::kDev));
  const auto train = ds.subset(Split::kTrain);
  ASSERT_EQ(train.size(), 2u);
  EXPECT_EQ(train.instances()[1].id, "c");
}

TEST(LabelSet, PositiveAndLookup) {
  const LabelSet labels({"no", "yes"}, "yes");
  EXPECT_EQ(labels.positive(), std::optional<std::size_t>(1));
  EXPECT_EQ(labels.require_index("no"), 0u);
  EXPECT_EQ(error_code([&] { labels.require_index("maybe"); }), Errc::kUnknownLabel);
  EXPECT_EQ(error_code([] { LabelSet({"only"}); }), Errc::kInvalidArgument);
}

TEST(Split, RoundTrip) {
  for (auto s : {Split::kTrain, Split::kDev, Split::kTest}) {
    EXPECT_EQ(parse_split(split_name(s)), s);
  }
  EXPECT_EQ(error_code([] { parse_split("validation"); }), Errc::kUnknownSplit);
}

}  // namespace
}  // namespace annobias
