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

#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "annobias/error.hpp"
#include "annobias/report.hpp"
#include "annobias/synthetic.hpp"
#include "annobias/wel.hpp"
#include "builders.hpp"

namespace annobias {
namespace {

using testing_util::make_dataset;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kInvariantViolation;
}

// A predictor that ignores its input.
class Constant final : public Predictor {
 public:
  explicit Constant(std::vector<double> p) : p_(SoftLabel::from_probs(std::move(p))) {}
  LearnerKind kind() const override { return LearnerKind::kMajorityClass; }
  std::size_t num_labels() const override { return p_.size(); }
  SoftLabel predict_proba(std::string_view) const override { return p_; }
  nlohmann::json to_json() const override { return {}; }

 private:
  SoftLabel p_;
};

WelEnsemble constant_ensemble(const std::vector<std::vector<double>>& outputs,
                              std::vector<double> weights) {
  std::vector<std::shared_ptr<const Predictor>> predictors;
  std::vector<LearnerScores> scores;
  std::vector<std::uint64_t> seeds;
  for (const auto& p : outputs) {
    predictors.push_back(std::make_shared<Constant>(p));
    scores.push_back({});
    seeds.push_back(seeds.size());
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < outputs.front().size(); ++k) labels.push_back("l" + std::to_string(k));
  return WelEnsemble(LabelSet(labels), predictors, std::move(weights), WelConfig{}, scores, seeds);
}

SyntheticConfig small_corpus(std::uint64_t seed) {
  SyntheticConfig c;
  c.seed = seed;
  c.n_train = 160;
  c.n_dev = 40;
  c.n_test = 40;
  c.cue_rate = 0.5;
  return c;
}

WelConfig quick_config(std::uint64_t seed, std::size_t k = 4) {
  WelConfig wc;
  wc.k = k;
  wc.seed = seed;
  wc.learner.epochs = 30;
  wc.learner.hash_dims = 1024;
  return wc;
}

TEST(Variants, SingleAnnotatorAndUnanimousItemsAreForced) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 1}}, {{"u", 0}, {"v", 0}, {"w", 0}}, {}});
  const auto sample = sample_label_variants(ds, 25, 3);
  EXPECT_EQ(sample.n_excluded, 1u);
  ASSERT_EQ(sample.variants.size(), 25u);
  for (const auto& v : sample.variants) {
    ASSERT_EQ(v.labels.size(), 2u);
    EXPECT_EQ(v.labels[0].label, 1u);
    EXPECT_EQ(v.labels[1].label, 0u);
  }
}

TEST(Variants, SampledLabelsComeFromTheInstance) {
  const auto corpus = generate_synthetic(small_corpus(2));
  const auto sample = sample_label_variants(corpus.dataset, 6, 8);
  for (const auto& v : sample.variants) {
    for (const auto& s : v.labels) {
      const auto& ann = corpus.dataset.instances()[s.instance_index].annotations[s.annotation_index];
      ASSERT_EQ(ann.label(), s.label);
    }
  }
}

TEST(Variants, MinorityFrequencyOverManyVariants) {
  const auto ds = make_dataset({"a", "b"}, {{{"u", 0}, {"v", 0}, {"w", 1}}});
  const auto sample = sample_label_variants(ds, 10000, 17);
  double minority = 0.0;
  for (const auto& v : sample.variants) minority += v.labels[0].label == 1 ? 1.0 : 0.0;
  EXPECT_NEAR(minority / 10000.0, 1.0 / 3.0, 0.02);
}

TEST(Variants, AddingVariantsKeepsEarlierOnesAndParallelMatchesSerial) {
  const auto corpus = generate_synthetic(small_corpus(5));
  const auto five = sample_label_variants(corpus.dataset, 5, 99, Execution::kSerial);
  const auto nine = sample_label_variants(corpus.dataset, 9, 99, Execution::kParallel);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(five.variants[k].seed_used, nine.variants[k].seed_used);
    ASSERT_EQ(five.variants[k].labels.size(), nine.variants[k].labels.size());
    for (std::size_t i = 0; i < five.variants[k].labels.size(); ++i) {
      ASSERT_EQ(five.variants[k].labels[i].annotation_index,
                nine.variants[k].labels[i].annotation_index);
    }
  }
}

TEST(Weights, IdenticalScoresGiveUniform) {
  for (auto scheme : {WeightScheme::kF1Proportional, WeightScheme::kInverseCe,
                      WeightScheme::kInverseMd, WeightScheme::kSoftmax}) {
    const std::vector<double> scores(4, 0.7);
    const auto r = compute_weights(scores, scheme);
    for (double w : r.weights) EXPECT_DOUBLE_EQ(w, 0.25);
  }
}

TEST(Weights, SingleLearnerGetsEverything) {
  const std::vector<double> one = {0.3};
  EXPECT_EQ(compute_weights(one, WeightScheme::kSoftmax).weights, std::vector<double>{1.0});
  EXPECT_EQ(compute_weights(one, WeightScheme::kF1Proportional).weights, std::vector<double>{1.0});
}

TEST(Weights, AllZeroF1FallsBackToUniform) {
  const std::vector<double> zeros(3, 0.0);
  const auto r = compute_weights(zeros, WeightScheme::kF1Proportional);
  EXPECT_TRUE(r.degenerate);
  for (double w : r.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
}

TEST(Weights, RejectsBadInput) {
  const std::vector<double> negative = {0.5, -0.1};
  EXPECT_EQ(code_of([&] { compute_weights(negative, WeightScheme::kInverseCe); }),
            Errc::kInvalidArgument);
  const std::vector<double> ok = {0.5, 0.1};
  EXPECT_EQ(code_of([&] { compute_weights(ok, WeightScheme::kSoftmax, 0.0); }),
            Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { compute_weights({}, WeightScheme::kSoftmax); }), Errc::kInvalidArgument);
}

TEST(Weights, SimplexAndMonotoneOnRandomScores) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(1 + rng() % 12);
    for (double& v : s) v = u(rng);
    for (auto scheme : {WeightScheme::kF1Proportional, WeightScheme::kInverseCe,
                        WeightScheme::kInverseMd, WeightScheme::kSoftmax}) {
      const auto w = compute_weights(s, scheme, 0.5 + u(rng)).weights;
      double sum = 0.0;
      for (double x : w) {
        ASSERT_GE(x, 0.0);
        sum += x;
      }
      ASSERT_NEAR(sum, 1.0, 1e-9);
      const bool higher_better =
          scheme == WeightScheme::kF1Proportional || scheme == WeightScheme::kSoftmax;
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (higher_better ? s[i] > s[j] : s[i] < s[j]) {
            ASSERT_GT(w[i], w[j]);
          }
        }
      }
    }
  }
}

TEST(Predict, ConvexCombinationExamples) {
  EXPECT_EQ(wel_predict(constant_ensemble({{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}}, {0.5, 0.3, 0.2}), "t"),
            SoftLabel::from_probs({0.2, 0.8}));
  const auto half = wel_predict(constant_ensemble({{1, 0}, {0, 1}}, {0.5, 0.5}), "t");
  EXPECT_DOUBLE_EQ(half[0], 0.5);
  const auto tilted = wel_predict(constant_ensemble({{1, 0}, {0, 1}}, {0.9, 0.1}), "t");
  EXPECT_DOUBLE_EQ(tilted[0], 0.9);
  EXPECT_DOUBLE_EQ(tilted[1], 0.1);
}

TEST(Predict, OnSimplexForRandomEnsembles) {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(0.5, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 8;
    const std::size_t labels = 2 + rng() % 3;
    std::vector<std::vector<double>> outputs(k, std::vector<double>(labels));
    for (auto& p : outputs) {
      double z = 0.0;
      for (double& v : p) z += (v = g(rng) + 1e-12);
      for (double& v : p) v /= z;
    }
    std::vector<double> raw(k);
    for (double& v : raw) v = g(rng) + 1e-9;
    const auto w = compute_weights(raw, WeightScheme::kF1Proportional).weights;
    const auto p = wel_predict(constant_ensemble(outputs, w), "x");
    double sum = 0.0;
    for (double v : p.probs()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      sum += v;
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Ensemble, RejectsInvalidWeights) {
  EXPECT_EQ(code_of([] { constant_ensemble({{1, 0}, {0, 1}}, {0.7, 0.7}); }),
            Errc::kInvariantViolation);
  EXPECT_EQ(code_of([] { constant_ensemble({{1, 0}, {0, 1}}, {1.2, -0.2}); }),
            Errc::kInvariantViolation);
}

TEST(Holdout, PrefersDevElseSeededCarveOut) {
  const auto corpus = generate_synthetic(small_corpus(1));
  const auto split = weighting_split(corpus.dataset, HoldoutSpec{}, 0);
  EXPECT_TRUE(split.holdout_is_dev);
  EXPECT_EQ(split.train.size(), 160u);
  EXPECT_EQ(split.holdout.size(), 40u);

  const auto train_only = corpus.dataset.subset(Split::kTrain);
  const auto carve = weighting_split(train_only, HoldoutSpec{true, 0.15}, 7);
  EXPECT_FALSE(carve.holdout_is_dev);
  EXPECT_EQ(carve.holdout.size(), 24u);
  EXPECT_EQ(carve.train.size() + carve.holdout.size(), 160u);
  for (std::size_t h : carve.holdout) {
    EXPECT_EQ(std::count(carve.train.begin(), carve.train.end(), h), 0);
  }
  const auto again = weighting_split(train_only, HoldoutSpec{true, 0.15}, 7);
  EXPECT_EQ(again.holdout, carve.holdout);
}

TEST(Train, DeterministicAcrossThreadCounts) {
  const auto corpus = generate_synthetic(small_corpus(11));
  auto one = quick_config(3, 5);
  one.threads = 1;
  auto many = one;
  many.threads = 8;
  const auto a = train_wel(corpus.dataset, one);
  const auto b = train_wel(corpus.dataset, many);
  EXPECT_EQ(ensemble_manifest(a).dump(), ensemble_manifest(b).dump());
  for (std::size_t k = 0; k < a.predictors().size(); ++k) {
    EXPECT_EQ(a.predictors()[k]->to_json().dump(), b.predictors()[k]->to_json().dump());
  }
  const auto test = corpus.dataset.subset(Split::kTest);
  const auto pa = predict_dataset(a, test, "w", Execution::kSerial);
  const auto pb = predict_dataset(b, test, "w", Execution::kParallel);
  EXPECT_EQ(pa.outputs(), pb.outputs());
}

TEST(Train, EveryScheme) {
  const auto corpus = generate_synthetic(small_corpus(12));
  for (auto scheme : {WeightScheme::kF1Proportional, WeightScheme::kInverseCe,
                      WeightScheme::kInverseMd, WeightScheme::kSoftmax}) {
    auto wc = quick_config(2);
    wc.scheme = scheme;
    const auto e = train_wel(corpus.dataset, wc);
    EXPECT_EQ(e.scheme(), scheme);
    EXPECT_EQ(e.weights().size(), 4u);
    EXPECT_EQ(e.provenance["holdout_source"], "dev");
  }
}

TEST(Reweight, MatchesTrainingWithThatScheme) {
  const auto corpus = generate_synthetic(small_corpus(14));
  const auto base = train_wel(corpus.dataset, quick_config(4));
  auto wc = quick_config(4);
  wc.scheme = WeightScheme::kSoftmax;
  wc.temperature = 0.5;
  const auto direct = train_wel(corpus.dataset, wc);
  const auto swapped = reweight(base, WeightScheme::kSoftmax, 0.5);
  EXPECT_EQ(swapped.weights(), direct.weights());
  EXPECT_EQ(ensemble_manifest(swapped).dump(), ensemble_manifest(direct).dump());
}

TEST(Reweight, GridCoversEverySchemeAndMatchesEvaluate) {
  const auto corpus = generate_synthetic(small_corpus(15));
  const auto ensemble = train_wel(corpus.dataset, quick_config(5));
  const auto dev = corpus.dataset.subset(Split::kDev);
  const std::vector<double> temps = {0.5, 2.0};
  const auto grid = weight_grid(ensemble, dev, temps, F1Averaging::kBinary);
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_EQ(grid[3].scheme, WeightScheme::kSoftmax);
  EXPECT_EQ(grid[4].temperature, 2.0);
  for (const auto& g : grid) {
    const auto preds = predict_dataset(reweight(ensemble, g.scheme, g.temperature), dev, "wel");
    const auto e = evaluate(preds, dev, F1Averaging::kBinary);
    EXPECT_EQ(g.metrics.ce, e.ce);
    EXPECT_EQ(g.metrics.md, e.md);
    EXPECT_EQ(g.metrics.f1, e.f1);
  }
  EXPECT_EQ(code_of([&] { weight_grid(ensemble, dev, {}, F1Averaging::kBinary); }),
            Errc::kInvalidArgument);
}

TEST(Train, KEqualsOne) {
  const auto corpus = generate_synthetic(small_corpus(13));
  const auto e = train_wel(corpus.dataset, quick_config(1, 1));
  EXPECT_EQ(e.weights(), std::vector<double>{1.0});
}

TEST(Persistence, SaveLoadRoundTrip) {
  const auto corpus = generate_synthetic(small_corpus(14));
  auto e = train_wel(corpus.dataset, quick_config(6, 3));
  e.provenance["note"] = "kept";
  const auto dir = std::filesystem::temp_directory_path() / "annobias_wel_roundtrip";
  std::filesystem::remove_all(dir);
  save_ensemble(e, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "learner_003.json"));
  const auto back = load_ensemble(dir);
  EXPECT_EQ(ensemble_manifest(back).dump(), ensemble_manifest(e).dump());
  EXPECT_EQ(back.provenance["note"], "kept");
  for (const auto& inst : corpus.dataset.instances()) {
    ASSERT_EQ(wel_predict(back, inst.text), wel_predict(e, inst.text));
  }
  // Saving twice writes byte-identical manifests.
  const auto first = read_file(dir / "manifest.json");
  save_ensemble(back, dir);
  EXPECT_EQ(read_file(dir / "manifest.json"), first);
  std::filesystem::remove_all(dir);
}

TEST(Persistence, RejectsForeignManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "annobias_wel_foreign";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "manifest.json", R"({"format":"other"})");
  EXPECT_EQ(code_of([&] { load_ensemble(dir); }), Errc::kParseError);
  std::filesystem::remove_all(dir);
}

TEST(Debias, LambdaZeroIsIdentity) {
  DebiasConfig config{0.0, {{"x", {0.3, -0.3}}}};
  const std::vector<double> f = {0.25, 0.75};
  const auto r = debias_output(f, config, "x");
  EXPECT_EQ(r.adjusted, SoftLabel::from_probs(f));
}

TEST(Debias, ValidRawIsKept) {
  DebiasConfig config{0.4, {{"x", {0.5, -0.5}}}};
  const auto r = debias_output(std::vector<double>{0.9, 0.1}, config, "x");
  EXPECT_NEAR(r.raw[0], 0.7, 1e-15);
  EXPECT_NEAR(r.adjusted[0], 0.7, 1e-15);
  EXPECT_NEAR(r.adjusted[1], 0.3, 1e-15);
  EXPECT_FALSE(r.fallback_uniform);
}

TEST(Debias, ClampAndRenormalize) {
  DebiasConfig config{1.0, {{"x", {0.6, -0.2, 0.0}}}};
  const auto r = debias_output(std::vector<double>{0.2, 0.3, 0.5}, config, "x");
  EXPECT_NEAR(r.raw[0], -0.4, 1e-15);
  EXPECT_EQ(r.adjusted[0], 0.0);
  EXPECT_NEAR(r.adjusted[1], 0.5, 1e-15);
  EXPECT_NEAR(r.adjusted[2], 0.5, 1e-15);
  DebiasConfig wipe{1.0, {{"x", {1.0, 1.0}}}};
  const auto u = debias_output(std::vector<double>{0.5, 0.5}, wipe, "x");
  EXPECT_TRUE(u.fallback_uniform);
  EXPECT_EQ(u.adjusted, SoftLabel::uniform(2));
}

TEST(Debias, Errors) {
  DebiasConfig config{0.5, {{"x", {0.1, -0.1}}}};
  const std::vector<double> f = {0.5, 0.5};
  EXPECT_EQ(code_of([&] { debias_output(f, config, "y"); }), Errc::kMissingBiasComponent);
  DebiasConfig wide{0.5, {{"x", {0.1, -0.1, 0.0}}}};
  EXPECT_EQ(code_of([&] { debias_output(f, wide, "x"); }), Errc::kDimensionMismatch);
  DebiasConfig negative{-1.0, {{"x", {0.1, -0.1}}}};
  EXPECT_EQ(code_of([&] { debias_output(f, negative, "x"); }), Errc::kInvalidArgument);
}

TEST(Debias, ReadsBiasFile) {
  std::stringstream in("{\"instance_id\":\"a\",\"bias\":[0.1,-0.1]}\n\n{\"instance_id\":\"b\",\"bias\":[0,0]}\n");
  const auto bias = read_bias_components(in);
  EXPECT_EQ(bias.size(), 2u);
  std::stringstream dup("{\"instance_id\":\"a\",\"bias\":[0]}\n{\"instance_id\":\"a\",\"bias\":[0]}\n");
  EXPECT_EQ(code_of([&] { read_bias_components(dup); }), Errc::kDuplicateId);
}

TEST(Baseline, TrainsOnMajorityVote) {
  const auto corpus = generate_synthetic(small_corpus(21));
  auto wc = quick_config(21);
  wc.learner.kind = LearnerKind::kMajorityClass;
  const auto base = train_majority_vote_baseline(corpus.dataset, wc);
  const auto split = weighting_split(corpus.dataset, wc.holdout, wc.seed);
  double positive = 1.0;  // smoothing
  for (std::size_t i : split.train) {
    positive += majority_label(corpus.dataset.instances()[i], corpus.dataset.label_set()) == 1;
  }
  const double expected = positive / (static_cast<double>(split.train.size()) + 2.0);
  EXPECT_NEAR(base->predict_proba("")[1], expected, 1e-12);
}

}  // namespace
}  // namespace annobias
