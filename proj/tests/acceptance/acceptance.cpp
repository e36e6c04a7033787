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

// Release acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "annobias/agreement.hpp"
#include "annobias/divergence.hpp"
#include "annobias/eval.hpp"
#include "annobias/ingest.hpp"
#include "annobias/kernels.hpp"
#include "annobias/learners.hpp"
#include "annobias/metadata.hpp"
#include "annobias/synthetic.hpp"
#include "annobias/wel.hpp"
#include "builders.hpp"
#include "oracles.hpp"

namespace {

using namespace annobias;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kFixtures = ANNOBIAS_FIXTURES;

int failures = 0;

void verdict(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// 1 ---------------------------------------------------------------------

void agreement_oracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  double worst = 0.0;
  std::size_t flag_mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const std::size_t m = 2 + rng() % 4;
    const std::size_t k = 2 + rng() % 3;
    const auto ds = oracle::random_dataset(rng, n, m, k, true);
    const auto values = oracle::values_by_item(ds);

    const auto c = cohen_kappa(PairedLabels::from_dataset(ds, "a0", "a1"));
    const auto f = fleiss_kappa(CountMatrix::from_dataset(ds));
    const auto a = krippendorff_alpha(ReliabilityData::from_dataset(ds));
    const auto oc = oracle::cohen(oracle::pairs_of(ds, "a0", "a1"), k);
    const auto of = oracle::fleiss(values, k);
    const auto oa = oracle::krippendorff(values, k);
    worst = std::max({worst, std::abs(c.coefficient - oc.value),
                      std::abs(f.coefficient - of.value), std::abs(a.coefficient - oa.value)});
    flag_mismatches += (c.degenerate != oc.degenerate) + (f.degenerate != of.degenerate) +
                       (a.degenerate != oa.degenerate);
  }
  const double elapsed = seconds_since(start);
  verdict(worst <= 1e-12 && flag_mismatches == 0 && elapsed < 10.0, "agreement-oracle-equivalence",
          fmt("500 datasets, max |error| %.3g (limit 1e-12), degenerate-flag mismatches %zu, %.2f s "
              "(limit 10 s)",
              worst, flag_mismatches, elapsed));
}

// 2 ---------------------------------------------------------------------

void fixed_points() {
  using testing_util::make_dataset;
  std::vector<std::string> notes;
  bool ok = true;

  // Every rater agrees on every item; two labels are in use so the chance
  // term stays below one.
  const auto perfect = make_dataset(
      {"a", "b", "c"},
      {{{"u", 0}, {"v", 0}, {"w", 0}}, {{"u", 1}, {"v", 1}, {"w", 1}}, {{"u", 2}, {"v", 2}, {"w", 2}},
       {{"u", 0}, {"v", 0}, {"w", 0}}});
  const double kc = cohen_kappa(PairedLabels::from_dataset(perfect, "u", "v")).coefficient;
  const double kf = fleiss_kappa(CountMatrix::from_dataset(perfect)).coefficient;
  const double ka = krippendorff_alpha(perfect).coefficient;
  ok = ok && kc == 1.0 && kf == 1.0 && ka == 1.0;
  notes.push_back(fmt("kappa_cohen=%.17g kappa_fleiss=%.17g alpha=%.17g", kc, kf, ka));

  std::vector<AnnotatorProfile> profiles;
  std::vector<testing_util::Row> rows(3);
  for (int g = 0; g < 4; ++g) {
    const std::string id = "r" + std::to_string(g);
    profiles.push_back({id, {{"culture", "G" + std::to_string(g)}}});
    for (auto& row : rows) row.emplace_back(id, static_cast<std::size_t>(g % 2));
  }
  const auto pool = make_dataset({"a", "b"}, rows, profiles);
  const double h = pool_entropy(pool, "culture");
  ok = ok && std::abs(h - std::log(4.0)) <= 1e-12;
  notes.push_back(fmt("H=%.17g (ln 4=%.17g)", h, std::log(4.0)));

  std::mt19937_64 rng(5);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  bool identity = true;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(2 + rng() % 4);
    double z = 0.0;
    for (double& v : p) z += (v = gamma(rng));
    for (double& v : p) v /= z;
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > SoftLabel::kSumTolerance) continue;
    DebiasConfig config;
    config.lambda = 0.0;
    std::vector<double> b(p.size());
    for (double& v : b) v = gamma(rng) - 1.0;
    config.bias["x"] = b;
    const auto out = debias_output(p, config, "x");
    identity = identity && std::equal(p.begin(), p.end(), out.adjusted.probs().begin()) &&
               !out.fallback_uniform;
  }
  ok = ok && identity;
  notes.push_back(std::string("lambda=0 identity ") + (identity ? "exact" : "violated"));

  PredictionSet preds("p");
  for (int i = 0; i < 50; ++i) {
    const double q = static_cast<double>(i % 7) / 6.0;
    preds.add("i" + std::to_string(i), SoftLabel::from_probs({q, 1.0 - q}));
  }
  const double dr = disagreement_rate(preds, preds).value;
  ok = ok && dr == 0.0;
  notes.push_back(fmt("DR(p,p)=%.17g", dr));

  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
  verdict(ok, "analytic-fixed-points", detail);
}

// 3 ---------------------------------------------------------------------

void fleiss_worked_example() {
  // Rows {A:2}, {A:1, B:1}, {B:2}.
  const CountMatrix counts(2, 2, {2, 0, 1, 1, 0, 2});
  const auto r = fleiss_kappa(counts);
  const double error = std::abs(r.coefficient - 1.0 / 3.0);
  verdict(error <= 1e-12 && !r.degenerate, "fleiss-worked-example",
          fmt("kappa=%.17g, |kappa - 1/3| = %.3g (limit 1e-12), P_bar=%.17g, P_e=%.17g",
              r.coefficient, error, r.observed, r.expected));
}

// 4 ---------------------------------------------------------------------

void gradient_check() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 3;
    const std::size_t dims = 16 + rng() % 49;
    std::vector<double> params(linear::param_count(k, dims));
    for (double& p : params) p = g(rng);
    SparseFeatures x;
    for (std::size_t j = 0, nnz = 1 + rng() % 8; j < nnz; ++j) {
      x.index.push_back(static_cast<std::uint32_t>(rng() % dims));
      x.value.push_back(g(rng) * 2.0);
    }
    std::vector<double> target(k);
    double z = 0.0;
    for (double& t : target) z += (t = std::abs(g(rng)) + 0.01);
    for (double& t : target) t /= z;
    const double l2 = 2e-3 * static_cast<double>(rng() % 4);

    std::vector<double> analytic(params.size()), scratch(params.size());
    linear::loss_and_gradient(params, k, dims, x, target, l2, analytic);
    const double h = 1e-5;
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      const double numeric = (linear::loss_and_gradient(plus, k, dims, x, target, l2, scratch) -
                              linear::loss_and_gradient(minus, k, dims, x, target, l2, scratch)) /
                             (2.0 * h);
      diff += (analytic[i] - numeric) * (analytic[i] - numeric);
      scale += analytic[i] * analytic[i] + numeric * numeric;
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12));
  }
  verdict(worst <= 1e-4, "gradient-check",
          fmt("50 random (weights, instance) pairs, max relative error %.3g (limit 1e-4)", worst));
}

// 5 ---------------------------------------------------------------------

void wel_contract() {
  const auto start = Clock::now();
  const WeightScheme schemes[] = {WeightScheme::kF1Proportional, WeightScheme::kInverseCe,
                                  WeightScheme::kInverseMd, WeightScheme::kSoftmax};
  std::size_t bad_weights = 0, bad_outputs = 0, outputs = 0;
  double worst_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SyntheticConfig data;
    data.seed = seed;
    data.n_train = 60;
    data.n_dev = seed % 2 ? 20 : 0;  // odd seeds use dev, even seeds carve a holdout
    data.n_test = 20;
    data.num_labels = 2 + seed % 3;
    const auto corpus = generate_synthetic(data);
    WelConfig config;
    config.seed = seed;
    config.k = 1 + seed % 5;
    config.scheme = schemes[seed % 4];
    config.temperature = 0.5 + static_cast<double>(seed % 3);
    config.learner.epochs = 15;
    config.learner.hash_dims = 1 << 10;
    const auto ensemble = train_wel(corpus.dataset, config);
    const auto& w = ensemble.weights();
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    bad_weights += std::abs(sum - 1.0) > 1e-12 ||
                   std::any_of(w.begin(), w.end(), [](double v) { return !(v >= 0.0); });
    for (const auto& inst : corpus.dataset.instances()) {
      const auto p = wel_predict(ensemble, inst.text);
      double total = 0.0;
      bool inside = true;
      for (double v : p.probs()) {
        inside = inside && v >= 0.0 && v <= 1.0;
        total += v;
      }
      bad_outputs += !inside || std::abs(total - 1.0) > 1e-9;
      ++outputs;
    }
  }

  // Same (seed, K, config) trained with 1 and 8 threads.
  std::size_t determinism_breaks = 0;
  for (std::uint64_t seed : {3u, 11u}) {
    SyntheticConfig data;
    data.seed = seed;
    data.n_train = 300;
    data.n_dev = 60;
    data.n_test = 60;
    const auto corpus = generate_synthetic(data);
    std::string manifests[2];
    std::vector<SoftLabel> preds[2];
    for (int run = 0; run < 2; ++run) {
      const int threads = run == 0 ? 1 : 8;
      kernels::set_thread_count(threads);
      WelConfig config;
      config.seed = seed;
      config.k = 8;
      config.threads = threads;
      config.learner.epochs = 40;
      const auto ensemble = train_wel(corpus.dataset, config);
      manifests[run] = ensemble_manifest(ensemble).dump();
      const auto set = predict_dataset(ensemble, corpus.dataset, "wel");
      for (const auto& [id, p] : set.outputs()) preds[run].push_back(p);
    }
    kernels::set_thread_count(0);
    determinism_breaks += manifests[0] != manifests[1] || preds[0] != preds[1];
  }

  verdict(bad_weights == 0 && bad_outputs == 0 && determinism_breaks == 0, "wel-contract",
          fmt("100 seeded runs: weight violations %zu (max |sum-1| %.3g), off-simplex outputs "
              "%zu/%zu; 1- vs 8-thread runs differing %zu/2; %.1f s",
              bad_weights, worst_sum, bad_outputs, outputs, determinism_breaks,
              seconds_since(start)));
}

// 6 and 7 ---------------------------------------------------------------

// Shared protocol for the synthetic experiments.
WelConfig experiment_config(std::uint64_t seed, WeightScheme scheme) {
  WelConfig config;
  config.seed = seed;
  config.k = 10;
  config.scheme = scheme;
  return config;
}

SyntheticConfig bias_config(std::uint64_t seed) {
  SyntheticConfig c;  // 4 honest + 1 adversary flipping 80%, N = 1400/300/300
  c.seed = seed;
  c.cue_rate = 0.6;
  c.honest_noise = 0.0;
  return c;
}

SyntheticConfig small_pool_config(std::uint64_t seed) {
  SyntheticConfig c = armis_like_config(seed);
  c.cue_rate = 0.6;
  return c;
}

// Adversary-authored sampled labels that differ from the latent truth, per
// variant, replaying the sampler exactly as train_wel does.
std::vector<std::size_t> contamination(const SyntheticCorpus& corpus, const WelConfig& config) {
  const auto split = weighting_split(corpus.dataset, config.holdout, config.seed);
  const auto train = corpus.dataset.subset(split.train);
  const auto sample = sample_label_variants(train, config.k, config.seed, Execution::kSerial);
  std::vector<std::size_t> out;
  for (const auto& variant : sample.variants) {
    std::size_t bad = 0;
    for (const auto& s : variant.labels) {
      const auto& ann = train.instances()[s.instance_index].annotations[s.annotation_index];
      const bool adversary = std::find(corpus.adversaries.begin(), corpus.adversaries.end(),
                                       ann.annotator_id) != corpus.adversaries.end();
      bad += adversary && s.label != corpus.truth[split.train[s.instance_index]];
    }
    out.push_back(bad);
  }
  return out;
}

struct SeedOutcome {
  EvalReport wel, base;
  std::vector<double> wel_ce, base_ce;
};

SeedOutcome run_seed(const SyntheticCorpus& corpus, const WelEnsemble& ensemble,
                     const WelConfig& config) {
  const auto baseline = train_majority_vote_baseline(corpus.dataset, config);
  const auto test = corpus.dataset.subset(Split::kTest);
  const auto pw = predict_dataset(ensemble, test, "wel");
  const auto pb = predict_dataset(*baseline, test, "ce-only");
  const auto averaging = default_averaging(test.label_set());
  return {evaluate(pw, test, averaging), evaluate(pb, test, averaging),
          per_instance_cross_entropy(pw, test), per_instance_cross_entropy(pb, test)};
}

void bias_recovery_and_direction() {
  const auto start = Clock::now();
  const WeightScheme schemes[] = {WeightScheme::kF1Proportional, WeightScheme::kInverseCe,
                                  WeightScheme::kInverseMd, WeightScheme::kSoftmax};

  std::size_t argmin_hits = 0, argmin_total = 0;
  std::string argmin_detail;
  std::vector<double> margins;
  std::vector<SeedOutcome> outcomes;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corpus = generate_synthetic(bias_config(seed));
    const auto dirty = contamination(corpus, experiment_config(seed, schemes[0]));
    const auto worst = static_cast<std::size_t>(
        std::max_element(dirty.begin(), dirty.end()) - dirty.begin());
    std::string ranks;
    for (const auto scheme : schemes) {
      const auto config = experiment_config(seed, scheme);
      const auto ensemble = train_wel(corpus.dataset, config);
      const auto& w = ensemble.weights();
      const auto lightest =
          static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
      // 1 = smallest weight.
      std::size_t rank = 1;
      for (double v : w) rank += v < w[worst];
      argmin_hits += lightest == worst;
      ++argmin_total;
      ranks += fmt("%s%s:%zu", ranks.empty() ? "" : ",",
                   std::string(weight_scheme_name(scheme)).c_str(), rank);
      if (scheme == WeightScheme::kF1Proportional) {
        outcomes.push_back(run_seed(corpus, ensemble, config));
        margins.push_back(outcomes.back().base.ce - outcomes.back().wel.ce);
      }
    }
    argmin_detail += fmt(" seed%llu[v%zu %zu flips; rank %s]",
                         static_cast<unsigned long long>(seed), worst + 1, dirty[worst],
                         ranks.c_str());
  }
  const double elapsed = seconds_since(start);
  const double min_margin = *std::min_element(margins.begin(), margins.end());
  const double mean_margin = std::accumulate(margins.begin(), margins.end(), 0.0) / 5.0;
  verdict(argmin_hits == argmin_total && elapsed < 60.0, "bias-recovery-a-smallest-weight",
          fmt("most-contaminated variant got the smallest weight in %zu/%zu (seed, scheme) cases;",
              argmin_hits, argmin_total) +
              argmin_detail + fmt("; %.1f s (limit 60 s)", elapsed));
  std::string per_seed;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    per_seed += fmt(" seed%zu %.4f<=%.4f", s + 1, outcomes[s].wel.ce, outcomes[s].base.ce);
  }
  verdict(min_margin >= 0.0 && elapsed < 60.0, "bias-recovery-b-holdout-soft-ce",
          fmt("WEL vs CE-only test soft-CE:%s; margin mean %.4f, min %.4f (expected > 0 at all 5 "
              "seeds)",
              per_seed.c_str(), mean_margin, min_margin));

  // Directional ordering, pooled over the five seeds.
  double f1w = 0, f1b = 0, cew = 0, ceb = 0, mdw = 0, mdb = 0;
  std::vector<double> pooled_w, pooled_b;
  for (const auto& o : outcomes) {
    f1w += o.wel.f1 / 5.0;
    f1b += o.base.f1 / 5.0;
    cew += o.wel.ce / 5.0;
    ceb += o.base.ce / 5.0;
    mdw += o.wel.md / 5.0;
    mdb += o.base.md / 5.0;
    pooled_w.insert(pooled_w.end(), o.wel_ce.begin(), o.wel_ce.end());
    pooled_b.insert(pooled_b.end(), o.base_ce.begin(), o.base_ce.end());
  }
  const auto big_pool = paired_t_test(pooled_b, pooled_w);

  std::vector<double> small_w, small_b;
  double small_cew = 0, small_ceb = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corpus = generate_synthetic(small_pool_config(seed));
    const auto config = experiment_config(seed, WeightScheme::kF1Proportional);
    const auto o = run_seed(corpus, train_wel(corpus.dataset, config), config);
    small_cew += o.wel.ce / 5.0;
    small_ceb += o.base.ce / 5.0;
    small_w.insert(small_w.end(), o.wel_ce.begin(), o.wel_ce.end());
    small_b.insert(small_b.end(), o.base_ce.begin(), o.base_ce.end());
  }
  const auto small_pool = paired_t_test(small_b, small_w);
  const bool ordering = f1w >= f1b && cew <= ceb && mdw <= mdb;
  const bool significance = big_pool.p_greater < 0.05 && small_pool.p_greater >= 0.05;
  verdict(ordering && significance, "directional-sanity",
          fmt("5 annotators: F1 %.4f>=%.4f, CE %.4f<=%.4f, MD %.4f<=%.4f, one-sided p(CE gain)=%.3g; "
              "3-annotator pool: CE %.4f vs %.4f, one-sided p(CE gain)=%.3g (must be >= 0.05)",
              f1w, f1b, cew, ceb, mdw, mdb, big_pool.p_greater, small_cew, small_ceb,
              small_pool.p_greater));
}

// 8 ---------------------------------------------------------------------

void ingest_fidelity() {
  std::vector<std::string> problems;

  // ArMIS-shaped file written to disk format and read back through the preset.
  const auto shaped = generate_synthetic(armis_like_config(1)).dataset;
  std::stringstream buffer;
  write_jsonl(buffer, shaped);
  LoadOptions armis;
  armis.preset = &find_preset("armis");
  const auto loaded = load_dataset(buffer, armis);
  const auto s = summarize(loaded);
  for (const auto& d : compare_to_reference(s, armis.preset->reference)) problems.push_back(d);
  const std::string armis_line =
      fmt("ArMIS-shaped train=%zu, per-instance %zu..%zu", s.by_split.count("train")
                                                                ? s.by_split.at("train")
                                                                : std::size_t{0},
          s.min_per_instance, s.max_per_instance);
  if (!s.by_split.count("train") || s.by_split.at("train") != 657 || s.min_per_instance != 3 || s.max_per_instance != 3) {
    problems.push_back(armis_line);
  }

  struct Expected {
    const char* file;
    const char* preset;
    std::size_t n, annotations, annotators;
  };
  const Expected minis[] = {{"armis_mini.jsonl", "armis", 10, 30, 3},
                            {"convabuse_mini.jsonl", "convabuse", 8, 23, 5},
                            {"hsbrexit_mini.csv", "hsbrexit", 6, 36, 6}};
  for (const auto& m : minis) {
    LoadOptions o;
    o.preset = &find_preset(m.preset);
    if (auto f = format_from_extension(m.file)) o.format = *f;
    const auto mini = summarize(load_dataset(kFixtures / m.file, o));
    if (mini.n != m.n || mini.annotations != m.annotations || mini.total_annotators != m.annotators) {
      problems.push_back(fmt("%s: n=%zu annotations=%zu annotators=%zu", m.file, mini.n,
                             mini.annotations, mini.total_annotators));
    }
  }

  std::string mapping;
  for (int score = -3; score <= 1; ++score) {
    const auto label = binarize_convabuse(score);
    const auto expected = score < 0 ? kOffensive : kNonOffensive;
    if (label != expected) problems.push_back(fmt("score %d misbinarized", score));
    mapping += fmt("%s%d->%s", mapping.empty() ? "" : ",", score, std::string(label).c_str());
  }

  std::string detail = armis_line + "; minis ok; " + mapping;
  for (const auto& p : problems) detail += "; " + p;
  verdict(problems.empty(), "ingest-fidelity", detail);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  agreement_oracles();
  fixed_points();
  fleiss_worked_example();
  gradient_check();
  wel_contract();
  bias_recovery_and_direction();
  ingest_fidelity();
  std::printf("%d criteria failed; total %.1f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
