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

// annobias command-line interface.
//
// Exit codes: 0 success, 2 usage error, 3 data error (including warnings
// under --strict), 4 internal error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "annobias/agreement.hpp"
#include "annobias/divergence.hpp"
#include "annobias/eval.hpp"
#include "annobias/ingest.hpp"
#include "annobias/kernels.hpp"
#include "annobias/metadata.hpp"
#include "annobias/report.hpp"
#include "annobias/synthetic.hpp"
#include "annobias/wel.hpp"

namespace {

using annobias::Errc;
using annobias::Error;
using annobias::Report;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return kExitUsage;
    case Errc::kInvariantViolation: return kExitInternal;
    default: return kExitData;
  }
}

// Flags shared by every command that reads a dataset.
struct DataFlags {
  std::string path;
  std::string format;
  std::string preset;
  std::vector<std::string> labels;
  std::string positive;
  bool numeric = false;
};

struct CommonFlags {
  std::string out;
  std::string csv;
  bool strict = false;
  int threads = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool positional = true) {
  if (positional) {
    cmd->add_option("dataset", f.path, "Dataset file (JSON Lines or CSV)")->required();
  }
  cmd->add_option("--format", f.format, "Input format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--preset", f.preset, "Corpus preset")
      ->check(CLI::IsMember({"armis", "convabuse", "hsbrexit", "mdagreement"}));
  cmd->add_option("--labels", f.labels, "Label set in component order")->delimiter(',');
  cmd->add_option("--positive", f.positive, "Positive label");
  cmd->add_flag("--numeric", f.numeric, "Keep numeric scores (numeric label mode)");
}

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "Write the output here instead of stdout");
  cmd->add_option("--csv", f.csv, "Also write the metric blocks as a CSV table");
  cmd->add_flag("--strict", f.strict, "Exit with status 3 on warnings or degenerate values");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
}

annobias::LoadOptions load_options(const DataFlags& f) {
  annobias::LoadOptions o;
  if (!f.format.empty()) {
    o.format = annobias::parse_format(f.format);
  } else if (auto ext = annobias::format_from_extension(f.path)) {
    o.format = *ext;
  }
  if (!f.preset.empty()) o.preset = &annobias::find_preset(f.preset);
  if (!f.labels.empty()) o.labels = f.labels;
  if (!f.positive.empty()) o.positive = f.positive;
  o.numeric = f.numeric;
  return o;
}

annobias::AnnotatedDataset load(const DataFlags& f,
                                std::optional<annobias::PreprocessConfig> pre = std::nullopt) {
  auto options = load_options(f);
  options.preprocess = pre;
  return annobias::load_dataset(std::filesystem::path(f.path), options);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path + "'");
  return in;
}

void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::cout << content;
    std::cout.flush();
  } else {
    annobias::write_file_atomic(out, content);
  }
}

// name,value,degenerate; nested detail fields are left to the JSON report.
std::string metric_table(const json& report) {
  std::ostringstream out;
  out << "name,value,degenerate\n";
  for (const auto& m : report["metrics"]) {
    out << m["name"].get<std::string>() << ',';
    if (m["value"].is_number()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", m["value"].get<double>());
      out << buf;
    }
    out << ',' << (m["degenerate"].get<bool>() ? "true" : "false") << '\n';
  }
  return out.str();
}

int finish(const Report& report, const CommonFlags& common) {
  const json j = report.to_json();
  emit(j.dump(2) + "\n", common.out);
  if (!common.csv.empty()) annobias::write_file_atomic(common.csv, metric_table(j));
  if (common.strict && (report.any_warning() || report.any_degenerate())) {
    std::cerr << "annobias: --strict: report carries warnings or degenerate values\n";
    return kExitData;
  }
  return kExitOk;
}

json agreement_details(const annobias::AgreementReport& r) {
  return {{"observed", r.observed},
          {"expected", r.expected},
          {"n_items", r.n_items},
          {"n_excluded", r.n_excluded}};
}

// Pair with the most co-annotated instances; ties go to the smallest ids.
std::pair<std::string, std::string> busiest_pair(const annobias::AnnotatedDataset& ds) {
  std::map<std::pair<std::string, std::string>, std::size_t> shared;
  for (const auto& inst : ds.instances()) {
    std::vector<std::string> ids;
    for (const auto& a : inst.annotations) ids.push_back(a.annotator_id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) ++shared[{ids[i], ids[j]}];
    }
  }
  if (shared.empty()) {
    throw Error(Errc::kEmptyInput, "no two annotators share an instance");
  }
  auto best = shared.begin();
  for (auto it = shared.begin(); it != shared.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

struct AgreementFlags {
  std::string metric = "all";
  std::vector<std::string> annotators;
};

void add_agreement(Report& report, const annobias::AnnotatedDataset& ds,
                   const AgreementFlags& f) {
  ds.require_categorical();
  const bool all = f.metric == "all";
  if (all || f.metric == "cohen") {
    std::pair<std::string, std::string> pair;
    if (f.annotators.size() == 2) {
      pair = {f.annotators[0], f.annotators[1]};
    } else if (f.annotators.empty()) {
      pair = busiest_pair(ds);
    } else {
      throw Error(Errc::kInvalidArgument, "--annotators takes exactly two ids");
    }
    std::size_t excluded = 0;
    const auto pairs =
        annobias::PairedLabels::from_dataset(ds, pair.first, pair.second, &excluded);
    const auto r = annobias::cohen_kappa(pairs);
    json details = agreement_details(r);
    details["n_excluded"] = excluded;
    details["annotators"] = {pair.first, pair.second};
    details["eq2_chance_agreement"] = r.expected;
    report.add_metric("eq1_cohen_kappa", r.coefficient, r.degenerate, details);
  }
  if (all || f.metric == "fleiss") {
    try {
      std::size_t excluded = 0;
      const auto counts = annobias::CountMatrix::from_dataset(ds, &excluded);
      auto r = annobias::fleiss_kappa(counts);
      json details = agreement_details(r);
      details["n_excluded"] = excluded;
      details["raters_per_item"] = counts.raters();
      report.add_metric("eq3_fleiss_kappa", r.coefficient, r.degenerate, details);
    } catch (const Error& e) {
      if (!all || e.code() != Errc::kRowSumMismatch) throw;
      report.add_warning(std::string("eq3_fleiss_kappa skipped: ") + e.what());
    }
  }
  if (all || f.metric == "krippendorff") {
    const auto r = annobias::krippendorff_alpha(ds);
    json details = agreement_details(r);
    details["distance"] = "nominal";
    report.add_metric("eq4_krippendorff_alpha", r.coefficient, r.degenerate, details);
  }
}

struct MetadataFlags {
  std::string profiles;
  std::string embeddings;
  std::vector<std::string> entropy;
  std::vector<std::string> gap;
  std::vector<std::string> distance;
  bool iteration_variance = false;
  std::string gap_level = "annotation";
  bool log2 = false;
};

std::vector<std::string> dimensions_of(const annobias::AnnotatedDataset& ds) {
  std::set<std::string> dims;
  for (const auto& p : ds.profiles()) {
    for (const auto& [d, _] : p.groups) dims.insert(d);
  }
  return {dims.begin(), dims.end()};
}

std::vector<std::string> groups_of(const annobias::AnnotatedDataset& ds,
                                   const std::string& dimension) {
  std::set<std::string> groups;
  for (const auto& p : ds.profiles()) {
    auto it = p.groups.find(dimension);
    if (it != p.groups.end()) groups.insert(it->second);
  }
  return {groups.begin(), groups.end()};
}

void add_metadata(Report& report, const annobias::AnnotatedDataset& ds,
                  const MetadataFlags& f, const std::string& positive_flag) {
  const bool pick_all = f.entropy.empty() && f.gap.empty() && f.distance.empty() &&
                        !f.iteration_variance;
  const auto dims = dimensions_of(ds);
  const auto entropy_dims = pick_all ? dims : f.entropy;
  const auto gap_dims = pick_all ? dims : f.gap;
  const auto distance_dims = pick_all ? dims : f.distance;

  if (!ds.profiles().empty() || !f.entropy.empty()) {
    for (const auto& dim : entropy_dims) {
      std::size_t unassigned = 0;
      const auto shares = annobias::group_shares(ds, dim, &unassigned);
      const double h = annobias::pool_entropy(
          ds, dim, f.log2 ? annobias::LogBase::kTwo : annobias::LogBase::kNatural);
      report.add_metric("eq10_pool_entropy", h, false,
                        {{"dimension", dim},
                         {"log_base", f.log2 ? "2" : "e"},
                         {"shares", shares},
                         {"unassigned_annotations", unassigned}});
    }
  }

  if (!gap_dims.empty()) {
    std::optional<std::size_t> positive;
    if (!positive_flag.empty()) {
      positive = ds.label_set().require_index(positive_flag);
    } else {
      positive = ds.label_set().positive();
    }
    if (!positive) {
      const std::string msg = "eq7_demographic_gap needs --positive for a non-binary label set";
      if (!pick_all) throw Error(Errc::kInvalidArgument, msg);
      report.add_warning(msg);
    } else {
      const auto level = f.gap_level == "aggregated" ? annobias::GapLevel::kAggregated
                                                     : annobias::GapLevel::kAnnotation;
      for (const auto& dim : gap_dims) {
        const auto groups = groups_of(ds, dim);
        if (groups.empty()) {
          throw Error(Errc::kDimensionMissing, "no profile carries dimension '" + dim + "'");
        }
        for (const auto& g : groups) {
          const annobias::GroupRef ref{dim, g};
          const double signed_gap = annobias::signed_demographic_gap(ds, ref, *positive, level);
          const auto slice = annobias::group_slice(ds, ref);
          report.add_metric("eq7_demographic_gap", std::abs(signed_gap), false,
                            {{"dimension", dim},
                             {"group", g},
                             {"positive_label", ds.label_set().name(*positive)},
                             {"level", f.gap_level},
                             {"signed", signed_gap},
                             {"group_instances", slice.instance_ids.size()},
                             {"group_annotations", slice.annotation_count}});
        }
      }
    }
  }

  if (!distance_dims.empty()) {
    std::map<std::string, annobias::CulturalEmbedding> supplied;
    if (!f.embeddings.empty()) {
      auto in = open_input(f.embeddings);
      supplied = annobias::read_embeddings(in);
    }
    for (const auto& dim : distance_dims) {
      const auto groups = groups_of(ds, dim);
      std::vector<annobias::CulturalEmbedding> vectors;
      std::vector<std::string> sources;
      for (const auto& g : groups) {
        auto it = supplied.find(g);
        if (it != supplied.end()) {
          vectors.push_back(it->second);
          sources.push_back("supplied");
        } else {
          vectors.push_back(annobias::default_group_embedding(ds, {dim, g}));
          sources.push_back("default-label-distribution");
        }
      }
      for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
          const bool stand_in = sources[i] != "supplied" || sources[j] != "supplied";
          report.add_metric("eq9_cultural_distance",
                            annobias::cultural_distance(vectors[i], vectors[j]), false,
                            {{"dimension", dim},
                             {"groups", {groups[i], groups[j]}},
                             {"embedding_sources", {sources[i], sources[j]}},
                             {"stand_in_embedding", stand_in}});
        }
      }
    }
  }

  if (f.iteration_variance || (pick_all && ds.iterative())) {
    for (int t : annobias::iterations(ds)) {
      report.add_metric("eq11_iteration_variance", annobias::iteration_variance(ds, t),
                        false,
                        {{"iteration", t},
                         {"variance", ds.mode() == annobias::LabelMode::kNumeric
                                          ? "population"
                                          : "gini-impurity"}});
    }
  }
}

annobias::AnnotatedDataset attach_profiles(const annobias::AnnotatedDataset& ds,
                                           const std::string& path, Report& report) {
  if (path.empty()) return ds;
  auto in = open_input(path);
  auto profiles = annobias::read_profiles_csv(in);
  report.set_section("profiles_fingerprint", annobias::file_fingerprint(path));
  return ds.with_profiles(std::move(profiles));
}

std::vector<std::string> invocation(int argc, char** argv) {
  std::vector<std::string> out = {"annobias"};
  for (int i = 1; i < argc; ++i) out.emplace_back(argv[i]);
  return out;
}

annobias::PredictionSet read_predictions(const std::string& path) {
  auto in = open_input(path);
  return annobias::read_prediction_set(in);
}

std::vector<std::string> annotated_ids(const annobias::AnnotatedDataset& ds) {
  std::vector<std::string> ids;
  for (const auto& inst : ds.instances()) ids.push_back(inst.id);
  return ids;
}

annobias::PreprocessConfig preprocess_from_json(const json& j) {
  annobias::PreprocessConfig c;
  c.strip_html = j.at("strip_html");
  c.strip_urls = j.at("strip_urls");
  c.strip_mentions = j.at("strip_mentions");
  c.strip_punctuation = j.at("strip_punctuation");
  c.strip_digits = j.at("strip_digits");
  c.strip_non_ascii = j.at("strip_non_ascii");
  c.collapse_whitespace = j.at("collapse_whitespace");
  return c;
}

std::optional<annobias::PreprocessConfig> training_preprocess(const DataFlags& data,
                                                              const std::string& mode) {
  if (mode == "none") return std::nullopt;
  if (mode == "standard") return annobias::PreprocessConfig::standard();
  // "auto": the preset's steps when a preset is given.
  if (!data.preset.empty()) return annobias::find_preset(data.preset).preprocess;
  return std::nullopt;
}

annobias::AnnotatedDataset select_split(const annobias::AnnotatedDataset& ds,
                                        const std::string& split) {
  if (split == "all") return ds;
  if (split == "auto") {
    return ds.has_split(annobias::Split::kTest) ? ds.subset(annobias::Split::kTest) : ds;
  }
  return ds.subset(annobias::parse_split(split));
}

void add_eval_metrics(Report& report, const std::string& prefix,
                      const annobias::EvalReport& e, annobias::F1Averaging averaging) {
  static const char* kAveraging[] = {"binary", "micro", "macro"};
  report.add_metric("table2_f1", e.f1, e.f1_undefined,
                    {{"model", prefix},
                     {"averaging", kAveraging[static_cast<int>(averaging)]},
                     {"n", e.n},
                     {"n_excluded", e.n_excluded}});
  report.add_metric("table2_soft_ce", e.ce, false,
                    {{"model", prefix}, {"epsilon", annobias::kCrossEntropyEpsilon}, {"n", e.n}});
  report.add_metric("table2_manhattan", e.md, false, {{"model", prefix}, {"n", e.n}});
}

annobias::F1Averaging parse_averaging(const std::string& name,
                                      const annobias::LabelSet& labels) {
  if (name == "binary") return annobias::F1Averaging::kBinary;
  if (name == "micro") return annobias::F1Averaging::kMicro;
  if (name == "macro") return annobias::F1Averaging::kMacro;
  return annobias::default_averaging(labels);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annobias: annotation bias analytics and Weak Ensemble Learning"};
  app.set_version_flag("--version", std::string(annobias::kToolVersion));
  app.require_subcommand(1);

  DataFlags data;
  CommonFlags common;

  // agreement
  AgreementFlags agreement_flags;
  auto* agreement = app.add_subcommand("agreement", "Cohen's kappa, Fleiss' kappa, Krippendorff's alpha");
  add_data_flags(agreement, data);
  add_common_flags(agreement, common);
  agreement->add_option("--metric", agreement_flags.metric, "Coefficient to compute")
      ->check(CLI::IsMember({"cohen", "fleiss", "krippendorff", "all"}));
  agreement->add_option("--annotators", agreement_flags.annotators,
                        "Two annotator ids for Cohen's kappa")
      ->delimiter(',');

  // divergence
  std::string preds_a, preds_b, pairing_path, delta_form = "vector";
  auto* divergence = app.add_subcommand("divergence", "Disagreement rate, model-human delta, multilingual disagreement");
  add_data_flags(divergence, data, false);
  divergence->add_option("--dataset", data.path, "Dataset for the model-human delta");
  add_common_flags(divergence, common);
  divergence->add_option("--a", preds_a, "First prediction set")->required();
  divergence->add_option("--b", preds_b, "Second prediction set");
  divergence->add_option("--pairing", pairing_path, "CSV first_id,second_id aligning --a with --b");
  divergence->add_option("--delta-form", delta_form, "Model-human delta representation")
      ->check(CLI::IsMember({"vector", "positive"}));

  // metadata
  MetadataFlags meta_flags;
  auto* metadata = app.add_subcommand("metadata", "Demographic gap, cultural distance, pool entropy, iteration variance");
  add_data_flags(metadata, data);
  add_common_flags(metadata, common);
  metadata->add_option("--profiles", meta_flags.profiles, "Annotator profile CSV");
  metadata->add_option("--embeddings", meta_flags.embeddings, "Group embeddings (JSON Lines)");
  metadata->add_option("--entropy", meta_flags.entropy, "Pool entropy over a dimension")->delimiter(',');
  metadata->add_option("--gap", meta_flags.gap, "Demographic gap for every group of a dimension")->delimiter(',');
  metadata->add_option("--distance", meta_flags.distance, "Cultural distance between groups of a dimension")->delimiter(',');
  metadata->add_flag("--iteration-variance", meta_flags.iteration_variance, "Variance per iteration");
  metadata->add_option("--gap-level", meta_flags.gap_level, "Read y(x) per annotation or per aggregated label")
      ->check(CLI::IsMember({"annotation", "aggregated"}));
  metadata->add_flag("--log2", meta_flags.log2, "Entropy in bits");

  // wel
  auto* wel = app.add_subcommand("wel", "Weak Ensemble Learning");
  wel->require_subcommand(1);
  annobias::WelConfig wel_config;
  std::string scheme = "f1", model_dir, preprocess_mode = "auto", split = "auto", averaging = "default";
  std::string bias_path, eval_predictions;
  double lambda = 0.0;
  bool with_baseline = false;

  auto* wel_train = wel->add_subcommand("train", "Train an ensemble");
  add_data_flags(wel_train, data);
  add_common_flags(wel_train, common);
  wel_train->add_option("--model", model_dir, "Output directory for the ensemble")->required();
  wel_train->add_option("--k", wel_config.k, "Number of label variants")->check(CLI::PositiveNumber);
  wel_train->add_option("--seed", wel_config.seed, "Master seed");
  wel_train->add_option("--weight-scheme", scheme, "Weighting of learners")
      ->check(CLI::IsMember({"f1", "inv-ce", "inv-md", "softmax"}));
  wel_train->add_option("--temperature", wel_config.temperature, "Softmax temperature");
  wel_train->add_option("--carve-fraction", wel_config.holdout.carve_fraction,
                        "Holdout share carved from train when there is no dev split");
  wel_train->add_flag("!--no-dev", wel_config.holdout.prefer_dev, "Ignore the dev split");
  wel_train->add_option("--learner", wel_config.learner.kind, "Weak learner")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, annobias::LearnerKind>{
              {"hashed-linear", annobias::LearnerKind::kHashedLinear},
              {"majority-class", annobias::LearnerKind::kMajorityClass}},
          CLI::ignore_case));
  wel_train->add_option("--epochs", wel_config.learner.epochs);
  wel_train->add_option("--learning-rate", wel_config.learner.learning_rate);
  wel_train->add_option("--l2", wel_config.learner.l2);
  wel_train->add_option("--batch-size", wel_config.learner.batch_size, "0 = full batch");
  wel_train->add_option("--hash-dims", wel_config.learner.hash_dims);
  wel_train->add_option("--ngram-min", wel_config.learner.ngram_min);
  wel_train->add_option("--ngram-max", wel_config.learner.ngram_max);
  wel_train->add_option("--char-ngram-min", wel_config.learner.char_ngram_min);
  wel_train->add_option("--char-ngram-max", wel_config.learner.char_ngram_max);
  wel_train->add_option("--preprocess", preprocess_mode, "Text preprocessing")
      ->check(CLI::IsMember({"auto", "none", "standard"}));

  auto* wel_predict = wel->add_subcommand("predict", "Predict soft labels (JSON Lines)");
  add_data_flags(wel_predict, data);
  add_common_flags(wel_predict, common);
  wel_predict->add_option("--model", model_dir, "Ensemble directory")->required();
  wel_predict->add_option("--lambda", lambda, "Debiasing strength")->check(CLI::NonNegativeNumber);
  wel_predict->add_option("--bias", bias_path, "Bias components (JSON Lines)");

  auto* wel_eval = wel->add_subcommand("eval", "F1, soft cross-entropy and Manhattan distance");
  add_data_flags(wel_eval, data);
  add_common_flags(wel_eval, common);
  wel_eval->add_option("--model", model_dir, "Ensemble directory");
  wel_eval->add_option("--predictions", eval_predictions, "Evaluate a prediction set instead");
  wel_eval->add_option("--split", split, "Split to evaluate (auto = test when present)")
      ->check(CLI::IsMember({"auto", "all", "train", "dev", "test"}));
  wel_eval->add_option("--averaging", averaging, "F1 averaging")
      ->check(CLI::IsMember({"default", "binary", "micro", "macro"}));
  wel_eval->add_flag("--baseline", with_baseline,
                     "Also train the majority-vote (CE-only) baseline and test the difference");

  std::vector<double> grid_temperatures = {0.5, 1.0, 2.0};
  std::string grid_select = "ce", grid_split = "dev", grid_save;
  auto* wel_grid = wel->add_subcommand("grid", "Compare weighting schemes and temperatures on one split");
  add_data_flags(wel_grid, data);
  add_common_flags(wel_grid, common);
  wel_grid->add_option("--model", model_dir, "Ensemble directory")->required();
  wel_grid->add_option("--temperatures", grid_temperatures, "Softmax temperatures")
      ->delimiter(',');
  wel_grid->add_option("--split", grid_split, "Split to score the grid on")
      ->check(CLI::IsMember({"all", "train", "dev", "test"}));
  wel_grid->add_option("--select", grid_select, "Criterion for the best point")
      ->check(CLI::IsMember({"f1", "ce", "md"}));
  wel_grid->add_option("--averaging", averaging, "F1 averaging")
      ->check(CLI::IsMember({"default", "binary", "micro", "macro"}));
  wel_grid->add_option("--save", grid_save, "Write the ensemble reweighted by the best point here");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate or convert datasets");
  ingest->require_subcommand(1);
  auto* ingest_validate = ingest->add_subcommand("validate", "Summarize and check a dataset");
  add_data_flags(ingest_validate, data);
  add_common_flags(ingest_validate, common);
  std::string convert_to = "jsonl", convert_preprocess = "none";
  auto* ingest_convert = ingest->add_subcommand("convert", "Rewrite a dataset in canonical form");
  add_data_flags(ingest_convert, data);
  add_common_flags(ingest_convert, common);
  ingest_convert->add_option("--to", convert_to, "Output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  ingest_convert->add_option("--preprocess", convert_preprocess, "Text preprocessing")
      ->check(CLI::IsMember({"auto", "none", "standard"}));

  // report
  bool report_all = false;
  MetadataFlags report_meta;
  auto* report_cmd = app.add_subcommand("report", "Dataset audit across all detection metrics");
  add_data_flags(report_cmd, data);
  add_common_flags(report_cmd, common);
  report_cmd->add_flag("--all", report_all, "Run every applicable metric")->required();
  report_cmd->add_option("--profiles", report_meta.profiles, "Annotator profile CSV");
  report_cmd->add_option("--embeddings", report_meta.embeddings, "Group embeddings (JSON Lines)");
  report_cmd->add_option("--a", preds_a, "Prediction set for the model-human delta");
  report_cmd->add_option("--b", preds_b, "Second prediction set for the disagreement rate");
  report_cmd->add_option("--pairing", pairing_path, "Pairing CSV for the multilingual disagreement");

  // synth
  annobias::SyntheticConfig synth_config;
  bool synth_armis = false;
  std::string synth_profiles;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic dataset");
  add_common_flags(synth, common);
  synth->add_option("--seed", synth_config.seed);
  synth->add_option("--n-train", synth_config.n_train);
  synth->add_option("--n-dev", synth_config.n_dev);
  synth->add_option("--n-test", synth_config.n_test);
  synth->add_option("--honest", synth_config.honest_annotators);
  synth->add_option("--adversaries", synth_config.adversarial_annotators);
  synth->add_option("--honest-noise", synth_config.honest_noise);
  synth->add_option("--flip", synth_config.adversary_flip);
  synth->add_option("--cue-rate", synth_config.cue_rate);
  synth->add_flag("--armis-like", synth_armis, "943 instances, 3 annotators, Arabic script");
  synth->add_option("--profiles-out", synth_profiles, "Also write the annotator profile CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    annobias::kernels::set_thread_count(common.threads);
    const auto argv_echo = invocation(argc, argv);

    if (*agreement) {
      Report report("agreement", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      const auto ds = load(data);
      report.add_exclusion("unannotated_instances", ds.unannotated_count());
      add_agreement(report, ds, agreement_flags);
      return finish(report, common);
    }

    if (*divergence) {
      Report report("divergence", argv_echo);
      const auto a = read_predictions(preds_a);
      json inputs = {{"a", annobias::file_fingerprint(preds_a)}};
      if (!preds_b.empty()) {
        const auto b = read_predictions(preds_b);
        inputs["b"] = annobias::file_fingerprint(preds_b);
        if (!pairing_path.empty()) {
          auto in = open_input(pairing_path);
          const auto pairing = annobias::read_pairing_csv(in);
          inputs["pairing"] = annobias::file_fingerprint(pairing_path);
          const auto r = annobias::multilingual_disagreement(a, b, pairing);
          report.add_metric("eq8_multilingual_disagreement", r.value, false,
                            {{"n_compared", r.n_compared},
                             {"per_label_disagreements", r.per_label_disagreements},
                             {"languages", {a.language().value_or(""), b.language().value_or("")}}});
        } else {
          std::vector<std::string> over;
          if (!data.path.empty()) {
            over = annotated_ids(load(data));
          } else {
            over = a.ids();
          }
          const auto r = annobias::disagreement_rate(a, b, over);
          report.add_metric("eq5_disagreement_rate", r.value, false,
                            {{"n_compared", r.n_compared},
                             {"per_label_disagreements", r.per_label_disagreements},
                             {"models", {a.model_id(), b.model_id()}}});
        }
      }
      if (!data.path.empty()) {
        report.set_fingerprint(annobias::file_fingerprint(data.path));
        const auto ds = load(data);
        const auto form = delta_form == "positive" ? annobias::DeltaForm::kPositiveClass
                                                   : annobias::DeltaForm::kVector;
        const auto r = annobias::model_human_delta(a, ds, form);
        report.add_metric("eq6_model_human_delta", r.value, false,
                          {{"form", delta_form},
                           {"n_compared", r.n_compared},
                           {"n_excluded", r.n_excluded}});
        report.add_exclusion("unannotated_instances", r.n_excluded);
      } else if (preds_b.empty()) {
        throw Error(Errc::kInvalidArgument, "divergence needs --b or --dataset");
      }
      report.set_section("inputs", inputs);
      return finish(report, common);
    }

    if (*metadata) {
      Report report("metadata", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      auto ds = attach_profiles(load(data), meta_flags.profiles, report);
      report.add_exclusion("unannotated_instances", ds.unannotated_count());
      add_metadata(report, ds, meta_flags, data.positive);
      return finish(report, common);
    }

    if (*wel_train) {
      Report report("wel train", argv_echo);
      const std::string fingerprint = annobias::file_fingerprint(data.path);
      report.set_fingerprint(fingerprint);
      const auto pre = training_preprocess(data, preprocess_mode);
      const auto ds = load(data, pre);
      wel_config.scheme = annobias::parse_weight_scheme(scheme);
      wel_config.threads = common.threads;
      auto ensemble = annobias::train_wel(ds, wel_config);
      ensemble.provenance["dataset_fingerprint"] = fingerprint;
      ensemble.provenance["preprocess"] = pre ? pre->to_json() : json(nullptr);
      annobias::save_ensemble(ensemble, model_dir);
      json scores = json::array();
      for (const auto& s : ensemble.holdout_scores()) {
        scores.push_back({{"f1", s.f1}, {"ce", s.ce}, {"md", s.md}});
      }
      report.add_metric("eq15_wel_weights", 1.0, ensemble.degenerate_weights(),
                        {{"weight_scheme", scheme},
                         {"weights", ensemble.weights()},
                         {"holdout_scores", scores},
                         {"variant_seeds", ensemble.variant_seeds()},
                         {"holdout_source", ensemble.provenance["holdout_source"]}});
      if (ensemble.degenerate_weights()) {
        report.add_warning("holdout scores carried no signal; weights fell back to uniform");
      }
      report.add_exclusion("unannotated_instances", ds.unannotated_count());
      report.set_section("manifest", annobias::ensemble_manifest(ensemble));
      return finish(report, common);
    }

    if (*wel_predict) {
      if (bias_path.empty() && lambda != 0.0) {
        throw Error(Errc::kInvalidArgument, "--lambda needs --bias");
      }
      const auto ensemble = annobias::load_ensemble(model_dir);
      std::optional<annobias::PreprocessConfig> pre;
      if (auto it = ensemble.provenance.find("preprocess");
          it != ensemble.provenance.end() && !it->is_null()) {
        pre = preprocess_from_json(*it);
      }
      const auto ds = load(data, pre);
      if (!(ds.label_set().labels() == ensemble.label_set().labels())) {
        throw Error(Errc::kDimensionMismatch, "dataset label set differs from the ensemble's");
      }
      auto preds = annobias::predict_dataset(ensemble, ds, "wel");
      if (!bias_path.empty()) {
        auto in = open_input(bias_path);
        annobias::DebiasConfig debias{lambda, annobias::read_bias_components(in)};
        annobias::PredictionSet adjusted("wel-debiased");
        std::size_t fallbacks = 0;
        for (const auto& [id, p] : preds.outputs()) {
          auto r = annobias::debias_output(p.probs(), debias, id);
          fallbacks += r.fallback_uniform ? 1 : 0;
          adjusted.add(id, std::move(r.adjusted));
        }
        if (fallbacks > 0) {
          std::cerr << "annobias: " << fallbacks
                    << " debiased outputs fell back to uniform\n";
          if (common.strict) {
            std::ostringstream out;
            annobias::write_prediction_set(out, adjusted);
            emit(out.str(), common.out);
            return kExitData;
          }
        }
        preds = std::move(adjusted);
      }
      std::ostringstream out;
      annobias::write_prediction_set(out, preds);
      emit(out.str(), common.out);
      return kExitOk;
    }

    if (*wel_grid) {
      Report report("wel grid", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      const auto ensemble = annobias::load_ensemble(model_dir);
      std::optional<annobias::PreprocessConfig> pre;
      if (auto it = ensemble.provenance.find("preprocess");
          it != ensemble.provenance.end() && !it->is_null()) {
        pre = preprocess_from_json(*it);
      }
      const auto target = select_split(load(data, pre), grid_split);
      const auto avg = parse_averaging(averaging, target.label_set());
      const auto grid = annobias::weight_grid(ensemble, target, grid_temperatures, avg);
      auto better = [&](const annobias::EvalReport& a, const annobias::EvalReport& b) {
        if (grid_select == "f1") return a.f1 > b.f1;
        if (grid_select == "md") return a.md < b.md;
        return a.ce < b.ce;
      };
      std::size_t best = 0;
      json points = json::array();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& g = grid[i];
        points.push_back({{"weight_scheme", annobias::weight_scheme_name(g.scheme)},
                          {"temperature", g.temperature},
                          {"weights", g.weights},
                          {"degenerate_weights", g.degenerate},
                          {"f1", g.metrics.f1},
                          {"soft_ce", g.metrics.ce},
                          {"manhattan", g.metrics.md}});
        if (better(g.metrics, grid[best].metrics)) best = i;
      }
      const auto& chosen = grid[best];
      report.set_section("grid", {{"split", grid_split},
                                  {"select", grid_select},
                                  {"best", best},
                                  {"points", points}});
      report.add_metric("eq15_wel_weights", 1.0, chosen.degenerate,
                        {{"weight_scheme", annobias::weight_scheme_name(chosen.scheme)},
                         {"temperature", chosen.temperature},
                         {"weights", chosen.weights}});
      add_eval_metrics(report, "wel", chosen.metrics, avg);
      report.add_exclusion("unannotated_instances", chosen.metrics.n_excluded);
      if (!grid_save.empty()) {
        annobias::save_ensemble(annobias::reweight(ensemble, chosen.scheme, chosen.temperature),
                                grid_save);
      }
      return finish(report, common);
    }

    if (*wel_eval) {
      Report report("wel eval", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      std::optional<annobias::PreprocessConfig> pre;
      std::optional<annobias::WelEnsemble> ensemble;
      if (!model_dir.empty()) {
        ensemble.emplace(annobias::load_ensemble(model_dir));
        if (auto it = ensemble->provenance.find("preprocess");
            it != ensemble->provenance.end() && !it->is_null()) {
          pre = preprocess_from_json(*it);
        }
      } else if (eval_predictions.empty()) {
        throw Error(Errc::kInvalidArgument, "wel eval needs --model or --predictions");
      }
      const auto full = load(data, pre);
      const auto target = select_split(full, split);
      const auto avg = parse_averaging(averaging, target.label_set());
      annobias::PredictionSet preds =
          ensemble ? annobias::predict_dataset(*ensemble, target, "wel")
                   : read_predictions(eval_predictions);
      const auto e = annobias::evaluate(preds, target, avg);
      add_eval_metrics(report, ensemble ? "wel" : preds.model_id(), e, avg);
      report.add_exclusion("unannotated_instances", e.n_excluded);
      if (with_baseline) {
        if (!ensemble) throw Error(Errc::kInvalidArgument, "--baseline needs --model");
        const auto base = annobias::train_majority_vote_baseline(full, ensemble->config());
        const auto base_preds = annobias::predict_dataset(*base, target, "ce-only");
        add_eval_metrics(report, "ce-only", annobias::evaluate(base_preds, target, avg), avg);
        const auto ce_w = annobias::per_instance_cross_entropy(preds, target);
        const auto ce_b = annobias::per_instance_cross_entropy(base_preds, target);
        const auto md_w = annobias::per_instance_manhattan(preds, target);
        const auto md_b = annobias::per_instance_manhattan(base_preds, target);
        const auto t_ce = annobias::paired_t_test(ce_w, ce_b);
        const auto t_md = annobias::paired_t_test(md_w, md_b);
        report.set_section("paired_tests",
                           {{"soft_ce", {{"mean_difference", t_ce.mean_difference},
                                         {"t", t_ce.t_statistic},
                                         {"p_value", t_ce.p_value},
                                         {"p_greater", t_ce.p_greater},
                                         {"n", t_ce.n}}},
                            {"manhattan", {{"mean_difference", t_md.mean_difference},
                                           {"t", t_md.t_statistic},
                                           {"p_value", t_md.p_value},
                                           {"p_greater", t_md.p_greater},
                                           {"n", t_md.n}}}});
      }
      return finish(report, common);
    }

    if (*ingest_validate) {
      Report report("ingest validate", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      const auto ds = load(data);
      const auto summary = annobias::summarize(ds);
      report.set_section("summary", summary.to_json());
      report.set_section("label_set", ds.label_set().labels());
      report.add_exclusion("unannotated_instances", summary.unannotated);
      if (!data.preset.empty()) {
        const auto& preset = annobias::find_preset(data.preset);
        const auto diffs = annobias::compare_to_reference(summary, preset.reference);
        report.set_section("reference", {{"preset", preset.name},
                                         {"train", preset.reference.train},
                                         {"dev", preset.reference.dev},
                                         {"test", preset.reference.test},
                                         {"total_annotators", preset.reference.total_annotators},
                                         {"min_per_instance", preset.reference.min_per_instance},
                                         {"max_per_instance", preset.reference.max_per_instance},
                                         {"matches", diffs.empty()}});
        for (const auto& d : diffs) report.add_warning("differs from " + preset.name + " reference: " + d);
      }
      return finish(report, common);
    }

    if (*ingest_convert) {
      if (common.out.empty()) throw Error(Errc::kInvalidArgument, "ingest convert needs --out");
      Report report("ingest convert", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      const auto pre = training_preprocess(data, convert_preprocess);
      const auto ds = load(data, pre);
      std::ostringstream out;
      if (convert_to == "csv") {
        annobias::write_csv(out, ds);
      } else {
        annobias::write_jsonl(out, ds);
      }
      annobias::write_file_atomic(common.out, out.str());
      report.set_section("summary", annobias::summarize(ds).to_json());
      report.set_section("output", {{"path", common.out},
                                    {"format", convert_to},
                                    {"fingerprint", annobias::content_fingerprint(out.str())},
                                    {"preprocess", pre ? pre->to_json() : json(nullptr)}});
      std::cout << report.to_json().dump(2) << "\n";
      return common.strict && report.any_warning() ? kExitData : kExitOk;
    }

    if (*report_cmd) {
      Report report("report --all", argv_echo);
      report.set_fingerprint(annobias::file_fingerprint(data.path));
      auto ds = attach_profiles(load(data), report_meta.profiles, report);
      report.add_exclusion("unannotated_instances", ds.unannotated_count());
      report.set_section("summary", annobias::summarize(ds).to_json());
      if (ds.mode() == annobias::LabelMode::kCategorical) {
        add_agreement(report, ds, AgreementFlags{});
      } else {
        report.add_warning("numeric labels: agreement metrics skipped");
      }
      if (!preds_a.empty()) {
        const auto a = read_predictions(preds_a);
        if (!preds_b.empty()) {
          const auto b = read_predictions(preds_b);
          if (!pairing_path.empty()) {
            auto in = open_input(pairing_path);
            const auto r = annobias::multilingual_disagreement(a, b, annobias::read_pairing_csv(in));
            report.add_metric("eq8_multilingual_disagreement", r.value, false,
                              {{"n_compared", r.n_compared}});
          } else {
            const auto r = annobias::disagreement_rate(a, b, annotated_ids(ds));
            report.add_metric("eq5_disagreement_rate", r.value, false,
                              {{"n_compared", r.n_compared}});
          }
        }
        const auto r = annobias::model_human_delta(a, ds);
        report.add_metric("eq6_model_human_delta", r.value, false,
                          {{"form", "vector"}, {"n_compared", r.n_compared}});
      }
      if (!ds.profiles().empty() || ds.iterative()) {
        if (ds.mode() == annobias::LabelMode::kCategorical || ds.iterative()) {
          MetadataFlags f = report_meta;
          if (ds.mode() == annobias::LabelMode::kNumeric) f.iteration_variance = true;
          add_metadata(report, ds, f, data.positive);
        }
      }
      return finish(report, common);
    }

    if (*synth) {
      const auto seed = synth_config.seed;
      annobias::SyntheticConfig c = synth_armis ? annobias::armis_like_config(seed) : synth_config;
      const auto corpus = annobias::generate_synthetic(c);
      std::ostringstream out;
      annobias::write_jsonl(out, corpus.dataset);
      emit(out.str(), common.out);
      if (!synth_profiles.empty()) {
        std::ostringstream profiles;
        annobias::write_profiles_csv(profiles, corpus.dataset.profiles());
        annobias::write_file_atomic(synth_profiles, profiles.str());
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "annobias: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "annobias: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
