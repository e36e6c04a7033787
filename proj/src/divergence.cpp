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

#include "annobias/divergence.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "csv.hpp"

namespace annobias {

void PredictionSet::add(std::string instance_id, SoftLabel output) {
  if (num_labels_ != 0 && output.size() != num_labels_) {
    throw Error(Errc::kDimensionMismatch,
                "prediction for '" + instance_id + "' has " +
                    std::to_string(output.size()) + " components, expected " +
                    std::to_string(num_labels_));
  }
  num_labels_ = output.size();
  auto [it, inserted] = outputs_.emplace(std::move(instance_id), std::move(output));
  if (!inserted) {
    throw Error(Errc::kDuplicateId,
                "duplicate prediction for '" + it->first + "'");
  }
}

const SoftLabel* PredictionSet::find(const std::string& instance_id) const {
  auto it = outputs_.find(instance_id);
  return it == outputs_.end() ? nullptr : &it->second;
}

const SoftLabel& PredictionSet::at(const std::string& instance_id) const {
  if (const SoftLabel* p = find(instance_id)) return *p;
  throw Error(Errc::kCoverageGap, "model '" + model_id_ +
                                      "' has no prediction for '" +
                                      instance_id + "'");
}

std::vector<std::string> PredictionSet::ids() const {
  std::vector<std::string> out;
  out.reserve(outputs_.size());
  for (const auto& [id, _] : outputs_) out.push_back(id);
  return out;
}

void require_coverage(const PredictionSet& set,
                      std::span<const std::string> ids) {
  std::vector<std::string> missing;
  for (const auto& id : ids) {
    if (!set.find(id)) missing.push_back(id);
  }
  if (missing.empty()) return;
  std::string listed;
  for (std::size_t i = 0; i < missing.size() && i < 5; ++i) {
    if (i) listed += ", ";
    listed += missing[i];
  }
  if (missing.size() > 5) listed += ", ...";
  throw Error(Errc::kCoverageGap,
              "model '" + set.model_id() + "' is missing " +
                  std::to_string(missing.size()) + " instance(s): " + listed);
}

namespace {

void require_same_width(const PredictionSet& a, const PredictionSet& b) {
  if (a.size() && b.size() && a.num_labels() != b.num_labels()) {
    throw Error(Errc::kDimensionMismatch,
                "prediction sets disagree on the number of labels");
  }
}

DivergenceReport rate_over(const PredictionSet& first,
                           const PredictionSet& second,
                           std::span<const std::string> first_ids,
                           std::span<const std::string> second_ids,
                           TieBreak rule, Execution exec) {
  std::vector<std::size_t> a(first_ids.size());
  std::vector<std::size_t> b(second_ids.size());
  for (std::size_t i = 0; i < first_ids.size(); ++i) {
    a[i] = first.at(first_ids[i]).argmax(rule);
    b[i] = second.at(second_ids[i]).argmax(rule);
  }
  const std::size_t k = first.num_labels();
  const auto tallies = kernels::mismatch_tallies(a, b, k, exec);
  DivergenceReport report;
  report.n_compared = a.size();
  report.value = a.empty() ? 0.0
                           : static_cast<double>(tallies.mismatches) /
                                 static_cast<double>(a.size());
  report.per_label_disagreements.assign(tallies.by_label.begin(),
                                        tallies.by_label.end());
  return report;
}

}  // namespace

DivergenceReport disagreement_rate(const PredictionSet& first,
                                   const PredictionSet& second,
                                   std::span<const std::string> over,
                                   TieBreak rule, Execution exec) {
  require_same_width(first, second);
  require_coverage(first, over);
  require_coverage(second, over);
  return rate_over(first, second, over, over, rule, exec);
}

DivergenceReport disagreement_rate(const PredictionSet& first,
                                   const PredictionSet& second, TieBreak rule,
                                   Execution exec) {
  const auto ids = first.ids();
  return disagreement_rate(first, second, ids, rule, exec);
}

DivergenceReport model_human_delta(const PredictionSet& predictions,
                                   const AnnotatedDataset& dataset,
                                   DeltaForm form, Execution exec) {
  dataset.require_categorical();
  const LabelSet& labels = dataset.label_set();
  std::vector<const Instance*> compared;
  std::vector<std::string> ids;
  DivergenceReport report;
  for (const Instance& inst : dataset.instances()) {
    if (inst.annotations.empty()) {
      ++report.n_excluded;
      continue;
    }
    compared.push_back(&inst);
    ids.push_back(inst.id);
  }
  require_coverage(predictions, ids);
  if (predictions.size() && predictions.num_labels() != labels.size()) {
    throw Error(Errc::kDimensionMismatch,
                "predictions do not match the dataset label set");
  }
  if (form == DeltaForm::kPositiveClass && !labels.positive()) {
    throw Error(Errc::kInvalidArgument,
                "positive-class delta needs a declared positive label");
  }
  const std::size_t positive = labels.positive().value_or(0);
  const auto per_item = kernels::map_items(
      compared.size(),
      [&](std::size_t i) {
        const SoftLabel human = empirical_soft_label(*compared[i], labels);
        const SoftLabel& model = predictions.at(compared[i]->id);
        if (form == DeltaForm::kPositiveClass) {
          return std::abs(model[positive] - human[positive]);
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < human.size(); ++k) {
          sum += std::abs(model[k] - human[k]);
        }
        return sum / static_cast<double>(human.size());
      },
      exec);
  report.n_compared = compared.size();
  report.value = compared.empty() ? 0.0
                                  : kernels::ordered_sum(per_item) /
                                        static_cast<double>(compared.size());
  return report;
}

DivergenceReport multilingual_disagreement(const PredictionSet& first_language,
                                           const PredictionSet& second_language,
                                           const InstancePairing& pairing,
                                           TieBreak rule, Execution exec) {
  require_same_width(first_language, second_language);
  std::set<std::string> left;
  std::set<std::string> right;
  std::vector<std::string> first_ids;
  std::vector<std::string> second_ids;
  for (const auto& [a, b] : pairing) {
    if (!left.insert(a).second || !right.insert(b).second) {
      throw Error(Errc::kPairingNotBijective,
                  "pair (" + a + ", " + b + ") repeats an id");
    }
    if (!first_language.find(a)) {
      throw Error(Errc::kPairingNotBijective,
                  "dangling id '" + a + "' in the first language");
    }
    if (!second_language.find(b)) {
      throw Error(Errc::kPairingNotBijective,
                  "dangling id '" + b + "' in the second language");
    }
    first_ids.push_back(a);
    second_ids.push_back(b);
  }
  return rate_over(first_language, second_language, first_ids, second_ids,
                   rule, exec);
}

// --- JSON Lines -------------------------------------------------------------

PredictionSet read_prediction_set(std::istream& in) {
  std::optional<PredictionSet> set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
      const auto model = record.at("model_id").get<std::string>();
      const auto id = record.at("instance_id").get<std::string>();
      auto probs = record.at("probs").get<std::vector<double>>();
      std::optional<std::string> lang;
      if (auto it = record.find("lang"); it != record.end() && !it->is_null()) {
        lang = it->get<std::string>();
      }
      if (!set) {
        set.emplace(model, lang);
      } else if (set->model_id() != model) {
        throw Error(Errc::kParseError, where + "mixed model ids '" +
                                           set->model_id() + "' and '" +
                                           model + "'");
      }
      set->add(id, SoftLabel::from_probs(std::move(probs)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, where + e.what());
    } catch (const Error& e) {
      if (e.code() == Errc::kParseError) throw;
      throw Error(Errc::kParseError, where + e.what());
    }
  }
  if (!set) throw Error(Errc::kParseError, "prediction file is empty");
  return std::move(*set);
}

void write_prediction_set(std::ostream& out, const PredictionSet& set) {
  for (const auto& [id, probs] : set.outputs()) {
    nlohmann::json record;
    record["instance_id"] = id;
    record["model_id"] = set.model_id();
    if (set.language()) record["lang"] = *set.language();
    record["probs"] = std::vector<double>(probs.probs().begin(),
                                          probs.probs().end());
    out << record.dump() << '\n';
  }
}

InstancePairing read_pairing_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw Error(Errc::kParseError, "pairing file is empty");
  const auto cols = csv::columns(rows[0], {"first_id", "second_id"});
  InstancePairing pairing;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() <= std::max(cols[0], cols[1])) {
      throw Error(Errc::kParseError,
                  "line " + std::to_string(rows[r].line) + ": short row");
    }
    pairing.emplace_back(f[cols[0]], f[cols[1]]);
  }
  return pairing;
}

}  // namespace annobias
