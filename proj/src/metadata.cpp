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

#include "annobias/metadata.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "csv.hpp"

namespace annobias {

namespace {

bool in_group(const AnnotatedDataset& dataset, const Annotation& ann,
              const GroupRef& group) {
  const AnnotatorProfile* profile = dataset.profile(ann.annotator_id);
  if (!profile) return false;
  auto it = profile->groups.find(group.dimension);
  return it != profile->groups.end() && it->second == group.group;
}

[[noreturn]] void unknown_group(const GroupRef& group) {
  throw Error(Errc::kUnknownGroup, "no annotation by group '" + group.group +
                                       "' in dimension '" + group.dimension +
                                       "'");
}

}  // namespace

GroupSlice group_slice(const AnnotatedDataset& dataset, const GroupRef& group) {
  GroupSlice slice;
  slice.group_id = group.group;
  for (const Instance& inst : dataset.instances()) {
    bool touched = false;
    for (const Annotation& ann : inst.annotations) {
      if (in_group(dataset, ann, group)) {
        ++slice.annotation_count;
        touched = true;
      }
    }
    if (touched) slice.instance_ids.push_back(inst.id);
  }
  if (slice.annotation_count == 0) unknown_group(group);
  return slice;
}

double signed_demographic_gap(const AnnotatedDataset& dataset,
                              const GroupRef& group, std::size_t positive_label,
                              GapLevel level) {
  dataset.require_categorical();
  if (positive_label >= dataset.label_set().size()) {
    throw Error(Errc::kUnknownLabel, "positive label index out of range");
  }
  const LabelSet& labels = dataset.label_set();
  std::size_t group_hits = 0;
  std::size_t group_total = 0;
  std::size_t all_hits = 0;
  std::size_t all_total = 0;
  for (const Instance& inst : dataset.instances()) {
    if (level == GapLevel::kAnnotation) {
      for (const Annotation& ann : inst.annotations) {
        const bool hit = ann.label() == positive_label;
        all_hits += hit;
        ++all_total;
        if (in_group(dataset, ann, group)) {
          group_hits += hit;
          ++group_total;
        }
      }
      continue;
    }
    if (inst.annotations.empty()) continue;
    const bool hit = majority_label(inst, labels) == positive_label;
    all_hits += hit;
    ++all_total;
    const bool touched =
        std::any_of(inst.annotations.begin(), inst.annotations.end(),
                    [&](const Annotation& a) { return in_group(dataset, a, group); });
    if (touched) {
      group_hits += hit;
      ++group_total;
    }
  }
  if (group_total == 0) unknown_group(group);
  return static_cast<double>(group_hits) / static_cast<double>(group_total) -
         static_cast<double>(all_hits) / static_cast<double>(all_total);
}

double demographic_gap(const AnnotatedDataset& dataset, const GroupRef& group,
                       std::size_t positive_label, GapLevel level) {
  return std::abs(signed_demographic_gap(dataset, group, positive_label, level));
}

std::map<std::string, double> group_shares(const AnnotatedDataset& dataset,
                                           const std::string& dimension,
                                           std::size_t* unassigned) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  std::size_t missing = 0;
  for (const Instance& inst : dataset.instances()) {
    for (const Annotation& ann : inst.annotations) {
      const AnnotatorProfile* profile = dataset.profile(ann.annotator_id);
      const auto it = profile ? profile->groups.find(dimension)
                              : std::map<std::string, std::string>::const_iterator{};
      if (!profile || it == profile->groups.end()) {
        ++missing;
        continue;
      }
      ++counts[it->second];
      ++total;
    }
  }
  if (unassigned) *unassigned = missing;
  if (total == 0) {
    throw Error(Errc::kDimensionMissing,
                "no annotation comes from an annotator with dimension '" +
                    dimension + "'");
  }
  std::map<std::string, double> shares;
  for (const auto& [group, n] : counts) {
    shares[group] = static_cast<double>(n) / static_cast<double>(total);
  }
  return shares;
}

double pool_entropy(const AnnotatedDataset& dataset,
                    const std::string& dimension, LogBase base) {
  const auto shares = group_shares(dataset, dimension);
  double h = 0.0;
  for (const auto& [_, p] : shares) {
    if (p > 0.0) h -= p * std::log(p);
  }
  if (base == LogBase::kTwo) h /= std::log(2.0);
  // -0.0 for a single group
  return h == 0.0 ? 0.0 : h;
}

std::vector<int> iterations(const AnnotatedDataset& dataset) {
  if (!dataset.iterative()) {
    throw Error(Errc::kNotIterative, "dataset has no iteration indices");
  }
  std::set<int> seen;
  for (const Instance& inst : dataset.instances()) seen.insert(*inst.iteration);
  return {seen.begin(), seen.end()};
}

double iteration_variance(const AnnotatedDataset& dataset, int iteration) {
  if (!dataset.iterative()) {
    throw Error(Errc::kNotIterative, "dataset has no iteration indices");
  }
  const bool numeric = dataset.mode() == LabelMode::kNumeric;
  double sum = 0.0;
  std::size_t items = 0;
  for (const Instance& inst : dataset.instances()) {
    if (inst.iteration != iteration || inst.annotations.empty()) continue;
    const double m = static_cast<double>(inst.annotations.size());
    double spread = 0.0;
    if (numeric) {
      double mean = 0.0;
      for (const Annotation& a : inst.annotations) mean += a.score();
      mean /= m;
      for (const Annotation& a : inst.annotations) {
        const double d = a.score() - mean;
        spread += d * d;
      }
      spread /= m;
    } else {
      double purity = 0.0;
      for (std::size_t c : label_counts(inst, dataset.label_set())) {
        const double p = static_cast<double>(c) / m;
        purity += p * p;
      }
      spread = std::max(0.0, 1.0 - purity);
    }
    sum += spread;
    ++items;
  }
  if (items == 0) {
    throw Error(Errc::kEmptyIteration,
                "iteration " + std::to_string(iteration) +
                    " has no annotated items");
  }
  return sum / static_cast<double>(items);
}

CulturalEmbedding::CulturalEmbedding(std::vector<double> vector)
    : vector_(std::move(vector)) {
  if (vector_.empty()) {
    throw Error(Errc::kInvalidArgument, "empty embedding");
  }
  for (double v : vector_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::kInvalidArgument, "non-finite embedding component");
    }
  }
}

double cultural_distance(const CulturalEmbedding& a,
                         const CulturalEmbedding& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(Errc::kDimensionMismatch,
                "embedding dimensions " + std::to_string(a.dimension()) +
                    " and " + std::to_string(b.dimension()) + " differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const double d = a.vector()[i] - b.vector()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

CulturalEmbedding default_group_embedding(const AnnotatedDataset& dataset,
                                          const GroupRef& group) {
  dataset.require_categorical();
  std::vector<double> dist(dataset.label_set().size(), 0.0);
  std::size_t total = 0;
  for (const Instance& inst : dataset.instances()) {
    for (const Annotation& ann : inst.annotations) {
      if (!in_group(dataset, ann, group)) continue;
      dist[ann.label()] += 1.0;
      ++total;
    }
  }
  if (total == 0) unknown_group(group);
  for (double& v : dist) v /= static_cast<double>(total);
  return CulturalEmbedding(std::move(dist));
}

// --- files ------------------------------------------------------------------

std::vector<AnnotatorProfile> read_profiles_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw Error(Errc::kParseError, "profile table is empty");
  const auto cols = csv::columns(rows[0], {"annotator_id", "dimension", "group"});
  std::vector<AnnotatorProfile> profiles;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto where = "line " + std::to_string(rows[r].line) + ": ";
    if (f.size() <= *std::max_element(cols.begin(), cols.end())) {
      throw Error(Errc::kParseError, where + "short row");
    }
    const std::string& annotator = f[cols[0]];
    if (annotator.empty() || f[cols[1]].empty()) {
      throw Error(Errc::kParseError, where + "empty annotator or dimension");
    }
    auto [it, fresh] = index.emplace(annotator, profiles.size());
    if (fresh) profiles.push_back(AnnotatorProfile{annotator, {}});
    auto& groups = profiles[it->second].groups;
    if (!groups.emplace(f[cols[1]], f[cols[2]]).second) {
      throw Error(Errc::kDuplicateId, where + "annotator '" + annotator +
                                          "' repeats dimension '" +
                                          f[cols[1]] + "'");
    }
  }
  return profiles;
}

void write_profiles_csv(std::ostream& out,
                        const std::vector<AnnotatorProfile>& profiles) {
  csv::write_row(out, {"annotator_id", "dimension", "group"});
  for (const auto& p : profiles) {
    for (const auto& [dimension, group] : p.groups) {
      csv::write_row(out, {p.annotator_id, dimension, group});
    }
  }
}

std::map<std::string, CulturalEmbedding> read_embeddings(std::istream& in) {
  std::map<std::string, CulturalEmbedding> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    try {
      const auto record = nlohmann::json::parse(line);
      auto group = record.at("group").get<std::string>();
      CulturalEmbedding embedding(record.at("vector").get<std::vector<double>>());
      if (!out.emplace(group, std::move(embedding)).second) {
        throw Error(Errc::kDuplicateId, where + "group '" + group + "' repeats");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, where + e.what());
    }
  }
  return out;
}

}  // namespace annobias
