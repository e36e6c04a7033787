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

// Dataset loading, validation and the text adaptations applied before
// training. File formats are described in FORMAT.md.

#ifndef ANNOBIAS_INGEST_HPP_
#define ANNOBIAS_INGEST_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "annobias/core.hpp"

namespace annobias {

enum class DataFormat { kJsonl, kCsv };

std::string_view format_name(DataFormat format);
// Throws kInvalidArgument.
DataFormat parse_format(std::string_view name);
// ".jsonl"/".json" and ".csv"; nullopt otherwise.
std::optional<DataFormat> format_from_extension(const std::filesystem::path& path);

// Steps run in declaration order.
struct PreprocessConfig {
  bool strip_html = false;
  bool strip_urls = false;
  bool strip_mentions = false;
  bool strip_punctuation = false;
  bool strip_digits = false;
  bool strip_non_ascii = false;
  bool collapse_whitespace = true;

  // Every step on except strip_non_ascii.
  static PreprocessConfig standard();
  nlohmann::json to_json() const;
};

// Idempotent: the step sequence is repeated until the text stops changing.
std::string preprocess(std::string_view text, const PreprocessConfig& config);

struct Turn {
  std::string speaker;
  std::string text;
};

inline constexpr std::string_view kTurnSeparator = " [SEP] ";

// "user: hi [SEP] agent: hello". Throws kEmptyDialogue on no turns.
std::string flatten_dialogue(std::span<const Turn> turns);

inline constexpr std::string_view kOffensive = "offensive";
inline constexpr std::string_view kNonOffensive = "non-offensive";

// score < 0 -> "offensive", score >= 0 -> "non-offensive". Throws
// kScoreOutOfRange unless score is an integer in [-3, 1].
std::string_view binarize_convabuse(double score);
LabelSet convabuse_labels();
// Numeric-mode dataset -> categorical dataset over convabuse_labels().
AnnotatedDataset binarize_convabuse(const AnnotatedDataset& numeric);

// Reference statistics of a published corpus.
struct ReferenceStats {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::size_t total_annotators = 0;
  std::size_t min_per_instance = 0;
  std::size_t max_per_instance = 0;
};

struct Preset {
  std::string name;
  std::vector<std::string> labels;
  std::optional<std::string> positive;
  std::string language;
  PreprocessConfig preprocess;
  // Scores on the -3..1 scale, binarized at load time.
  bool numeric_scores = false;
  ReferenceStats reference;
};

std::span<const Preset> presets();
// Throws kInvalidArgument naming the known presets.
const Preset& find_preset(std::string_view name);

struct LoadOptions {
  DataFormat format = DataFormat::kJsonl;
  const Preset* preset = nullptr;
  // Explicit label set; overrides the preset. Without either, the distinct
  // labels in the file are used in sorted order.
  std::optional<std::vector<std::string>> labels;
  std::optional<std::string> positive;
  // Keep numeric scores instead of binarizing (convabuse preset) or read
  // every label as a number.
  bool numeric = false;
  // Applied to every text when set.
  std::optional<PreprocessConfig> preprocess;
};

// Throws kParseError (with line number), kDuplicateId, kUnknownSplit,
// kScoreOutOfRange, kEmptyDialogue and the dataset validation errors.
AnnotatedDataset load_dataset(std::istream& in, const LoadOptions& options);
AnnotatedDataset load_dataset(const std::filesystem::path& path,
                              const LoadOptions& options);

// Canonical JSON Lines; load_dataset reads it back unchanged.
void write_jsonl(std::ostream& out, const AnnotatedDataset& dataset);
// Long CSV: one row per annotation. Throws kInvalidArgument for numeric data.
void write_csv(std::ostream& out, const AnnotatedDataset& dataset);

struct ValidationSummary {
  std::size_t n = 0;
  std::map<std::string, std::size_t> by_split;  // split name -> count
  std::size_t min_per_instance = 0;
  std::size_t max_per_instance = 0;
  std::size_t total_annotators = 0;
  std::size_t unannotated = 0;
  std::size_t annotations = 0;
  std::map<std::string, std::size_t> languages;
  // Categorical only: label name -> annotation count.
  std::map<std::string, std::size_t> label_counts;
  bool numeric = false;
  bool iterative = false;

  nlohmann::json to_json() const;
};

ValidationSummary summarize(const AnnotatedDataset& dataset);

// Human-readable differences from the preset's reference statistics.
std::vector<std::string> compare_to_reference(const ValidationSummary& summary,
                                              const ReferenceStats& reference);

}  // namespace annobias

#endif  // ANNOBIAS_INGEST_HPP_
