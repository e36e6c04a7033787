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

#include "annobias/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>
#include <variant>

#include "csv.hpp"

namespace annobias {

std::string_view format_name(DataFormat format) {
  return format == DataFormat::kCsv ? "csv" : "jsonl";
}

DataFormat parse_format(std::string_view name) {
  if (name == "jsonl") return DataFormat::kJsonl;
  if (name == "csv") return DataFormat::kCsv;
  throw Error(Errc::kInvalidArgument,
              "unknown format '" + std::string(name) + "' (jsonl|csv)");
}

std::optional<DataFormat> format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json") return DataFormat::kJsonl;
  if (ext == ".csv") return DataFormat::kCsv;
  return std::nullopt;
}

// --- preprocessing ----------------------------------------------------------

PreprocessConfig PreprocessConfig::standard() {
  PreprocessConfig c;
  c.strip_html = c.strip_urls = c.strip_mentions = true;
  c.strip_punctuation = c.strip_digits = true;
  c.strip_non_ascii = false;
  c.collapse_whitespace = true;
  return c;
}

nlohmann::json PreprocessConfig::to_json() const {
  return {{"strip_html", strip_html},
          {"strip_urls", strip_urls},
          {"strip_mentions", strip_mentions},
          {"strip_punctuation", strip_punctuation},
          {"strip_digits", strip_digits},
          {"strip_non_ascii", strip_non_ascii},
          {"collapse_whitespace", collapse_whitespace}};
}

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_word(unsigned char c) { return is_alpha(c) || is_digit(c) || c == '_'; }
bool is_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

bool starts_with_nocase(std::string_view text, std::size_t at, std::string_view prefix) {
  if (text.size() - at < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    auto c = static_cast<unsigned char>(text[at + i]);
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    if (c != static_cast<unsigned char>(prefix[i])) return false;
  }
  return true;
}

// Tags: '<' + [A-Za-z/!?] ... '>' with no '<' inside.
std::string strip_html(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '<' && i + 1 < in.size()) {
      const auto next = static_cast<unsigned char>(in[i + 1]);
      if (is_alpha(next) || next == '/' || next == '!' || next == '?') {
        const std::size_t close = in.find_first_of("<>", i + 1);
        if (close != std::string_view::npos && in[close] == '>') {
          out += ' ';
          i = close + 1;
          continue;
        }
      }
    }
    out += in[i++];
  }
  return out;
}

std::string strip_urls(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (starts_with_nocase(in, i, "http://") || starts_with_nocase(in, i, "https://") ||
        starts_with_nocase(in, i, "www.")) {
      while (i < in.size() && !is_space(static_cast<unsigned char>(in[i]))) ++i;
      out += ' ';
      continue;
    }
    out += in[i++];
  }
  return out;
}

std::string strip_mentions(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '@' && i + 1 < in.size() &&
        is_word(static_cast<unsigned char>(in[i + 1]))) {
      ++i;
      while (i < in.size() && is_word(static_cast<unsigned char>(in[i]))) ++i;
      out += ' ';
      continue;
    }
    out += in[i++];
  }
  return out;
}

template <typename Pred>
std::string replace_bytes(std::string_view in, Pred pred, bool with_space) {
  std::string out;
  out.reserve(in.size());
  for (char ch : in) {
    if (pred(static_cast<unsigned char>(ch))) {
      if (with_space) out += ' ';
    } else {
      out += ch;
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending = false;
  for (char ch : in) {
    if (is_space(static_cast<unsigned char>(ch))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += ch;
  }
  return out;
}

std::string preprocess_once(std::string text, const PreprocessConfig& c) {
  if (c.strip_html) text = strip_html(text);
  if (c.strip_urls) text = strip_urls(text);
  if (c.strip_mentions) text = strip_mentions(text);
  if (c.strip_punctuation) text = replace_bytes(text, is_punct, true);
  if (c.strip_digits) text = replace_bytes(text, is_digit, false);
  // Whole UTF-8 sequences go since every byte of one is >= 0x80.
  if (c.strip_non_ascii) {
    text = replace_bytes(text, [](unsigned char b) { return b >= 0x80; }, false);
  }
  if (c.collapse_whitespace) text = collapse_whitespace(text);
  return text;
}

}  // namespace

std::string preprocess(std::string_view text, const PreprocessConfig& config) {
  // A removal can join fragments into a new match ("http@u://x"), so run to
  // a fixed point. Every pass that changes the text either shrinks it or
  // removes all punctuation, so this terminates.
  std::string current(text);
  for (;;) {
    std::string next = preprocess_once(current, config);
    if (next == current) return next;
    current = std::move(next);
  }
}

std::string flatten_dialogue(std::span<const Turn> turns) {
  if (turns.empty()) throw Error(Errc::kEmptyDialogue, "dialogue has no turns");
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) out += kTurnSeparator;
    out += turns[i].speaker;
    out += ": ";
    out += turns[i].text;
  }
  return out;
}

// --- ConvAbuse ---------------------------------------------------------------

std::string_view binarize_convabuse(double score) {
  if (!std::isfinite(score) || score != std::floor(score) || score < -3.0 ||
      score > 1.0) {
    throw Error(Errc::kScoreOutOfRange,
                "score " + nlohmann::json(score).dump() + " outside {-3..1}");
  }
  return score < 0.0 ? kOffensive : kNonOffensive;
}

LabelSet convabuse_labels() {
  return LabelSet({std::string(kNonOffensive), std::string(kOffensive)},
                  std::string(kOffensive));
}

AnnotatedDataset binarize_convabuse(const AnnotatedDataset& numeric) {
  if (numeric.mode() != LabelMode::kNumeric) {
    throw Error(Errc::kInvalidArgument, "dataset is already categorical");
  }
  LabelSet labels = convabuse_labels();
  std::vector<Instance> out = numeric.instances();
  for (Instance& inst : out) {
    for (Annotation& a : inst.annotations) {
      a = Annotation::categorical(a.annotator_id,
                                  labels.require_index(binarize_convabuse(a.score())));
    }
  }
  return AnnotatedDataset(std::move(labels), std::move(out), numeric.profiles());
}

// --- presets -----------------------------------------------------------------

std::span<const Preset> presets() {
  static const std::vector<Preset> kPresets = [] {
    PreprocessConfig standard = PreprocessConfig::standard();
    std::vector<Preset> p;
    p.push_back({"armis", {"0", "1"}, "1", "ar", standard, false,
                 {657, 141, 145, 3, 3, 3}});
    p.push_back({"convabuse", {std::string(kNonOffensive), std::string(kOffensive)},
                 std::string(kOffensive), "en", standard, true,
                 {2398, 812, 840, 8, 2, 7}});
    p.push_back({"hsbrexit", {"0", "1"}, "1", "en", standard, false,
                 {784, 168, 168, 6, 6, 6}});
    p.push_back({"mdagreement", {"0", "1"}, "1", "en", standard, false,
                 {6592, 1104, 3057, 670, 5, 5}});
    return p;
  }();
  return kPresets;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  throw Error(Errc::kInvalidArgument,
              "unknown preset '" + std::string(name) +
                  "' (armis|convabuse|hsbrexit|mdagreement)");
}

// --- loading ------------------------------------------------------------------

namespace {

using RawLabel = std::variant<std::string, double>;

struct RawAnnotation {
  std::string annotator;
  RawLabel label;
};

struct RawRecord {
  std::size_t line = 0;
  std::string id;
  std::string text;
  std::string language;
  Split split = Split::kUnspecified;
  std::vector<RawAnnotation> annotations;
  std::optional<int> iteration;
  std::string meta_json;
};

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(Errc::kParseError, "line " + std::to_string(line) + ": " + what);
}

std::string number_text(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  return nlohmann::json(v).dump();
}

std::optional<double> as_number(const RawLabel& label) {
  if (const double* d = std::get_if<double>(&label)) return *d;
  const std::string& s = std::get<std::string>(label);
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return v;
}

std::string as_text(const RawLabel& label) {
  if (const double* d = std::get_if<double>(&label)) return number_text(*d);
  return std::get<std::string>(label);
}

std::string text_field(const nlohmann::json& record, const char* key,
                       std::size_t line, bool required) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) parse_error(line, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) parse_error(line, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

RawRecord parse_json_record(const std::string& text, std::size_t line) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(line, e.what());
  }
  if (!record.is_object()) parse_error(line, "record is not a JSON object");
  RawRecord r;
  r.line = line;
  r.id = text_field(record, "id", line, true);
  if (r.id.empty()) parse_error(line, "empty id");
  r.language = text_field(record, "lang", line, false);
  r.split = parse_split(text_field(record, "split", line, false));
  r.text = text_field(record, "text", line, false);

  if (auto turns = record.find("turns"); turns != record.end() && !turns->is_null()) {
    if (!turns->is_array()) parse_error(line, "'turns' must be an array");
    std::vector<Turn> parsed;
    for (const auto& t : *turns) {
      if (!t.is_object()) parse_error(line, "turn is not an object");
      parsed.push_back({text_field(t, "speaker", line, true),
                        text_field(t, "text", line, true)});
    }
    if (r.text.empty()) r.text = flatten_dialogue(parsed);
  } else if (!record.contains("text")) {
    parse_error(line, "missing field 'text'");
  }

  if (auto anns = record.find("annotations"); anns != record.end() && !anns->is_null()) {
    if (!anns->is_array()) parse_error(line, "'annotations' must be an array");
    for (const auto& a : *anns) {
      if (!a.is_object()) parse_error(line, "annotation is not an object");
      RawAnnotation ra;
      ra.annotator = text_field(a, "annotator", line, true);
      auto label = a.find("label");
      if (label == a.end()) parse_error(line, "annotation without 'label'");
      if (label->is_number()) {
        ra.label = label->get<double>();
      } else if (label->is_string()) {
        ra.label = label->get<std::string>();
      } else {
        parse_error(line, "label must be a string or a number");
      }
      r.annotations.push_back(std::move(ra));
    }
  }
  if (auto it = record.find("iteration"); it != record.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      parse_error(line, "'iteration' must be a non-negative integer");
    }
    r.iteration = it->get<int>();
  }
  if (auto meta = record.find("meta"); meta != record.end() && !meta->is_null()) {
    if (!meta->is_object()) parse_error(line, "'meta' must be an object");
    r.meta_json = meta->dump();
  }
  return r;
}

std::vector<RawRecord> read_jsonl(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_json_record(line, line_no));
  }
  return records;
}

std::vector<RawRecord> read_csv_long(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) return {};
  const auto& header = rows.front().fields;
  const auto cols = csv::columns(rows.front(), {"id", "text", "lang", "split",
                                          "annotator_id", "label"});
  std::optional<std::size_t> iteration_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "iteration") iteration_col = c;
  }
  std::vector<RawRecord> records;
  std::unordered_set<std::string> closed;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      parse_error(row.line, "expected " + std::to_string(header.size()) +
                                " fields, got " + std::to_string(row.fields.size()));
    }
    const auto& f = row.fields;
    const std::string& id = f[cols[0]];
    if (id.empty()) parse_error(row.line, "empty id");
    std::optional<int> iteration;
    if (iteration_col && !f[*iteration_col].empty()) {
      int v = -1;
      const std::string& s = f[*iteration_col];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
        parse_error(row.line, "'iteration' must be a non-negative integer");
      }
      iteration = v;
    }
    const Split split = parse_split(f[cols[3]]);
    if (records.empty() || records.back().id != id) {
      if (!closed.insert(id).second) {
        throw Error(Errc::kDuplicateId, "line " + std::to_string(row.line) +
                                            ": id '" + id + "' appears in two blocks");
      }
      RawRecord rec;
      rec.line = row.line;
      rec.id = id;
      rec.text = f[cols[1]];
      rec.language = f[cols[2]];
      rec.split = split;
      rec.iteration = iteration;
      records.push_back(std::move(rec));
    } else {
      const RawRecord& rec = records.back();
      if (rec.text != f[cols[1]] || rec.language != f[cols[2]] ||
          rec.split != split || rec.iteration != iteration) {
        parse_error(row.line, "rows of id '" + id + "' disagree on text/lang/split/iteration");
      }
    }
    const std::string& annotator = f[cols[4]];
    const std::string& label = f[cols[5]];
    if (annotator.empty() && label.empty()) continue;  // unannotated instance
    if (annotator.empty() || label.empty()) {
      parse_error(row.line, "annotator_id and label must both be set or both empty");
    }
    records.back().annotations.push_back({annotator, label});
  }
  return records;
}

AnnotatedDataset build_dataset(std::vector<RawRecord> records,
                               const LoadOptions& options) {
  if (records.empty()) throw Error(Errc::kParseError, "input has no records");
  std::unordered_set<std::string> seen;
  for (const RawRecord& r : records) {
    if (!seen.insert(r.id).second) {
      throw Error(Errc::kDuplicateId,
                  "line " + std::to_string(r.line) + ": id '" + r.id + "' repeats");
    }
  }
  const Preset* preset = options.preset;
  const bool numeric_mode = options.numeric;
  const bool binarize = !options.numeric && preset && preset->numeric_scores;

  std::optional<LabelSet> labels;
  if (options.labels) {
    labels.emplace(*options.labels, options.positive);
  } else if (preset) {
    labels.emplace(preset->labels, options.positive ? options.positive : preset->positive);
  } else if (numeric_mode) {
    labels.emplace(std::vector<std::string>{"low", "high"});
  } else {
    std::set<std::string> distinct;
    for (const RawRecord& r : records) {
      for (const RawAnnotation& a : r.annotations) distinct.insert(as_text(a.label));
    }
    if (distinct.size() < 2) {
      throw Error(Errc::kParseError,
                  "fewer than two distinct labels; pass the label set explicitly");
    }
    labels.emplace(std::vector<std::string>(distinct.begin(), distinct.end()),
                   options.positive);
  }

  std::vector<Instance> instances;
  instances.reserve(records.size());
  for (RawRecord& r : records) {
    Instance inst;
    inst.id = std::move(r.id);
    inst.text = options.preprocess ? preprocess(r.text, *options.preprocess)
                                   : std::move(r.text);
    inst.language = r.language.empty() && preset ? preset->language : std::move(r.language);
    inst.split = r.split;
    inst.iteration = r.iteration;
    inst.meta_json = std::move(r.meta_json);
    for (RawAnnotation& a : r.annotations) {
      const auto where = [&] { return "line " + std::to_string(r.line) + ": "; };
      if (numeric_mode) {
        auto v = as_number(a.label);
        if (!v || !std::isfinite(*v)) {
          throw Error(Errc::kParseError, where() + "label '" + as_text(a.label) +
                                             "' is not a number");
        }
        inst.annotations.push_back(Annotation::numeric(std::move(a.annotator), *v));
        continue;
      }
      std::string name = as_text(a.label);
      if (binarize && !labels->index_of(name)) {
        auto v = as_number(a.label);
        if (!v) {
          throw Error(Errc::kUnknownLabel, where() + "label '" + name + "' is neither a score nor a class");
        }
        try {
          name = std::string(binarize_convabuse(*v));
        } catch (const Error& e) {
          throw Error(e.code(), where() + "score " + as_text(a.label) + " outside {-3..1}");
        }
      }
      auto index = labels->index_of(name);
      if (!index) {
        throw Error(Errc::kUnknownLabel, where() + "label '" + name + "' not in the label set");
      }
      inst.annotations.push_back(Annotation::categorical(std::move(a.annotator), *index));
    }
    instances.push_back(std::move(inst));
  }
  return AnnotatedDataset(std::move(*labels), std::move(instances), {},
                          numeric_mode ? LabelMode::kNumeric : LabelMode::kCategorical);
}

}  // namespace

AnnotatedDataset load_dataset(std::istream& in, const LoadOptions& options) {
  if (options.format == DataFormat::kCsv) {
    AnnotatedDataset ds = build_dataset(read_csv_long(in), options);
    if (ds.mode() == LabelMode::kCategorical && ds.label_set().size() != 2) {
      throw Error(Errc::kParseError, "CSV input is limited to binary tasks; use JSON Lines");
    }
    return ds;
  }
  return build_dataset(read_jsonl(in), options);
}

AnnotatedDataset load_dataset(const std::filesystem::path& path,
                              const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  return load_dataset(in, options);
}

void write_jsonl(std::ostream& out, const AnnotatedDataset& dataset) {
  const LabelSet& labels = dataset.label_set();
  for (const Instance& inst : dataset.instances()) {
    nlohmann::ordered_json record;
    record["id"] = inst.id;
    record["text"] = inst.text;
    record["lang"] = inst.language;
    if (inst.split != Split::kUnspecified) record["split"] = split_name(inst.split);
    nlohmann::ordered_json anns = nlohmann::ordered_json::array();
    for (const Annotation& a : inst.annotations) {
      nlohmann::ordered_json entry;
      entry["annotator"] = a.annotator_id;
      if (a.is_numeric()) {
        entry["label"] = a.score();
      } else {
        entry["label"] = labels.name(a.label());
      }
      anns.push_back(std::move(entry));
    }
    record["annotations"] = std::move(anns);
    if (inst.iteration) record["iteration"] = *inst.iteration;
    if (!inst.meta_json.empty()) record["meta"] = nlohmann::ordered_json::parse(inst.meta_json);
    out << record.dump() << '\n';
  }
}

void write_csv(std::ostream& out, const AnnotatedDataset& dataset) {
  dataset.require_categorical();
  const bool iterative = dataset.iterative();
  std::vector<std::string> header = {"id", "text", "lang", "split", "annotator_id", "label"};
  if (iterative) header.push_back("iteration");
  csv::write_row(out, header);
  for (const Instance& inst : dataset.instances()) {
    auto row = [&](const std::string& annotator, const std::string& label) {
      std::vector<std::string> fields = {inst.id, inst.text, inst.language,
                                         std::string(split_name(inst.split)),
                                         annotator, label};
      if (iterative) fields.push_back(std::to_string(*inst.iteration));
      csv::write_row(out, fields);
    };
    if (inst.annotations.empty()) row("", "");
    for (const Annotation& a : inst.annotations) {
      row(a.annotator_id, dataset.label_set().name(a.label()));
    }
  }
}

// --- validation -----------------------------------------------------------------

nlohmann::json ValidationSummary::to_json() const {
  return {{"n", n},
          {"by_split", by_split},
          {"annotators_per_instance", {{"min", min_per_instance}, {"max", max_per_instance}}},
          {"total_annotators", total_annotators},
          {"unannotated", unannotated},
          {"annotations", annotations},
          {"languages", languages},
          {"label_counts", label_counts},
          {"numeric", numeric},
          {"iterative", iterative}};
}

ValidationSummary summarize(const AnnotatedDataset& dataset) {
  ValidationSummary s;
  s.n = dataset.size();
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest, Split::kUnspecified}) {
    const std::string name = split == Split::kUnspecified ? "unspecified"
                                                          : std::string(split_name(split));
    s.by_split[name] = 0;
  }
  for (const Instance& inst : dataset.instances()) {
    const std::string name = inst.split == Split::kUnspecified
                                 ? "unspecified"
                                 : std::string(split_name(inst.split));
    ++s.by_split[name];
    ++s.languages[inst.language];
    s.annotations += inst.annotations.size();
    if (dataset.mode() == LabelMode::kCategorical) {
      for (const Annotation& a : inst.annotations) {
        ++s.label_counts[dataset.label_set().name(a.label())];
      }
    }
  }
  std::tie(s.min_per_instance, s.max_per_instance) = dataset.annotator_range();
  s.total_annotators = dataset.annotator_count();
  s.unannotated = dataset.unannotated_count();
  s.numeric = dataset.mode() == LabelMode::kNumeric;
  s.iterative = dataset.iterative();
  return s;
}

std::vector<std::string> compare_to_reference(const ValidationSummary& summary,
                                              const ReferenceStats& reference) {
  std::vector<std::string> out;
  auto check = [&](const char* what, std::size_t got, std::size_t want) {
    if (got != want) {
      out.push_back(std::string(what) + ": " + std::to_string(got) +
                    " (reference " + std::to_string(want) + ")");
    }
  };
  auto split = [&](const char* name) {
    auto it = summary.by_split.find(name);
    return it == summary.by_split.end() ? std::size_t{0} : it->second;
  };
  check("train", split("train"), reference.train);
  check("dev", split("dev"), reference.dev);
  check("test", split("test"), reference.test);
  check("total annotators", summary.total_annotators, reference.total_annotators);
  check("min annotators per instance", summary.min_per_instance, reference.min_per_instance);
  check("max annotators per instance", summary.max_per_instance, reference.max_per_instance);
  return out;
}

}  // namespace annobias
