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

#include "annobias/synthetic.hpp"

#include <cstdio>
#include <optional>

#include "annobias/random.hpp"

namespace annobias {

namespace {

constexpr std::uint64_t kTextStream = 1;
constexpr std::uint64_t kLabelStream = 2;

// Deterministic pseudo-word for an index: consonant/vowel pairs in Latin
// script, or Arabic letters U+0628..U+0646 encoded as UTF-8.
std::string pseudo_word(std::size_t index, const std::string& language) {
  std::string out;
  std::size_t v = index + 1;
  if (language == "ar") {
    while (v > 0) {
      const unsigned cp = 0x0628 + static_cast<unsigned>(v % 31);
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
      v /= 31;
    }
    return out;
  }
  static constexpr char kConsonants[] = "bdfgklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  while (v > 0) {
    out += kConsonants[v % 14];
    v /= 14;
    out += kVowels[v % 5];
    v /= 5;
  }
  return out;
}

std::size_t draw_class(Rng& rng, const SyntheticConfig& c) {
  const std::size_t last = c.num_labels - 1;
  if (rng.uniform01() < c.positive_rate) return last;
  return last == 1 ? 0 : rng.uniform_index(last);
}

std::size_t other_class(Rng& rng, std::size_t truth, std::size_t k) {
  const std::size_t pick = rng.uniform_index(k - 1);
  return pick >= truth ? pick + 1 : pick;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& c) {
  if (c.num_labels < 2) throw Error(Errc::kInvalidArgument, "need at least two labels");
  if (c.honest_annotators + c.adversarial_annotators == 0) {
    throw Error(Errc::kInvalidArgument, "need at least one annotator");
  }
  if (c.tokens_per_text == 0 || c.filler_words == 0 || c.cue_words_per_label == 0) {
    throw Error(Errc::kInvalidArgument, "vocabulary and text length must be positive");
  }
  std::vector<std::string> label_names;
  for (std::size_t k = 0; k < c.num_labels; ++k) label_names.push_back(std::to_string(k));

  const std::size_t cue_vocab = c.cue_words_per_label * c.num_labels;
  const std::size_t annotators = c.honest_annotators + c.adversarial_annotators;
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < annotators; ++j) ids.push_back("ann" + std::to_string(j + 1));

  Rng text_rng(derive_seed(c.seed, kTextStream));
  Rng label_rng(derive_seed(c.seed, kLabelStream));
  const std::size_t n = c.n_train + c.n_dev + c.n_test;
  std::vector<Instance> instances;
  std::vector<std::size_t> truth;
  instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    char id[32];
    std::snprintf(id, sizeof(id), "s%05zu", i + 1);
    inst.id = id;
    inst.language = c.language;
    inst.split = i < c.n_train ? Split::kTrain
                 : i < c.n_train + c.n_dev ? Split::kDev
                                           : Split::kTest;
    const std::size_t y = draw_class(text_rng, c);
    for (std::size_t t = 0; t < c.tokens_per_text; ++t) {
      std::size_t word;
      if (text_rng.uniform01() < c.cue_rate) {
        word = y * c.cue_words_per_label + text_rng.uniform_index(c.cue_words_per_label);
      } else {
        word = cue_vocab + text_rng.uniform_index(c.filler_words);
      }
      if (t > 0) inst.text += ' ';
      inst.text += pseudo_word(word, c.language);
    }
    for (std::size_t j = 0; j < annotators; ++j) {
      const bool adversary = j >= c.honest_annotators;
      const double flip = adversary ? c.adversary_flip : c.honest_noise;
      const std::size_t label =
          label_rng.bernoulli(flip) ? other_class(label_rng, y, c.num_labels) : y;
      inst.annotations.push_back(Annotation::categorical(ids[j], label));
    }
    truth.push_back(y);
    instances.push_back(std::move(inst));
  }

  std::vector<AnnotatorProfile> profiles;
  for (std::size_t j = 0; j < annotators; ++j) {
    const bool adversary = j >= c.honest_annotators;
    profiles.push_back({ids[j], {{"culture", adversary ? "C" : (j % 2 == 0 ? "A" : "B")}}});
  }
  std::vector<std::string> adversaries(ids.begin() + static_cast<std::ptrdiff_t>(c.honest_annotators),
                                       ids.end());
  std::optional<std::string> positive;
  if (c.num_labels == 2) positive = label_names.back();
  return {AnnotatedDataset(LabelSet(label_names, positive), std::move(instances), std::move(profiles)),
          std::move(truth), std::move(adversaries)};
}

SyntheticConfig armis_like_config(std::uint64_t seed) {
  SyntheticConfig c;
  c.seed = seed;
  c.n_train = 657;
  c.n_dev = 141;
  c.n_test = 145;
  c.honest_annotators = 3;
  c.adversarial_annotators = 0;
  c.honest_noise = 0.1;
  c.language = "ar";
  return c;
}

}  // namespace annobias
