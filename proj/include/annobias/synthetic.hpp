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

// Seeded multi-annotator corpora with a known ground truth.
//
// Each instance has a hidden true class. Its text mixes class cue words with
// filler words, so the text predicts the class only partially. Honest
// annotators report the true class except with probability `honest_noise`;
// adversarial annotators flip the true class with probability
// `adversary_flip`.

#ifndef ANNOBIAS_SYNTHETIC_HPP_
#define ANNOBIAS_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "annobias/core.hpp"

namespace annobias {

struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::size_t n_train = 1400;
  std::size_t n_dev = 300;
  std::size_t n_test = 300;
  std::size_t num_labels = 2;
  // Prior of the last class; the rest share the remainder evenly.
  double positive_rate = 0.5;

  std::size_t honest_annotators = 4;
  std::size_t adversarial_annotators = 1;
  double honest_noise = 0.05;
  double adversary_flip = 0.8;

  std::size_t tokens_per_text = 8;
  std::size_t cue_words_per_label = 25;
  std::size_t filler_words = 400;
  // Probability that a token is a cue word of the true class.
  double cue_rate = 0.25;
  // Latin pseudo-words ("en") or Arabic-script pseudo-words ("ar").
  std::string language = "en";
};

struct SyntheticCorpus {
  AnnotatedDataset dataset;
  std::vector<std::size_t> truth;        // aligned with dataset.instances()
  std::vector<std::string> adversaries;  // annotator ids
};

// Annotator ids are "ann1", "ann2", ...; adversaries come last. Profiles put
// honest annotators in culture groups "A"/"B" alternately and adversaries in
// "C". Binary sets declare the last label ("1") positive.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

// 943 instances split 657/141/145, three low-diversity annotators, Arabic
// script.
SyntheticConfig armis_like_config(std::uint64_t seed);

}  // namespace annobias

#endif  // ANNOBIAS_SYNTHETIC_HPP_
