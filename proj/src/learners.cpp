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

#include "annobias/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "annobias/random.hpp"

namespace annobias {

namespace {

constexpr int kPredictorFormatVersion = 1;

// UTF-8 code point boundaries; invalid bytes count as single code points.
std::vector<std::string_view> code_points(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    len = std::min(len, text.size() - i);
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

void add_feature(std::vector<std::pair<std::uint32_t, double>>& acc,
                 std::string_view key, std::size_t dims) {
  const std::uint64_t h = fnv1a64(key);
  const auto bucket = static_cast<std::uint32_t>(h % dims);
  const double sign = (mix64(h) >> 63) ? -1.0 : 1.0;
  acc.emplace_back(bucket, sign);
}

}  // namespace

std::string_view learner_kind_name(LearnerKind kind) {
  return kind == LearnerKind::kMajorityClass ? "majority-class"
                                             : "hashed-linear";
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "majority-class") return LearnerKind::kMajorityClass;
  if (name == "hashed-linear") return LearnerKind::kHashedLinear;
  throw Error(Errc::kInvalidArgument,
              "unknown learner kind '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw Error(Errc::kInvalidArgument, "train config: " + what);
  };
  if (hash_dims < 2) bad("hash_dims must be >= 2");
  if (hash_dims > (std::size_t{1} << 31)) bad("hash_dims too large");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    bad("learning_rate must be > 0");
  }
  if (epochs < 1) bad("epochs must be >= 1");
  if (ngram_min < 1 || ngram_max < ngram_min) bad("invalid ngram range");
  if (char_ngram_max != 0 &&
      (char_ngram_min < 1 || char_ngram_max < char_ngram_min)) {
    bad("invalid char ngram range");
  }
  if (l2 < 0.0) bad("l2 must be >= 0");
  if (smoothing < 0.0) bad("smoothing must be >= 0");
}

nlohmann::json TrainConfig::to_json() const {
  return {
      {"seed", seed},
      {"learner_kind", learner_kind_name(kind)},
      {"epochs", epochs},
      {"learning_rate", learning_rate},
      {"hash_dims", hash_dims},
      {"ngram_range", {ngram_min, ngram_max}},
      {"char_ngram_range", {char_ngram_min, char_ngram_max}},
      {"batch_size", batch_size},
      {"l2", l2},
      {"shuffle", shuffle},
      {"smoothing", smoothing},
  };
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.kind = parse_learner_kind(j.at("learner_kind").get<std::string>());
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.hash_dims = j.at("hash_dims").get<std::size_t>();
  c.ngram_min = j.at("ngram_range").at(0).get<int>();
  c.ngram_max = j.at("ngram_range").at(1).get<int>();
  c.char_ngram_min = j.at("char_ngram_range").at(0).get<int>();
  c.char_ngram_max = j.at("char_ngram_range").at(1).get<int>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.l2 = j.at("l2").get<double>();
  c.shuffle = j.at("shuffle").get<bool>();
  c.smoothing = j.at("smoothing").get<double>();
  c.validate();
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    current += c;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SparseFeatures hash_features(std::string_view text, const TrainConfig& config) {
  const auto tokens = tokenize(text);
  std::vector<std::pair<std::uint32_t, double>> acc;
  std::string key;
  for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      key = "w" + std::to_string(n) + ":";
      for (std::size_t j = 0; j < width; ++j) {
        if (j) key += ' ';
        key += tokens[i + j];
      }
      add_feature(acc, key, config.hash_dims);
    }
  }
  if (config.char_ngram_max > 0) {
    std::string joined = " ";
    for (const auto& t : tokens) joined += t + " ";
    const auto cps = code_points(joined);
    for (int n = config.char_ngram_min; n <= config.char_ngram_max; ++n) {
      const auto width = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + width <= cps.size(); ++i) {
        key = "c" + std::to_string(n) + ":";
        for (std::size_t j = 0; j < width; ++j) key += cps[i + j];
        add_feature(acc, key, config.hash_dims);
      }
    }
  }
  std::sort(acc.begin(), acc.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseFeatures out;
  for (std::size_t i = 0; i < acc.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < acc.size() && acc[j].first == acc[i].first) sum += acc[j++].second;
    if (sum != 0.0) {
      out.index.push_back(acc[i].first);
      out.value.push_back(sum);
    }
    i = j;
  }
  // Unit L2 norm keeps the step size independent of text length.
  double norm = 0.0;
  for (double v : out.value) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : out.value) v /= norm;
  }
  return out;
}

// --- linear model -----------------------------------------------------------

namespace linear {

std::size_t param_count(std::size_t num_labels, std::size_t dims) {
  return num_labels * dims + num_labels;
}

std::vector<double> logits(std::span<const double> params,
                           std::size_t num_labels, std::size_t dims,
                           const SparseFeatures& x) {
  std::vector<double> z(num_labels);
  for (std::size_t k = 0; k < num_labels; ++k) {
    const double* row = params.data() + k * dims;
    double s = params[num_labels * dims + k];
    for (std::size_t j = 0; j < x.index.size(); ++j) {
      s += row[x.index[j]] * x.value[j];
    }
    z[k] = s;
  }
  return z;
}

std::vector<double> softmax(std::span<const double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[k] = std::exp(z[k] - peak);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

double loss_and_gradient(std::span<const double> params,
                         std::size_t num_labels, std::size_t dims,
                         const SparseFeatures& x,
                         std::span<const double> target, double l2,
                         std::span<double> grad) {
  const auto z = logits(params, num_labels, dims, x);
  const double peak = *std::max_element(z.begin(), z.end());
  double log_sum = 0.0;
  for (double v : z) log_sum += std::exp(v - peak);
  log_sum = peak + std::log(log_sum);

  double loss = 0.0;
  for (std::size_t k = 0; k < num_labels; ++k) {
    loss -= target[k] * (z[k] - log_sum);
  }
  double reg = 0.0;
  for (std::size_t i = 0; i < num_labels * dims; ++i) {
    reg += params[i] * params[i];
    grad[i] = l2 * params[i];
  }
  loss += 0.5 * l2 * reg;

  double target_mass = 0.0;
  for (std::size_t k = 0; k < num_labels; ++k) target_mass += target[k];
  for (std::size_t k = 0; k < num_labels; ++k) {
    const double delta = std::exp(z[k] - log_sum) * target_mass - target[k];
    double* row = grad.data() + k * dims;
    for (std::size_t j = 0; j < x.index.size(); ++j) {
      row[x.index[j]] += delta * x.value[j];
    }
    grad[num_labels * dims + k] = delta;
  }
  return loss;
}

}  // namespace linear

// --- predictors -------------------------------------------------------------

MajorityClassPredictor::MajorityClassPredictor(std::vector<double> distribution)
    : distribution_(SoftLabel::from_probs(std::move(distribution))) {}

SoftLabel MajorityClassPredictor::predict_proba(std::string_view) const {
  return distribution_;
}

nlohmann::json MajorityClassPredictor::to_json() const {
  return {
      {"format", "annobias.predictor"},
      {"version", kPredictorFormatVersion},
      {"kind", learner_kind_name(kind())},
      {"num_labels", num_labels()},
      {"distribution", std::vector<double>(distribution_.probs().begin(),
                                           distribution_.probs().end())},
  };
}

HashedLinearPredictor::HashedLinearPredictor(TrainConfig config,
                                             std::size_t num_labels,
                                             std::vector<double> params,
                                             std::vector<double> loss_history)
    : config_(std::move(config)),
      num_labels_(num_labels),
      params_(std::move(params)),
      loss_history_(std::move(loss_history)) {
  config_.validate();
  if (num_labels_ < 2 ||
      params_.size() != linear::param_count(num_labels_, config_.hash_dims)) {
    throw Error(Errc::kInvalidArgument, "hashed-linear parameter shape mismatch");
  }
}

SoftLabel HashedLinearPredictor::predict_features(
    const SparseFeatures& features) const {
  auto z = linear::logits(params_, num_labels_, config_.hash_dims, features);
  return SoftLabel::from_probs(linear::softmax(z));
}

SoftLabel HashedLinearPredictor::predict_proba(std::string_view text) const {
  return predict_features(hash_features(text, config_));
}

nlohmann::json HashedLinearPredictor::to_json() const {
  const std::size_t weights = num_labels_ * config_.hash_dims;
  std::vector<std::size_t> index;
  std::vector<double> value;
  for (std::size_t i = 0; i < weights; ++i) {
    if (params_[i] != 0.0) {
      index.push_back(i);
      value.push_back(params_[i]);
    }
  }
  return {
      {"format", "annobias.predictor"},
      {"version", kPredictorFormatVersion},
      {"kind", learner_kind_name(kind())},
      {"num_labels", num_labels_},
      {"config", config_.to_json()},
      {"weights", {{"index", index}, {"value", value}}},
      {"bias", std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(weights),
                                   params_.end())},
      {"loss_history", loss_history_},
  };
}

// --- training ---------------------------------------------------------------

namespace {

std::unique_ptr<Predictor> fit_majority(const TrainConfig& config,
                                        std::size_t num_labels,
                                        std::span<const LabeledText> data) {
  std::vector<double> dist(num_labels, config.smoothing);
  for (const auto& item : data) dist[item.label] += 1.0;
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  for (double& v : dist) v /= total;
  return std::make_unique<MajorityClassPredictor>(std::move(dist));
}

double objective(std::span<const double> params, std::size_t num_labels,
                 std::size_t dims, const std::vector<SparseFeatures>& features,
                 std::span<const LabeledText> data, double l2) {
  double ce = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto z = linear::logits(params, num_labels, dims, features[i]);
    const double peak = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - peak);
    ce += peak + std::log(s) - z[data[i].label];
  }
  double reg = 0.0;
  for (std::size_t i = 0; i < num_labels * dims; ++i) reg += params[i] * params[i];
  return ce / static_cast<double>(data.size()) + 0.5 * l2 * reg;
}

std::unique_ptr<Predictor> fit_linear(const TrainConfig& config,
                                      std::size_t num_labels,
                                      std::span<const LabeledText> data) {
  const std::size_t dims = config.hash_dims;
  const std::size_t n = data.size();
  std::vector<SparseFeatures> features;
  features.reserve(n);
  for (const auto& item : data) features.push_back(hash_features(item.text, config));

  std::vector<double> params(linear::param_count(num_labels, dims), 0.0);
  double* bias = params.data() + num_labels * dims;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  const std::size_t batch =
      config.batch_size == 0 ? n : std::min(config.batch_size, n);
  std::vector<double> deltas(batch * num_labels);
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(start + batch, n);
      const std::size_t size = end - start;
      // Gradients at the pre-step parameters.
      for (std::size_t b = 0; b < size; ++b) {
        const std::size_t i = order[start + b];
        const auto p = linear::softmax(
            linear::logits(params, num_labels, dims, features[i]));
        for (std::size_t k = 0; k < num_labels; ++k) {
          deltas[b * num_labels + k] = p[k] - (data[i].label == k ? 1.0 : 0.0);
        }
      }
      const double step = config.learning_rate / static_cast<double>(size);
      if (config.l2 > 0.0) {
        const double decay = 1.0 - config.learning_rate * config.l2;
        for (std::size_t w = 0; w < num_labels * dims; ++w) params[w] *= decay;
      }
      for (std::size_t b = 0; b < size; ++b) {
        const SparseFeatures& x = features[order[start + b]];
        for (std::size_t k = 0; k < num_labels; ++k) {
          const double g = step * deltas[b * num_labels + k];
          double* row = params.data() + k * dims;
          for (std::size_t j = 0; j < x.index.size(); ++j) {
            row[x.index[j]] -= g * x.value[j];
          }
          bias[k] -= g;
        }
      }
    }
    losses.push_back(objective(params, num_labels, dims, features, data,
                               config.l2));
  }
  return std::make_unique<HashedLinearPredictor>(config, num_labels,
                                                 std::move(params),
                                                 std::move(losses));
}

}  // namespace

std::unique_ptr<Predictor> fit(const TrainConfig& config,
                               std::size_t num_labels,
                               std::span<const LabeledText> data) {
  config.validate();
  if (num_labels < 2) {
    throw Error(Errc::kInvalidArgument, "need at least two labels");
  }
  if (data.empty()) {
    throw Error(Errc::kEmptyTraining, "no training examples");
  }
  for (const auto& item : data) {
    if (item.label >= num_labels) {
      throw Error(Errc::kUnknownLabel,
                  "training label " + std::to_string(item.label) +
                      " outside the label set");
    }
  }
  if (config.kind == LearnerKind::kMajorityClass) {
    return fit_majority(config, num_labels, data);
  }
  return fit_linear(config, num_labels, data);
}

std::unique_ptr<Predictor> predictor_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "annobias.predictor") {
      throw Error(Errc::kParseError, "not a predictor dump");
    }
    if (j.at("version").get<int>() != kPredictorFormatVersion) {
      throw Error(Errc::kParseError, "unsupported predictor format version");
    }
    const auto kind = parse_learner_kind(j.at("kind").get<std::string>());
    const auto k = j.at("num_labels").get<std::size_t>();
    if (kind == LearnerKind::kMajorityClass) {
      auto dist = j.at("distribution").get<std::vector<double>>();
      if (dist.size() != k) throw Error(Errc::kParseError, "distribution size");
      return std::make_unique<MajorityClassPredictor>(std::move(dist));
    }
    const auto config = TrainConfig::from_json(j.at("config"));
    std::vector<double> params(linear::param_count(k, config.hash_dims), 0.0);
    const auto index = j.at("weights").at("index").get<std::vector<std::size_t>>();
    const auto value = j.at("weights").at("value").get<std::vector<double>>();
    if (index.size() != value.size()) {
      throw Error(Errc::kParseError, "weight index/value length mismatch");
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i] >= k * config.hash_dims) {
        throw Error(Errc::kParseError, "weight index out of range");
      }
      params[index[i]] = value[i];
    }
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (bias.size() != k) throw Error(Errc::kParseError, "bias size");
    std::copy(bias.begin(), bias.end(),
              params.begin() + static_cast<std::ptrdiff_t>(k * config.hash_dims));
    return std::make_unique<HashedLinearPredictor>(
        config, k, std::move(params),
        j.value("loss_history", std::vector<double>{}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("predictor dump: ") + e.what());
  }
}

}  // namespace annobias
