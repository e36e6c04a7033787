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

#include "annobias/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "annobias/error.hpp"

namespace annobias {

std::string content_fingerprint(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length,
                 EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::kInvariantViolation, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string file_fingerprint(const std::filesystem::path& path) {
  return content_fingerprint(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::kIo, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::kIo, "cannot replace '" + path.string() + "'");
  }
}

Report::Report(std::string command, std::vector<std::string> invocation)
    : command_(std::move(command)), invocation_(std::move(invocation)) {}

void Report::add_metric(const std::string& name, double value, bool degenerate,
                        nlohmann::json details) {
  nlohmann::json block = {{"name", name}, {"value", value}, {"degenerate", degenerate}};
  if (details.is_object()) {
    for (auto& [key, v] : details.items()) block[key] = v;
  }
  metrics_.push_back(std::move(block));
  any_degenerate_ = any_degenerate_ || degenerate;
}

void Report::add_exclusion(const std::string& name, std::size_t count) {
  exclusions_[name] = count;
}

void Report::add_warning(std::string message) {
  warnings_.push_back(std::move(message));
}

void Report::set_section(const std::string& name, nlohmann::json value) {
  sections_[name] = std::move(value);
}

nlohmann::json Report::to_json() const {
  nlohmann::json out = {
      {"schema_version", kReportSchemaVersion},
      {"tool", "annobias"},
      {"tool_version", kToolVersion},
      {"command", command_},
      {"invocation", invocation_},
      {"dataset_fingerprint", fingerprint_.empty() ? nlohmann::json(nullptr)
                                                   : nlohmann::json(fingerprint_)},
      {"metrics", metrics_},
      {"exclusions", exclusions_},
      {"warnings", warnings_},
  };
  for (auto& [key, v] : sections_.items()) out[key] = v;
  return out;
}

}  // namespace annobias
