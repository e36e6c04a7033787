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

// Machine-readable reports plus the small file utilities the CLI relies on.

#ifndef ANNOBIAS_REPORT_HPP_
#define ANNOBIAS_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace annobias {

inline constexpr std::string_view kToolVersion = ANNOBIAS_VERSION;
inline constexpr int kReportSchemaVersion = 1;

// "sha256:<hex>" of the bytes.
std::string content_fingerprint(std::string_view bytes);
std::string file_fingerprint(const std::filesystem::path& path);

// Throws kIo.
std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// One report per CLI invocation. Metric blocks are named after the formula
// they implement, e.g. "eq4_krippendorff_alpha".
class Report {
 public:
  Report(std::string command, std::vector<std::string> invocation);

  void set_fingerprint(std::string fingerprint) {
    fingerprint_ = std::move(fingerprint);
  }
  // Adds a metric block; `details` (an object) is merged into it.
  void add_metric(const std::string& name, double value, bool degenerate = false,
                  nlohmann::json details = nlohmann::json::object());
  void add_exclusion(const std::string& name, std::size_t count);
  void add_warning(std::string message);
  // Arbitrary extra top-level section (e.g. "summary").
  void set_section(const std::string& name, nlohmann::json value);

  bool any_degenerate() const noexcept { return any_degenerate_; }
  bool any_warning() const noexcept { return !warnings_.empty(); }
  nlohmann::json to_json() const;

 private:
  std::string command_;
  std::vector<std::string> invocation_;
  std::string fingerprint_;
  nlohmann::json metrics_ = nlohmann::json::array();
  nlohmann::json exclusions_ = nlohmann::json::object();
  nlohmann::json sections_ = nlohmann::json::object();
  std::vector<std::string> warnings_;
  bool any_degenerate_ = false;
};

}  // namespace annobias

#endif  // ANNOBIAS_REPORT_HPP_
