// Copyright 2026 the wmlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WMLAB_REPORT_HPP
#define WMLAB_REPORT_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace wmlab::report {

// Line-oriented key=value report, ordered and free of timestamps so that
// reruns with the same seed are byte-identical and diffable.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);       // fixed %.6f
  void add(const std::string& key, std::size_t value);
  void add(const std::string& key, int value);
  void add(const std::string& key, bool value);         // "true"/"false"

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  // Empty string when absent.
  std::string value(const std::string& key) const;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
  static Report read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace wmlab::report

#endif  // WMLAB_REPORT_HPP
