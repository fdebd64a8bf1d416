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

#include "wmlab/report.hpp"

#include <cstdio>
#include <fstream>

#include "wmlab/error.hpp"

namespace wmlab::report {

void Report::add(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos ||
      key.find('\n') != std::string::npos) {
    throw InvalidInputError("Report: malformed key '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) {
    throw InvalidInputError("Report: value for '" + key + "' contains a newline");
  }
  entries_.emplace_back(key, value);
}

void Report::add(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  add(key, std::string(buf));
}

void Report::add(const std::string& key, std::size_t value) {
  add(key, std::to_string(value));
}

void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }

void Report::add(const std::string& key, bool value) {
  add(key, std::string(value ? "true" : "false"));
}

std::string Report::value(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return {};
}

std::string Report::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out.push_back('=');
    out += v;
    out.push_back('\n');
  }
  return out;
}

void Report::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("Report: cannot open " + path.string());
  const std::string body = to_string();
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw FormatError("Report: write failed for " + path.string());
}

Report Report::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("Report: cannot open " + path.string());
  Report report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("Report: malformed line in " + path.string());
    }
    report.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return report;
}

}  // namespace wmlab::report
