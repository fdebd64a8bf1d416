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

#ifndef WMLAB_ERROR_HPP
#define WMLAB_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmlab {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's preconditions.
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what) : Error(what) {}
};

// Malformed on-disk data: WAV headers, checkpoints, manifests, stego models.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Invalid experiment configuration; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A text could not be decoded by the stego codec (non-stego input).
class UndecodableError : public Error {
 public:
  explicit UndecodableError(const std::string& what) : Error(what) {}
};

// Training produced a non-finite loss.
class TrainingDivergedError : public Error {
 public:
  explicit TrainingDivergedError(const std::string& what) : Error(what) {}
};

// The black-box prediction interface failed part-way through extraction.
// Lists the trigger indices whose queries had already completed.
class PartialExtractionError : public Error {
 public:
  PartialExtractionError(const std::string& what, std::vector<std::size_t> completed)
      : Error(what), completed_(std::move(completed)) {}
  const std::vector<std::size_t>& completed_queries() const { return completed_; }

 private:
  std::vector<std::size_t> completed_;
};

}  // namespace wmlab

#endif  // WMLAB_ERROR_HPP
