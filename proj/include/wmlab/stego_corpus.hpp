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

#ifndef WMLAB_STEGO_CORPUS_HPP
#define WMLAB_STEGO_CORPUS_HPP

#include <string_view>

namespace wmlab::stego {

// The fixed corpus the default codec is built on: newline-separated
// sentences of lowercase short words. Roughly 54k tokens.
std::string_view embedded_corpus();

}  // namespace wmlab::stego

#endif  // WMLAB_STEGO_CORPUS_HPP
