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

#include "wmlab/stego.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wmlab/error.hpp"
#include "wmlab/metrics.hpp"
#include "wmlab/rng.hpp"
#include "wmlab/stego_corpus.hpp"

namespace wmlab::stego {

namespace {

constexpr char kMagic[8] = {'W', 'M', 'S', 'T', 'E', 'G', '0', '1'};
// Sentence openers must recur at least this often to act as start contexts.
constexpr std::int64_t kMinStartCount = 3;

bool is_word_char(char c) { return c >= 'a' && c <= 'z'; }

std::vector<std::vector<std::string>> tokenize_sentences(std::string_view corpus) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  std::string word;
  auto flush_word = [&] {
    if (!word.empty()) {
      current.push_back(word);
      word.clear();
    }
  };
  for (char c : corpus) {
    if (is_word_char(c)) {
      word.push_back(c);
    } else if (c == '\n') {
      flush_word();
      if (!current.empty()) sentences.push_back(std::move(current));
      current.clear();
    } else {
      flush_word();
    }
  }
  flush_word();
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace

std::string StegoMessage::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

StegoMessage StegoMessage::from_string(std::string_view bitstring) {
  StegoMessage m;
  m.bits.reserve(bitstring.size());
  for (char c : bitstring) {
    if (c != '0' && c != '1') {
      throw InvalidInputError("StegoMessage: bitstring may only contain 0 and 1");
    }
    m.bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return m;
}

StegoMessage StegoMessage::random(std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  StegoMessage m;
  m.bits.resize(length);
  for (auto& b : m.bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return m;
}

std::string StegoText::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

StegoText StegoText::from_line(const std::string& line, int clip_index) {
  StegoText t;
  t.clip_index = clip_index;
  std::istringstream stream(line);
  std::string w;
  while (stream >> w) t.tokens.push_back(w);
  return t;
}

const std::vector<std::string>& StegoModel::sentinel() {
  static const std::vector<std::string> kSentinel = {"xo", "xo"};
  return kSentinel;
}

StegoModel StegoModel::build(std::string_view corpus, int bits_per_step) {
  if (bits_per_step < 1 || bits_per_step > 8) {
    throw InvalidInputError("StegoModel: bits_per_step must be in [1, 8]");
  }
  const auto sentences = tokenize_sentences(corpus);
  if (sentences.empty()) {
    throw InvalidInputError("StegoModel: corpus has no sentences");
  }

  StegoModel model;
  model.bits_per_step_ = bits_per_step;
  model.corpus_hash_ = fnv1a64(corpus);

  for (const auto& sentence : sentences) {
    for (const auto& w : sentence) model.vocab_.push_back(w);
  }
  std::sort(model.vocab_.begin(), model.vocab_.end());
  model.vocab_.erase(std::unique(model.vocab_.begin(), model.vocab_.end()),
                     model.vocab_.end());
  for (const auto& s : sentinel()) {
    if (std::binary_search(model.vocab_.begin(), model.vocab_.end(), s)) {
      throw InvalidInputError("StegoModel: corpus contains the sentinel word '" + s + "'");
    }
  }

  model.unigram_.assign(model.vocab_.size(), 0);
  std::map<int, std::int64_t> initial;
  for (const auto& sentence : sentences) {
    const int first = model.word_id(sentence.front());
    ++initial[first];
    int prev = -1;
    for (const auto& w : sentence) {
      const int id = model.word_id(w);
      ++model.unigram_[static_cast<std::size_t>(id)];
      if (prev >= 0) ++model.bigram_[{prev, id}];
      prev = id;
    }
  }

  // Start contexts: recurring sentence openers, most frequent first.
  std::vector<std::pair<int, std::int64_t>> openers(initial.begin(), initial.end());
  std::sort(openers.begin(), openers.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return model.vocab_[static_cast<std::size_t>(a.first)] <
           model.vocab_[static_cast<std::size_t>(b.first)];
  });
  for (const auto& [id, count] : openers) {
    if (count >= kMinStartCount) {
      model.starts_.push_back(model.vocab_[static_cast<std::size_t>(id)]);
    }
  }

  model.finalize();
  return model;
}

StegoModel StegoModel::build_default() { return build(embedded_corpus(), 1); }

void StegoModel::finalize() {
  unigram_top_.resize(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) unigram_top_[i] = static_cast<int>(i);
  std::sort(unigram_top_.begin(), unigram_top_.end(), [&](int a, int b) {
    const auto ca = unigram_[static_cast<std::size_t>(a)];
    const auto cb = unigram_[static_cast<std::size_t>(b)];
    if (ca != cb) return ca > cb;
    return vocab_[static_cast<std::size_t>(a)] < vocab_[static_cast<std::size_t>(b)];
  });
}

int StegoModel::word_id(const std::string& w) const {
  const auto it = std::lower_bound(vocab_.begin(), vocab_.end(), w);
  if (it == vocab_.end() || *it != w) return -1;
  return static_cast<int>(it - vocab_.begin());
}

std::vector<int> StegoModel::ranked_candidate_ids(int context_id) const {
  const std::size_t want = std::size_t{1} << bits_per_step_;

  std::vector<std::pair<int, std::int64_t>> successors;
  if (context_id >= 0) {
    auto it = bigram_.lower_bound({context_id, 0});
    for (; it != bigram_.end() && it->first.first == context_id; ++it) {
      successors.emplace_back(it->first.second, it->second);
    }
  }
  std::sort(successors.begin(), successors.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return vocab_[static_cast<std::size_t>(a.first)] <
           vocab_[static_cast<std::size_t>(b.first)];
  });

  std::vector<int> out;
  if (successors.size() >= want) {
    for (std::size_t i = 0; i < want; ++i) out.push_back(successors[i].first);
    return out;
  }
  // Backoff: unigram ranking over the whole vocabulary.
  for (int id : unigram_top_) {
    out.push_back(id);
    if (out.size() == want) break;
  }
  if (out.size() < want) {
    throw Error("StegoModel: vocabulary too small for bits_per_step");
  }
  return out;
}

std::vector<std::string> StegoModel::ranked_candidates(const std::string& context) const {
  std::vector<std::string> out;
  for (int id : ranked_candidate_ids(word_id(context))) {
    out.push_back(vocab_[static_cast<std::size_t>(id)]);
  }
  return out;
}

std::vector<StegoText> StegoModel::encode_message(const StegoMessage& m, int n,
                                                  std::uint64_t seed) const {
  if (n < 1) {
    throw InvalidInputError("encode_message: n must be >= 1");
  }
  if (static_cast<std::size_t>(n) > starts_.size()) {
    throw InvalidInputError("encode_message: n exceeds the available start contexts");
  }
  if (m.bits.size() % static_cast<std::size_t>(bits_per_step_) != 0) {
    throw InvalidInputError("encode_message: message length is not a multiple of r");
  }
  for (auto b : m.bits) {
    if (b > 1) throw InvalidInputError("encode_message: bits must be 0 or 1");
  }

  // Seeded partial Fisher-Yates over the start contexts.
  std::vector<std::string> starts = starts_;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const auto j = i + static_cast<int>(rng() % (starts.size() - static_cast<std::size_t>(i)));
    std::swap(starts[static_cast<std::size_t>(i)], starts[static_cast<std::size_t>(j)]);
  }

  std::vector<StegoText> texts;
  for (int i = 0; i < n; ++i) {
    StegoText t;
    t.clip_index = i;
    t.tokens.push_back(starts[static_cast<std::size_t>(i)]);
    int ctx = word_id(t.tokens.back());
    for (std::size_t pos = 0; pos < m.bits.size(); pos += static_cast<std::size_t>(bits_per_step_)) {
      std::size_t value = 0;
      for (int b = 0; b < bits_per_step_; ++b) {
        value = (value << 1) | m.bits[pos + static_cast<std::size_t>(b)];
      }
      const auto candidates = ranked_candidate_ids(ctx);
      const int chosen = candidates[value];
      t.tokens.push_back(vocab_[static_cast<std::size_t>(chosen)]);
      ctx = chosen;
    }
    for (const auto& s : sentinel()) t.tokens.push_back(s);
    texts.push_back(std::move(t));
  }
  return texts;
}

StegoMessage StegoModel::decode_text(const StegoText& t) const {
  const auto& sent = sentinel();
  if (t.tokens.size() < sent.size() + 1) {
    throw UndecodableError("decode_text: text too short to carry a message");
  }
  if (!std::equal(sent.begin(), sent.end(), t.tokens.end() - static_cast<std::ptrdiff_t>(sent.size()))) {
    throw UndecodableError("decode_text: terminator sentinel missing");
  }

  StegoMessage m;
  int ctx = word_id(t.tokens.front());
  if (ctx < 0) {
    throw UndecodableError("decode_text: start context not in vocabulary");
  }
  const std::size_t payload_end = t.tokens.size() - sent.size();
  for (std::size_t i = 1; i < payload_end; ++i) {
    const int id = word_id(t.tokens[i]);
    const auto candidates = ranked_candidate_ids(ctx);
    const auto it = std::find(candidates.begin(), candidates.end(), id);
    if (id < 0 || it == candidates.end()) {
      throw UndecodableError("decode_text: token '" + t.tokens[i] +
                             "' is not a ranked candidate at step " + std::to_string(i));
    }
    std::size_t rank = static_cast<std::size_t>(it - candidates.begin());
    for (int b = bits_per_step_ - 1; b >= 0; --b) {
      m.bits.push_back(static_cast<std::uint8_t>((rank >> b) & 1u));
    }
    ctx = id;
  }
  return m;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) {
  const auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw FormatError("stego model file truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  std::int64_t i64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return static_cast<std::int64_t>(v);
  }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s = buf.substr(pos, len);
    pos += len;
    return s;
  }
};

}  // namespace

void StegoModel::save(const std::filesystem::path& path) const {
  std::string payload;
  put_u32(payload, static_cast<std::uint32_t>(bits_per_step_));
  put_i64(payload, static_cast<std::int64_t>(corpus_hash_));
  put_u32(payload, static_cast<std::uint32_t>(vocab_.size()));
  for (const auto& w : vocab_) {
    put_u32(payload, static_cast<std::uint32_t>(w.size()));
    payload += w;
  }
  for (auto c : unigram_) put_i64(payload, c);
  put_u32(payload, static_cast<std::uint32_t>(starts_.size()));
  for (const auto& w : starts_) {
    put_u32(payload, static_cast<std::uint32_t>(w.size()));
    payload += w;
  }
  put_u32(payload, static_cast<std::uint32_t>(bigram_.size()));
  for (const auto& [key, count] : bigram_) {
    put_u32(payload, static_cast<std::uint32_t>(key.first));
    put_u32(payload, static_cast<std::uint32_t>(key.second));
    put_i64(payload, count);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("StegoModel::save: cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  std::string tail;
  put_i64(tail, static_cast<std::int64_t>(fnv1a64(payload.data(), payload.size())));
  out.write(tail.data(), 8);
  if (!out) throw FormatError("StegoModel::save: write failed for " + path.string());
}

StegoModel StegoModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("StegoModel::load: cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 8 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("StegoModel::load: bad magic in " + path.string());
  }

  const std::string payload = buf.substr(sizeof(kMagic), buf.size() - sizeof(kMagic) - 8);
  Reader tail_reader{buf, buf.size() - 8};
  const auto stored_hash = static_cast<std::uint64_t>(tail_reader.i64());
  if (fnv1a64(payload.data(), payload.size()) != stored_hash) {
    throw FormatError("StegoModel::load: content hash mismatch in " + path.string());
  }

  Reader r{payload};
  StegoModel model;
  model.bits_per_step_ = static_cast<int>(r.u32());
  model.corpus_hash_ = static_cast<std::uint64_t>(r.i64());
  const std::uint32_t vocab_size = r.u32();
  model.vocab_.reserve(vocab_size);
  for (std::uint32_t i = 0; i < vocab_size; ++i) model.vocab_.push_back(r.str());
  model.unigram_.resize(vocab_size);
  for (auto& c : model.unigram_) c = r.i64();
  const std::uint32_t starts = r.u32();
  for (std::uint32_t i = 0; i < starts; ++i) model.starts_.push_back(r.str());
  const std::uint32_t bigrams = r.u32();
  for (std::uint32_t i = 0; i < bigrams; ++i) {
    const auto ctx = static_cast<int>(r.u32());
    const auto next = static_cast<int>(r.u32());
    model.bigram_[{ctx, next}] = r.i64();
  }
  model.finalize();
  return model;
}

NearestDecode nearest_stego_decode(const std::string& transcript,
                                   std::span<const StegoText> known_stegos,
                                   const StegoModel& model) {
  if (known_stegos.empty()) {
    throw InvalidInputError("nearest_stego_decode: no known stegos");
  }
  std::vector<std::size_t> order(known_stegos.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return known_stegos[a].clip_index < known_stegos[b].clip_index;
  });

  bool have_best = false;
  NearestDecode best;
  for (std::size_t idx : order) {
    const StegoText& stego = known_stegos[idx];
    const std::string reference = stego.joined();
    const double rate = reference.empty()
                            ? 0.0
                            : static_cast<double>(metrics::levenshtein(reference, transcript)) /
                                  static_cast<double>(reference.size());
    if (!have_best || rate < best.cer_to_match) {
      best.message = model.decode_text(stego);
      best.cer_to_match = rate;
      best.clip_index = stego.clip_index;
      have_best = true;
    }
  }
  return best;
}

}  // namespace wmlab::stego
