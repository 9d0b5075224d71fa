// Copyright 2026 The SALSA Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "salsa/tokenizer.h"

#include <string>

#include "salsa/error.h"

namespace salsa {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= text.size()) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view text) { return decode_utf8(text).size(); }

std::string utf8_slice(std::string_view text, std::size_t start, std::size_t end) {
  const std::u32string cps = decode_utf8(text);
  if (start > end || end > cps.size()) {
    throw InvalidInput("slice [" + std::to_string(start) + ", " +
                       std::to_string(end) + ") outside text of length " +
                       std::to_string(cps.size()));
  }
  return encode_utf8(std::u32string_view(cps).substr(start, end - start));
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0x00A0 || c == 0x2009 || c == 0x200A ||
         c == 0x202F || c == 0x3000;
}

bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  // General punctuation block, Latin-1 punctuation and CJK punctuation.
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         c == 0x00A1 || c == 0x00AB || c == 0x00BB || c == 0x00BF ||
         (c >= 0x3001 && c <= 0x3003);
}

TokenizedSentence tokenize(std::string_view text, Side role, std::string id) {
  const std::u32string cps = decode_utf8(text);
  TokenizedSentence sentence;
  sentence.id = std::move(id);
  sentence.text = std::string(text);
  sentence.role = role;
  sentence.length = cps.size();

  auto emit = [&](std::size_t start, std::size_t end) {
    sentence.tokens.push_back(
        {start, end, encode_utf8(std::u32string_view(cps).substr(start, end - start))});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < cps.size() && !is_space(cps[end])) ++end;
    // [i, end) is a whitespace-delimited chunk; peel punctuation off both ends.
    std::size_t lo = i;
    std::size_t hi = end;
    while (lo < hi && is_punctuation(cps[lo])) ++lo;
    if (lo == hi) {
      for (std::size_t k = i; k < end; ++k) emit(k, k + 1);
    } else {
      while (hi > lo && is_punctuation(cps[hi - 1])) --hi;
      for (std::size_t k = i; k < lo; ++k) emit(k, k + 1);
      emit(lo, hi);
      for (std::size_t k = hi; k < end; ++k) emit(k, k + 1);
    }
    i = end;
  }
  if (sentence.tokens.empty()) {
    throw InvalidInput("cannot tokenize empty or whitespace-only text");
  }
  return sentence;
}

}  // namespace salsa
