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

#ifndef SALSA_TOKENIZER_H_
#define SALSA_TOKENIZER_H_

#include <string>
#include <string_view>

#include "salsa/types.h"

namespace salsa {

// Whitespace tokenization with leading and trailing punctuation detached
// one character at a time. Word-internal punctuation ("don't", "3.5") stays
// attached. Throws InvalidInput on empty or whitespace-only text.
TokenizedSentence tokenize(std::string_view text, Side role = Side::kComplex,
                           std::string id = {});

// Code point helpers over UTF-8. Invalid sequences decode as U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
std::size_t utf8_length(std::string_view text);
// Substring by code point offsets.
std::string utf8_slice(std::string_view text, std::size_t start,
                       std::size_t end);

bool is_punctuation(char32_t c);
bool is_space(char32_t c);

}  // namespace salsa

#endif  // SALSA_TOKENIZER_H_
