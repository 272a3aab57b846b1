/*
 * Copyright 2026 Segue developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tokenize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf16.h>

#include <algorithm>

#include "common.hpp"

namespace segue {

namespace {

const icu::Normalizer2& nfkc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* inst = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status) || inst == nullptr) {
    fail(Errc::internal, "ICU NFKC normalizer unavailable");
  }
  return *inst;
}

void append_utf8(UChar32 c, std::string& out) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

const std::array<std::vector<std::string>, kWordGroupCount> kGroups = {{
    {"top", "best", "popular", "hot", "hits"},
    {"latest", "new", "recent"},
    {"remix", "remixed", "remixes"},
}};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;

  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString norm = nfkc().normalize(us, status);
  if (U_FAILURE(status)) norm = us;

  std::string cur;
  for (int32_t i = 0; i < norm.length();) {
    UChar32 c = norm.char32At(i);
    i += U16_LENGTH(c);
    if (u_isalnum(c)) {
      append_utf8(u_tolower(c), cur);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

const std::vector<std::string>& word_group(int g) { return kGroups.at(static_cast<std::size_t>(g)); }

bool tokens_contain_group_word(const std::vector<std::string>& tokens, int group) {
  const auto& words = word_group(group);
  for (const auto& t : tokens) {
    if (std::find(words.begin(), words.end(), t) != words.end()) return true;
  }
  return false;
}

unsigned title_group_mask(std::string_view title) {
  auto tokens = tokenize(title);
  unsigned mask = 0;
  for (int g = 0; g < kWordGroupCount; ++g) {
    if (tokens_contain_group_word(tokens, g)) mask |= (1u << g);
  }
  return mask;
}

}  // namespace segue
