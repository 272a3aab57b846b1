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

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace segue {

/// Canonical tokenizer used for titles, artist/album names and the title
/// word-group features: NFKC-normalize, lowercase per code point, split on
/// non-alphanumeric code points, drop empties. No stemming, no stopwords.
std::vector<std::string> tokenize(std::string_view text);

// The three title word groups: 0 = top/best/popular/hot/hits,
// 1 = latest/new/recent, 2 = remix/remixed/remixes. Matching is whole-token
// equality after tokenization.
inline constexpr int kWordGroupCount = 3;
const std::vector<std::string>& word_group(int g);

bool tokens_contain_group_word(const std::vector<std::string>& tokens, int group);

// Bitmask over the three groups for a raw title.
unsigned title_group_mask(std::string_view title);

}  // namespace segue
