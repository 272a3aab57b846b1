// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "tokenize.hpp"

using namespace segue;

TEST_CASE("tokenize splits on non-alphanumerics and lowercases") {
  CHECK(tokenize("Top Hits!! 2017") == std::vector<std::string>{"top", "hits", "2017"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("Remixed/REMIXES") == std::vector<std::string>{"remixed", "remixes"});
  CHECK(tokenize("running-music") == std::vector<std::string>{"running", "music"});
  CHECK(tokenize("   \t\n ") == std::vector<std::string>{});
}

TEST_CASE("tokenize applies NFKC before splitting") {
  // fullwidth Latin and the fi ligature normalize to ASCII
  CHECK(tokenize("Ｔｏｐ") == std::vector<std::string>{"top"});
  CHECK(tokenize("ﬁre") == std::vector<std::string>{"fire"});
  // accented characters survive as letters
  CHECK(tokenize("Beyoncé") == std::vector<std::string>{"beyoncé"});
}

TEST_CASE("word groups match whole tokens only") {
  CHECK(title_group_mask("Top Hits 2017") == 1u);
  CHECK(title_group_mask("TOP hits!!") == title_group_mask("top hits"));
  CHECK(title_group_mask("chill") == 0u);
  CHECK(title_group_mask("newton") == 0u);  // no substring firing of "new"
  CHECK(title_group_mask("new remixes") == (2u | 4u));
  CHECK(title_group_mask("the latest & best remix") == (1u | 2u | 4u));
}

TEST_CASE("group word lists") {
  CHECK(word_group(0) == std::vector<std::string>{"top", "best", "popular", "hot", "hits"});
  CHECK(word_group(1) == std::vector<std::string>{"latest", "new", "recent"});
  CHECK(word_group(2) == std::vector<std::string>{"remix", "remixed", "remixes"});
}
