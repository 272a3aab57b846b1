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

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "corpus.hpp"

namespace segue {

// The three pseudo-document collections:
//   playlist_tracks     one doc per background playlist, terms are track ids
//   track_parent_titles one doc per background track, terms are words from
//                       the titles of its parent playlists (tf = number of
//                       parent titles containing the word)
//   track_meta          one doc per background track, terms are words from
//                       its own title + artist name + album name
enum class CollectionKind : std::uint8_t {
  playlist_tracks = 0,
  track_parent_titles = 1,
  track_meta = 2,
};

struct TermCount {
  std::uint32_t term;
  std::uint32_t tf;
};

struct PseudoDocCollection {
  CollectionKind kind;
  bool track_terms = false;  // term id space == track id space
  std::vector<std::vector<TermCount>> docs;
  std::vector<std::int64_t> doc_keys;  // pid (playlist docs) or track id (track docs)
  std::vector<std::string> word_terms; // term id -> word, when !track_terms
  std::unordered_map<std::string, std::uint32_t> word_ids;
  std::uint32_t term_space = 0;        // number of term ids

  std::uint32_t word_id(const std::string& w) const {
    auto it = word_ids.find(w);
    return it == word_ids.end() ? kInvalidId : it->second;
  }
};

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;
};

struct InvertedIndex {
  CollectionKind kind;
  bool track_terms = false;
  std::uint64_t corpus_fp = 0;
  std::size_t num_docs = 0;
  double avgdl = 0.0;
  std::uint64_t total_terms = 0;  // sum of doc lengths == sum of cf
  std::vector<std::vector<Posting>> postings;  // per term id, doc-ascending
  std::vector<std::uint64_t> cf;
  std::vector<std::uint32_t> doc_len;
  std::vector<std::int64_t> doc_keys;
  std::vector<std::string> word_terms;
  std::unordered_map<std::string, std::uint32_t> word_ids;
  // forward docs, kept for the playlist collection (feedback expansion reads
  // documents, not postings)
  std::vector<std::vector<TermCount>> forward;

  std::size_t df(std::uint32_t term) const {
    return term < postings.size() ? postings[term].size() : 0;
  }
  std::uint32_t word_id(const std::string& w) const {
    auto it = word_ids.find(w);
    return it == word_ids.end() ? kInvalidId : it->second;
  }

  std::string serialize() const;
  static InvertedIndex deserialize(std::string_view bytes, const std::string& origin);
  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);
};

PseudoDocCollection build_playlist_doc_collection(const Corpus& corpus,
                                                  const std::unordered_set<Pid>& background_pids,
                                                  bool raw_tf = false);
PseudoDocCollection build_track_title_doc_collection(const Corpus& corpus,
                                                     const std::unordered_set<Pid>& background_pids);
PseudoDocCollection build_track_meta_doc_collection(const Corpus& corpus,
                                                    const std::unordered_set<Pid>& background_pids);

InvertedIndex build_inverted_index(const PseudoDocCollection& collection,
                                   std::uint64_t corpus_fp = 0);

}  // namespace segue
