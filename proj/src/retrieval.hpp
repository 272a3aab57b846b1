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
#include <vector>

#include "common.hpp"
#include "index.hpp"
#include "params.hpp"

namespace segue {

enum class Source : std::uint8_t { QE = 0, META1, META2, EMB1, EMB2, EMB3, EMB4 };
inline constexpr int kSourceCount = 7;
const char* source_name(Source s);

struct Candidate {
  TrackId track;
  double score;
};

// Invariants: scores non-increasing, entries distinct, none in the seed set,
// size <= limit.
struct CandidateList {
  Source source;
  std::uint32_t limit = 0;
  std::vector<Candidate> entries;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct ScoredDoc {
  std::uint32_t doc;
  double score;
};

/// BM25 over the bag of query term ids. Unknown terms contribute nothing;
/// docs matching no term are omitted. Ties broken by ascending doc id.
std::vector<ScoredDoc> bm25_rank(const std::vector<std::uint32_t>& query_terms,
                                 const InvertedIndex& index, const Bm25Params& params,
                                 std::size_t top_k);

/// Dirichlet-smoothed query likelihood (log space) over docs containing at
/// least one known query term. mu == 0 keeps only docs containing every
/// known term. Unknown terms are skipped.
std::vector<ScoredDoc> ql_rank(const std::vector<std::uint32_t>& query_terms,
                               const InvertedIndex& index, double mu, std::size_t top_k);

/// RM1 expansion over feedback playlists. `feedback` carries log seed
/// likelihoods (the ql_rank output); the expansion factor is the unsmoothed
/// in-document term ratio. Output excludes seed tracks and is normalized to
/// sum 1, ordered score-descending with id tiebreak.
std::vector<Candidate> rm1_expand(const std::vector<TrackId>& seed_tracks,
                                  const std::vector<ScoredDoc>& feedback,
                                  const InvertedIndex& index);

/// Feedback retrieval + RM1, truncated to `limit`. Empty when there are no
/// usable seeds or no feedback signal.
CandidateList qe_candidates(const std::vector<TrackId>& seed_tracks, const InvertedIndex& index,
                            const Params& params);

/// BM25 candidates from one of the two track meta-description collections,
/// querying with the playlist title. Seeds are removed before truncation.
CandidateList meta_candidates(const std::string& title, bool has_title, Source which,
                              const InvertedIndex& index, const std::vector<TrackId>& seed_tracks,
                              const Params& params);

// Batch candidate file: one list per playlist, versioned binary.
void write_candidates_file(const std::string& path, std::uint64_t corpus_fp,
                           const std::vector<std::pair<Pid, CandidateList>>& lists);
std::vector<std::pair<Pid, CandidateList>> read_candidates_file(const std::string& path,
                                                                std::uint64_t expect_corpus_fp,
                                                                Source* source_out = nullptr);

}  // namespace segue
