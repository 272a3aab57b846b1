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
#include "hin.hpp"
#include "params.hpp"
#include "retrieval.hpp"

namespace segue {

// The four training-corpus constructions:
//   emb1  playlists as documents, tracks as terms
//   emb2  tracks interleaved with the playlist title words
//   emb3  ATPA metapath walks (artist/track/playlist nodes)
//   emb4  TPT metapath walks (track/playlist nodes)
enum class EmbVariant : std::uint8_t { emb1 = 0, emb2 = 1, emb3 = 2, emb4 = 3 };
const char* emb_variant_name(EmbVariant v);

struct VocabItem {
  NodeKind kind;
  std::uint32_t id;  // track/artist id, playlist index, or index into words
};

// Token sequences over a fixed vocabulary; rows ordered by (kind, id) with
// words sorted lexicographically.
struct EmbCorpus {
  EmbVariant variant;
  std::vector<VocabItem> items;
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;               // per row
  std::vector<std::vector<std::uint32_t>> sequences;  // row indexes
};

struct EmbeddingMatrix {
  EmbVariant variant = EmbVariant::emb1;
  std::uint32_t dim = 200;
  std::uint64_t corpus_fp = 0;
  std::vector<VocabItem> items;
  std::vector<std::string> words;
  std::vector<float> input;   // row-major, items.size() x dim
  std::vector<float> output;  // training only; not persisted

  std::vector<std::int32_t> track_row;  // track id -> row, -1 when absent

  std::size_t rows() const { return items.size(); }
  const float* row(std::size_t r) const { return input.data() + r * dim; }
  void rebuild_track_rows(std::size_t num_tracks);

  std::string serialize() const;
  static EmbeddingMatrix deserialize(std::string_view bytes, const std::string& origin);
  void save(const std::string& path) const;
  static EmbeddingMatrix load(const std::string& path);
};

struct CbowConfig {
  std::uint32_t dim = 200;
  std::uint32_t window = 20;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  double lr = 0.025;
  std::uint64_t seed = 42;
  int threads = 1;  // > 1 uses lock-free shared updates (not deterministic)
};

EmbCorpus build_emb_corpus(const Corpus& corpus, const std::unordered_set<Pid>& background_pids,
                           EmbVariant variant, const Params& params, std::uint64_t rng_seed);

EmbeddingMatrix train_cbow(const EmbCorpus& corpus, const CbowConfig& config);

/// Mean loss over every (context, center) position with negatives drawn from
/// a fixed-seed stream; diagnostic companion to train_cbow.
double corpus_loss(const EmbCorpus& corpus, const EmbeddingMatrix& emb, std::uint32_t window,
                   std::uint32_t negatives, std::uint64_t seed);

/// Mean of the in-vocabulary seed track vectors. Throws Errc::no_signal when
/// every seed is out of vocabulary.
std::vector<float> playlist_vector(const std::vector<TrackId>& seed_tracks,
                                   const EmbeddingMatrix& emb);

/// Exact top-`limit` tracks by cosine similarity, excluding seeds and
/// non-track rows, ties broken by track id.
CandidateList nn_candidates(const std::vector<float>& vec, const EmbeddingMatrix& emb,
                            const std::vector<TrackId>& seed_tracks, Source source,
                            std::uint32_t limit);

}  // namespace segue
