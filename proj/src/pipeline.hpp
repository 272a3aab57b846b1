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
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "embed.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "index.hpp"
#include "ltr.hpp"
#include "params.hpp"
#include "retrieval.hpp"
#include "splits.hpp"

namespace segue {

// Everything prediction needs, loaded once and shared read-only.
struct PipelineArtifacts {
  Corpus corpus;
  BackgroundStats bg;
  std::vector<Pid> background_pids;
  InvertedIndex index_qe;
  InvertedIndex index_meta1;
  InvertedIndex index_meta2;
  std::array<EmbeddingMatrix, 4> embeddings;
  LtrModel model;

  // tracks ordered by background containment (desc, id asc); the padding
  // order that tops rankings up to the contract size
  std::vector<TrackId> popularity_order;
  void rebuild_popularity();

  static PipelineArtifacts open_dir(const std::string& dir, bool with_model = true);
};

// Conventional artifact file names inside a work directory.
namespace artifact_names {
inline constexpr const char* corpus = "corpus.bin";
inline constexpr const char* corpus_stats = "corpus_stats.json";
inline constexpr const char* background = "background.json";
inline constexpr const char* index_qe = "index_qe.bin";
inline constexpr const char* index_meta1 = "index_meta1.bin";
inline constexpr const char* index_meta2 = "index_meta2.bin";
inline const char* embedding(int i) {  // emb1.bin .. emb4.bin
  static const char* names[4] = {"emb1.bin", "emb2.bin", "emb3.bin", "emb4.bin"};
  return names[i];
}
inline constexpr const char* model_json = "model.json";
inline constexpr const char* model_bin = "model.bin";
}  // namespace artifact_names

/// One source's candidate list for one playlist (seed-free, within limit).
CandidateList source_candidates(const SplitPlaylist& split, Source source,
                                const PipelineArtifacts& art, const Params& params);

/// Union of all seven source lists with per-source 1-based ranks.
std::vector<std::pair<TrackId, SourceRanks>> candidate_union(const SplitPlaylist& split,
                                                             const PipelineArtifacts& art,
                                                             const Params& params);

/// LTR-ranked recommendation of exactly params.n_predictions distinct,
/// seed-free tracks, popularity-padded when the candidate union is short.
std::vector<TrackId> recommend(const SplitPlaylist& split, const PipelineArtifacts& art,
                               const Params& params);

struct SubmissionRow {
  Pid pid;
  std::vector<TrackId> tracks;
};

std::vector<SubmissionRow> run_batch(const std::vector<SplitPlaylist>& challenge,
                                     const PipelineArtifacts& art, const Params& params);

std::vector<std::pair<Pid, std::vector<std::string>>> rows_to_uris(
    const std::vector<SubmissionRow>& rows, const Corpus& corpus);

/// Labeled feature rows for a split set (training side of the LTR stage).
std::vector<RankingExample> build_examples_for_splits(const std::vector<SplitPlaylist>& splits,
                                                      const PipelineArtifacts& art,
                                                      const Params& params);

struct PipelineResult {
  MetricReport report;
  std::string submission_path;
  std::string report_json_path;
};

/// ingest -> split -> index -> embeddings -> candidates -> features ->
/// train -> predict -> evaluate, writing every artifact under workdir.
PipelineResult run_pipeline(const std::vector<std::string>& slice_paths, const Params& params,
                            const std::string& workdir, const std::string& team,
                            const std::string& email);

}  // namespace segue
