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
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "corpus.hpp"
#include "retrieval.hpp"
#include "splits.hpp"

namespace segue {

// The fixed 26-feature layout. Playlist counts are computed from the seed
// tracks only (held tracks are unknown at inference); the held-out count is
// the one value the task hands to the predictor.
enum FeatureIndex : std::size_t {
  F_TITLE_AVAILABLE = 0,      // 1 playlist-only
  F_NUM_TRACKS,               // 2  (seed tracks)
  F_NUM_HELD,                 // 3
  F_UNIQUE_ALBUM_RATIO,       // 4
  F_UNIQUE_ARTIST_RATIO,      // 5
  F_MAX_ALBUM_FREQ_RATIO,     // 6
  F_MAX_ARTIST_FREQ_RATIO,    // 7
  F_TITLE_GROUP_TOP,          // 8  top/best/popular/hot/hits
  F_TITLE_GROUP_NEW,          // 9  latest/new/recent
  F_TITLE_GROUP_REMIX,        // 10 remix/remixed/remixes
  F_TRACK_BG_RATIO,           // 11 track-only
  F_ARTIST_BG_RATIO,          // 12
  F_ALBUM_BG_RATIO,           // 13
  F_TRACK_TITLE_REMIX,        // 14
  F_PARENT_GROUP_TOP,         // 15
  F_PARENT_GROUP_NEW,         // 16
  F_PARENT_GROUP_REMIX,       // 17
  F_RANK_QE,                  // 18 pair
  F_RANK_META1,               // 19
  F_RANK_META2,               // 20
  F_RANK_EMB1,                // 21
  F_RANK_EMB2,                // 22
  F_RANK_EMB3,                // 23
  F_RANK_EMB4,                // 24
  F_SAME_ARTIST_RATIO,        // 25
  F_SAME_ALBUM_RATIO,         // 26
  kFeatureCount,
};

using FeatureVec = std::array<double, kFeatureCount>;

// 1-based ranks per source; 0 means not present (mapped to the sentinel).
struct SourceRanks {
  std::array<std::uint32_t, kSourceCount> rank{};
};

// limit+1 per source: 1001/501/501/251/251/251/251 at default cutoffs
std::array<std::uint32_t, kSourceCount> rank_sentinels(const Params& params);

struct RankingExample {
  Pid pid;
  TrackId track;
  FeatureVec features;
  std::int8_t label;  // 0/1, or -1 when unlabeled (inference)
};

// Seed-side aggregates shared by every candidate of one playlist.
struct PlaylistFeatureSide {
  double values[F_TITLE_GROUP_REMIX + 1];
  std::vector<TrackId> seed_tracks;
};
PlaylistFeatureSide playlist_feature_side(const SplitPlaylist& split, const Corpus& corpus);

FeatureVec extract_features(const SplitPlaylist& split, TrackId candidate,
                            const SourceRanks& ranks,
                            const std::array<std::uint32_t, kSourceCount>& sentinels,
                            const BackgroundStats& bg, const Corpus& corpus);
FeatureVec extract_features(const PlaylistFeatureSide& side, TrackId candidate,
                            const SourceRanks& ranks,
                            const std::array<std::uint32_t, kSourceCount>& sentinels,
                            const BackgroundStats& bg, const Corpus& corpus);

/// One labeled example per candidate in the union; labels read from
/// split.held_tracks.
std::vector<RankingExample> build_ranking_examples(
    const SplitPlaylist& split, const std::vector<std::pair<TrackId, SourceRanks>>& candidates,
    const std::array<std::uint32_t, kSourceCount>& sentinels, const BackgroundStats& bg,
    const Corpus& corpus);

// Dense binary table plus the plain-text ranking format
// `label qid:<pid> 1:<v> ... 26:<v>`.
void write_features_bin(const std::string& path, std::uint64_t corpus_fp,
                        const std::array<std::uint32_t, kSourceCount>& sentinels,
                        const std::vector<RankingExample>& rows);
std::vector<RankingExample> read_features_bin(const std::string& path,
                                              std::uint64_t expect_corpus_fp);
void write_features_text(const std::string& path, const std::vector<RankingExample>& rows);

}  // namespace segue
