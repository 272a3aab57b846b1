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

#include "features.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "io.hpp"
#include "tokenize.hpp"

namespace segue {

namespace {

constexpr char kFeatMagic[9] = "SEGFEAT1";
constexpr std::uint32_t kFeatVersion = 1;

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

std::array<std::uint32_t, kSourceCount> rank_sentinels(const Params& params) {
  return {params.qe_limit + 1,  params.meta_limit + 1, params.meta_limit + 1,
          params.emb_limit + 1, params.emb_limit + 1,  params.emb_limit + 1,
          params.emb_limit + 1};
}

PlaylistFeatureSide playlist_feature_side(const SplitPlaylist& split, const Corpus& corpus) {
  PlaylistFeatureSide side;
  side.seed_tracks = split.seed_tracks;
  const double m = static_cast<double>(split.seed_tracks.size());

  std::unordered_map<AlbumId, std::uint32_t> album_freq;
  std::unordered_map<ArtistId, std::uint32_t> artist_freq;
  for (TrackId t : split.seed_tracks) {
    ++album_freq[corpus.track_meta(t).album];
    ++artist_freq[corpus.track_meta(t).artist];
  }
  std::uint32_t max_album = 0, max_artist = 0;
  for (auto [_, f] : album_freq) max_album = std::max(max_album, f);
  for (auto [_, f] : artist_freq) max_artist = std::max(max_artist, f);

  unsigned mask = split.has_title ? title_group_mask(split.title) : 0u;

  side.values[F_TITLE_AVAILABLE] = split.has_title ? 1.0 : 0.0;
  side.values[F_NUM_TRACKS] = m;
  side.values[F_NUM_HELD] = static_cast<double>(split.n_held);
  side.values[F_UNIQUE_ALBUM_RATIO] = safe_ratio(static_cast<double>(album_freq.size()), m);
  side.values[F_UNIQUE_ARTIST_RATIO] = safe_ratio(static_cast<double>(artist_freq.size()), m);
  side.values[F_MAX_ALBUM_FREQ_RATIO] = safe_ratio(max_album, m);
  side.values[F_MAX_ARTIST_FREQ_RATIO] = safe_ratio(max_artist, m);
  side.values[F_TITLE_GROUP_TOP] = (mask & 1u) ? 1.0 : 0.0;
  side.values[F_TITLE_GROUP_NEW] = (mask & 2u) ? 1.0 : 0.0;
  side.values[F_TITLE_GROUP_REMIX] = (mask & 4u) ? 1.0 : 0.0;
  return side;
}

namespace {

FeatureVec extract_with_side(const PlaylistFeatureSide& side, TrackId candidate,
                             const SourceRanks& ranks,
                             const std::array<std::uint32_t, kSourceCount>& sentinels,
                             const BackgroundStats& bg, const Corpus& corpus) {
  FeatureVec x{};
  for (std::size_t i = 0; i <= F_TITLE_GROUP_REMIX; ++i) x[i] = side.values[i];

  const TrackMeta& meta = corpus.track_meta(candidate);
  const double total = static_cast<double>(bg.total_playlists);
  x[F_TRACK_BG_RATIO] = safe_ratio(bg.track_playlists[candidate], total);
  x[F_ARTIST_BG_RATIO] =
      meta.artist == kInvalidId ? 0.0 : safe_ratio(bg.artist_playlists[meta.artist], total);
  x[F_ALBUM_BG_RATIO] =
      meta.album == kInvalidId ? 0.0 : safe_ratio(bg.album_playlists[meta.album], total);
  x[F_TRACK_TITLE_REMIX] = (title_group_mask(meta.title) & 4u) ? 1.0 : 0.0;
  x[F_PARENT_GROUP_TOP] = safe_ratio(bg.track_title_group[0][candidate], total);
  x[F_PARENT_GROUP_NEW] = safe_ratio(bg.track_title_group[1][candidate], total);
  x[F_PARENT_GROUP_REMIX] = safe_ratio(bg.track_title_group[2][candidate], total);

  for (int s = 0; s < kSourceCount; ++s) {
    std::uint32_t r = ranks.rank[s];
    x[F_RANK_QE + s] = static_cast<double>(r == 0 || r > sentinels[s] ? sentinels[s] : r);
  }

  std::uint32_t same_artist = 0, same_album = 0;
  for (TrackId t : side.seed_tracks) {
    const TrackMeta& sm = corpus.track_meta(t);
    if (sm.artist == meta.artist && meta.artist != kInvalidId) ++same_artist;
    if (sm.album == meta.album && meta.album != kInvalidId) ++same_album;
  }
  const double m = side.values[F_NUM_TRACKS];
  x[F_SAME_ARTIST_RATIO] = safe_ratio(same_artist, m);
  x[F_SAME_ALBUM_RATIO] = safe_ratio(same_album, m);
  return x;
}

}  // namespace

FeatureVec extract_features(const SplitPlaylist& split, TrackId candidate,
                            const SourceRanks& ranks,
                            const std::array<std::uint32_t, kSourceCount>& sentinels,
                            const BackgroundStats& bg, const Corpus& corpus) {
  return extract_with_side(playlist_feature_side(split, corpus), candidate, ranks, sentinels, bg,
                           corpus);
}

FeatureVec extract_features(const PlaylistFeatureSide& side, TrackId candidate,
                            const SourceRanks& ranks,
                            const std::array<std::uint32_t, kSourceCount>& sentinels,
                            const BackgroundStats& bg, const Corpus& corpus) {
  return extract_with_side(side, candidate, ranks, sentinels, bg, corpus);
}

std::vector<RankingExample> build_ranking_examples(
    const SplitPlaylist& split, const std::vector<std::pair<TrackId, SourceRanks>>& candidates,
    const std::array<std::uint32_t, kSourceCount>& sentinels, const BackgroundStats& bg,
    const Corpus& corpus) {
  PlaylistFeatureSide side = playlist_feature_side(split, corpus);
  std::vector<RankingExample> out;
  out.reserve(candidates.size());
  for (const auto& [track, ranks] : candidates) {
    RankingExample ex;
    ex.pid = split.pid;
    ex.track = track;
    ex.features = extract_with_side(side, track, ranks, sentinels, bg, corpus);
    ex.label = std::binary_search(split.held_tracks.begin(), split.held_tracks.end(), track) ? 1 : 0;
    out.push_back(std::move(ex));
  }
  return out;
}

void write_features_bin(const std::string& path, std::uint64_t corpus_fp,
                        const std::array<std::uint32_t, kSourceCount>& sentinels,
                        const std::vector<RankingExample>& rows) {
  ByteWriter w;
  w.magic(kFeatMagic);
  w.u32(kFeatVersion);
  w.u64(corpus_fp);
  w.u32(kFeatureCount);
  for (std::uint32_t s : sentinels) w.u32(s);
  w.u64(rows.size());
  for (const auto& row : rows) {
    w.i64(row.pid);
    w.u32(row.track);
    w.u8(static_cast<std::uint8_t>(row.label));
    for (double v : row.features) w.f64(v);
  }
  write_file(path, w.bytes());
}

std::vector<RankingExample> read_features_bin(const std::string& path,
                                              std::uint64_t expect_corpus_fp) {
  std::string bytes = read_file(path);
  ByteReader r(bytes, path);
  r.magic(kFeatMagic, kFeatVersion);
  std::uint64_t fp = r.u64();
  if (expect_corpus_fp != 0 && fp != expect_corpus_fp) {
    fail(Errc::version, path + ": features were computed against a different corpus");
  }
  std::uint32_t n_features = r.u32();
  if (n_features != kFeatureCount) {
    fail(Errc::version, path + ": feature count " + std::to_string(n_features) + " != " +
                            std::to_string(kFeatureCount));
  }
  for (int s = 0; s < kSourceCount; ++s) r.u32();
  std::uint64_t n = r.u64();
  std::vector<RankingExample> rows;
  rows.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    RankingExample row;
    row.pid = r.i64();
    row.track = r.u32();
    row.label = static_cast<std::int8_t>(r.u8());
    for (auto& v : row.features) v = r.f64();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_features_text(const std::string& path, const std::vector<RankingExample>& rows) {
  std::string out;
  char buf[64];
  for (const auto& row : rows) {
    out += std::to_string(row.label < 0 ? 0 : row.label);
    out += " qid:";
    out += std::to_string(row.pid);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::snprintf(buf, sizeof buf, " %zu:%.10g", f + 1, row.features[f]);
      out += buf;
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace segue
