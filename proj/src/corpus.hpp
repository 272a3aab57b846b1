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
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "tokenize.hpp"

namespace segue {

struct TrackMeta {
  std::string title;
  ArtistId artist = kInvalidId;
  AlbumId album = kInvalidId;
  std::int64_t duration_ms = 0;  // stored for format fidelity, no feature reads it
};

struct PlaylistRecord {
  Pid pid = 0;
  std::string title;                // raw, as found in the slice
  std::vector<TrackId> tracks;      // source `pos` order, duplicates kept
};

// Per-entity counts of *distinct* parent playlists, over a chosen set of
// background playlists.
struct BackgroundStats {
  std::uint64_t total_playlists = 0;
  std::vector<std::uint32_t> track_playlists;
  std::vector<std::uint32_t> artist_playlists;
  std::vector<std::uint32_t> album_playlists;
  // per track: parent playlists whose title matches word group g
  std::array<std::vector<std::uint32_t>, kWordGroupCount> track_title_group;
};

// Interned view of a set of MPD-style JSON slices. Immutable once built and
// safe to share read-only across threads.
class Corpus {
 public:
  const std::vector<PlaylistRecord>& playlists() const { return playlists_; }
  std::size_t num_playlists() const { return playlists_.size(); }
  std::size_t num_tracks() const { return track_uris_.size(); }
  std::size_t num_artists() const { return artist_uris_.size(); }
  std::size_t num_albums() const { return album_uris_.size(); }

  const std::string& track_uri(TrackId t) const { return track_uris_[t]; }
  const std::string& artist_uri(ArtistId a) const { return artist_uris_[a]; }
  const std::string& album_uri(AlbumId a) const { return album_uris_[a]; }
  const std::string& artist_name(ArtistId a) const { return artist_names_[a]; }
  const std::string& album_name(AlbumId a) const { return album_names_[a]; }
  const TrackMeta& track_meta(TrackId t) const { return track_meta_[t]; }

  std::optional<TrackId> find_track(const std::string& uri) const;
  std::optional<ArtistId> find_artist(const std::string& uri) const;
  std::optional<AlbumId> find_album(const std::string& uri) const;

  const BackgroundStats& bg_stats() const { return bg_stats_; }
  bool deterministic() const { return deterministic_; }

  // Order-insensitive identity of the interned id spaces; downstream
  // artifact files embed this to detect corpus/artifact mismatches.
  std::uint64_t fingerprint() const;

  std::string serialize() const;
  static Corpus deserialize(std::string_view bytes, const std::string& origin);
  void save(const std::string& path) const;
  static Corpus load(const std::string& path);
  std::string stats_json() const;

  friend Corpus load_mpd_slices(const std::vector<std::string>& paths, bool deterministic,
                                int threads);

 private:
  std::vector<PlaylistRecord> playlists_;
  std::vector<std::string> track_uris_, artist_uris_, album_uris_;
  std::vector<std::string> artist_names_, album_names_;
  std::vector<TrackMeta> track_meta_;
  std::unordered_map<std::string, std::uint32_t> track_by_uri_, artist_by_uri_, album_by_uri_;
  BackgroundStats bg_stats_;
  bool deterministic_ = true;

  void rebuild_lookup();
};

/// Parses MPD JSON slice files and interns every URI into a dense id space.
/// With deterministic=true, ids are assigned in sorted-URI order and
/// playlists sorted by pid, so the result does not depend on path order.
Corpus load_mpd_slices(const std::vector<std::string>& paths, bool deterministic = true,
                       int threads = 1);

/// Distinct-playlist containment counts over the whole corpus.
BackgroundStats compute_background_stats(const Corpus& corpus);
/// Same, restricted to the given background pids (no leakage from the rest).
BackgroundStats compute_background_stats(const Corpus& corpus,
                                         const std::unordered_set<Pid>& background_pids);

}  // namespace segue
