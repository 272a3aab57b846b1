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

#include "corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>

#include <nlohmann/json.hpp>

#include "io.hpp"

namespace segue {

using nlohmann::json;

namespace {

constexpr char kCorpusMagic[9] = "SEGCORP1";
constexpr std::uint32_t kCorpusVersion = 1;

struct RawTrack {
  std::int64_t pos = 0;
  std::string track_uri, track_name;
  std::string artist_uri, artist_name;
  std::string album_uri, album_name;
  std::int64_t duration_ms = 0;
};

struct RawPlaylist {
  Pid pid = 0;
  std::string name;
  std::vector<RawTrack> tracks;
};

std::string require_string(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    fail(Errc::schema, where + ": missing field '" + key + "'");
  }
  return it->get<std::string>();
}

std::int64_t require_int(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    fail(Errc::schema, where + ": missing field '" + key + "'");
  }
  return it->get<std::int64_t>();
}

std::vector<RawPlaylist> parse_slice(const std::string& path) {
  std::string content = read_file(path);
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  auto pls = root.find("playlists");
  if (pls == root.end() || !pls->is_array()) {
    fail(Errc::schema, path + ": missing 'playlists' array");
  }
  std::vector<RawPlaylist> out;
  out.reserve(pls->size());
  for (const auto& p : *pls) {
    RawPlaylist rp;
    if (!p.contains("pid") || !p["pid"].is_number()) {
      fail(Errc::schema, path + ": playlist without 'pid'");
    }
    rp.pid = p["pid"].get<Pid>();
    const std::string where = path + ": pid " + std::to_string(rp.pid);
    rp.name = require_string(p, "name", where);
    auto tracks = p.find("tracks");
    if (tracks == p.end() || !tracks->is_array()) {
      fail(Errc::schema, where + ": missing 'tracks' array");
    }
    rp.tracks.reserve(tracks->size());
    for (const auto& t : *tracks) {
      RawTrack rt;
      rt.pos = require_int(t, "pos", where);
      rt.track_uri = require_string(t, "track_uri", where);
      rt.track_name = require_string(t, "track_name", where);
      rt.artist_uri = require_string(t, "artist_uri", where);
      rt.artist_name = require_string(t, "artist_name", where);
      rt.album_uri = require_string(t, "album_uri", where);
      rt.album_name = require_string(t, "album_name", where);
      rt.duration_ms = require_int(t, "duration_ms", where);
      rp.tracks.push_back(std::move(rt));
    }
    std::stable_sort(rp.tracks.begin(), rp.tracks.end(),
                     [](const RawTrack& a, const RawTrack& b) { return a.pos < b.pos; });
    out.push_back(std::move(rp));
  }
  return out;
}

std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& map,
                     std::vector<std::string>& table, const std::string& key) {
  auto [it, inserted] = map.emplace(key, static_cast<std::uint32_t>(table.size()));
  if (inserted) table.push_back(key);
  return it->second;
}

}  // namespace

std::optional<TrackId> Corpus::find_track(const std::string& uri) const {
  auto it = track_by_uri_.find(uri);
  if (it == track_by_uri_.end()) return std::nullopt;
  return it->second;
}

std::optional<ArtistId> Corpus::find_artist(const std::string& uri) const {
  auto it = artist_by_uri_.find(uri);
  if (it == artist_by_uri_.end()) return std::nullopt;
  return it->second;
}

std::optional<AlbumId> Corpus::find_album(const std::string& uri) const {
  auto it = album_by_uri_.find(uri);
  if (it == album_by_uri_.end()) return std::nullopt;
  return it->second;
}

void Corpus::rebuild_lookup() {
  track_by_uri_.clear();
  artist_by_uri_.clear();
  album_by_uri_.clear();
  track_by_uri_.reserve(track_uris_.size());
  for (std::uint32_t i = 0; i < track_uris_.size(); ++i) track_by_uri_[track_uris_[i]] = i;
  for (std::uint32_t i = 0; i < artist_uris_.size(); ++i) artist_by_uri_[artist_uris_[i]] = i;
  for (std::uint32_t i = 0; i < album_uris_.size(); ++i) album_by_uri_[album_uris_[i]] = i;
}

std::uint64_t Corpus::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t counts[3] = {track_uris_.size(), artist_uris_.size(), playlists_.size()};
  h = fnv1a64(counts, sizeof counts, h);
  for (const auto& uri : track_uris_) h = fnv1a64(uri, h);
  return h;
}

Corpus load_mpd_slices(const std::vector<std::string>& paths, bool deterministic, int threads) {
  if (paths.empty()) fail(Errc::invalid_argument, "no input slice files");

  std::vector<std::vector<RawPlaylist>> parsed(paths.size());
  std::mutex err_mutex;
  std::exception_ptr first_error;
  parallel_chunks(paths.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        parsed[i] = parse_slice(paths[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  });
  if (first_error) std::rethrow_exception(first_error);

  std::vector<RawPlaylist> raw;
  for (auto& part : parsed) {
    for (auto& rp : part) raw.push_back(std::move(rp));
  }
  if (deterministic) {
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawPlaylist& a, const RawPlaylist& b) { return a.pid < b.pid; });
  }

  Corpus c;
  c.deterministic_ = deterministic;

  // Dropped playlists and size-limit violations are warnings: synthetic
  // corpora are allowed to break the 5..250 bound of real slices.
  std::size_t kept = 0;
  for (auto& rp : raw) {
    if (rp.tracks.empty()) {
      std::fprintf(stderr, "warning: playlist %lld has no tracks, skipped\n",
                   static_cast<long long>(rp.pid));
      continue;
    }
    if (rp.tracks.size() < 5 || rp.tracks.size() > 250) {
      std::fprintf(stderr, "warning: playlist %lld has %zu tracks (outside 5..250)\n",
                   static_cast<long long>(rp.pid), rp.tracks.size());
    }
    raw[kept++] = std::move(rp);
  }
  raw.resize(kept);

  if (deterministic) {
    std::vector<std::string> uris;
    for (const auto& rp : raw)
      for (const auto& t : rp.tracks) uris.push_back(t.track_uri);
    std::sort(uris.begin(), uris.end());
    uris.erase(std::unique(uris.begin(), uris.end()), uris.end());
    c.track_uris_ = std::move(uris);

    std::vector<std::string> artists, albums;
    for (const auto& rp : raw) {
      for (const auto& t : rp.tracks) {
        artists.push_back(t.artist_uri);
        albums.push_back(t.album_uri);
      }
    }
    std::sort(artists.begin(), artists.end());
    artists.erase(std::unique(artists.begin(), artists.end()), artists.end());
    std::sort(albums.begin(), albums.end());
    albums.erase(std::unique(albums.begin(), albums.end()), albums.end());
    c.artist_uris_ = std::move(artists);
    c.album_uris_ = std::move(albums);
    c.rebuild_lookup();
  }

  c.track_meta_.resize(c.track_uris_.size());
  c.artist_names_.resize(c.artist_uris_.size());
  c.album_names_.resize(c.album_uris_.size());
  std::vector<char> track_seen(c.track_uris_.size(), 0);
  std::vector<char> artist_seen(c.artist_uris_.size(), 0);
  std::vector<char> album_seen(c.album_uris_.size(), 0);

  c.playlists_.reserve(raw.size());
  for (const auto& rp : raw) {
    PlaylistRecord pl;
    pl.pid = rp.pid;
    pl.title = rp.name;
    pl.tracks.reserve(rp.tracks.size());
    for (const auto& t : rp.tracks) {
      TrackId tid;
      ArtistId aid;
      AlbumId bid;
      if (deterministic) {
        tid = c.track_by_uri_.at(t.track_uri);
        aid = c.artist_by_uri_.at(t.artist_uri);
        bid = c.album_by_uri_.at(t.album_uri);
      } else {
        tid = intern(c.track_by_uri_, c.track_uris_, t.track_uri);
        aid = intern(c.artist_by_uri_, c.artist_uris_, t.artist_uri);
        bid = intern(c.album_by_uri_, c.album_uris_, t.album_uri);
        if (c.track_meta_.size() < c.track_uris_.size()) c.track_meta_.resize(c.track_uris_.size());
        if (c.artist_names_.size() < c.artist_uris_.size()) c.artist_names_.resize(c.artist_uris_.size());
        if (c.album_names_.size() < c.album_uris_.size()) c.album_names_.resize(c.album_uris_.size());
        if (track_seen.size() < c.track_uris_.size()) track_seen.resize(c.track_uris_.size(), 0);
        if (artist_seen.size() < c.artist_uris_.size()) artist_seen.resize(c.artist_uris_.size(), 0);
        if (album_seen.size() < c.album_uris_.size()) album_seen.resize(c.album_uris_.size(), 0);
      }
      if (!track_seen[tid]) {
        track_seen[tid] = 1;
        c.track_meta_[tid] = TrackMeta{t.track_name, aid, bid, t.duration_ms};
      }
      if (!artist_seen[aid]) {
        artist_seen[aid] = 1;
        c.artist_names_[aid] = t.artist_name;
      }
      if (!album_seen[bid]) {
        album_seen[bid] = 1;
        c.album_names_[bid] = t.album_name;
      }
      pl.tracks.push_back(tid);
    }
    c.playlists_.push_back(std::move(pl));
  }

  c.bg_stats_ = compute_background_stats(c);
  return c;
}

namespace {

BackgroundStats stats_over(const Corpus& corpus, const std::unordered_set<Pid>* filter) {
  BackgroundStats s;
  s.track_playlists.assign(corpus.num_tracks(), 0);
  s.artist_playlists.assign(corpus.num_artists(), 0);
  s.album_playlists.assign(corpus.num_albums(), 0);
  for (auto& v : s.track_title_group) v.assign(corpus.num_tracks(), 0);

  std::vector<TrackId> tracks;
  std::vector<ArtistId> artists;
  std::vector<AlbumId> albums;
  for (const auto& pl : corpus.playlists()) {
    if (filter && !filter->count(pl.pid)) continue;
    ++s.total_playlists;

    tracks.assign(pl.tracks.begin(), pl.tracks.end());
    std::sort(tracks.begin(), tracks.end());
    tracks.erase(std::unique(tracks.begin(), tracks.end()), tracks.end());

    artists.clear();
    albums.clear();
    for (TrackId t : tracks) {
      artists.push_back(corpus.track_meta(t).artist);
      albums.push_back(corpus.track_meta(t).album);
    }
    std::sort(artists.begin(), artists.end());
    artists.erase(std::unique(artists.begin(), artists.end()), artists.end());
    std::sort(albums.begin(), albums.end());
    albums.erase(std::unique(albums.begin(), albums.end()), albums.end());

    unsigned mask = title_group_mask(pl.title);
    for (TrackId t : tracks) {
      ++s.track_playlists[t];
      for (int g = 0; g < kWordGroupCount; ++g) {
        if (mask & (1u << g)) ++s.track_title_group[g][t];
      }
    }
    for (ArtistId a : artists) ++s.artist_playlists[a];
    for (AlbumId a : albums) ++s.album_playlists[a];
  }
  return s;
}

}  // namespace

BackgroundStats compute_background_stats(const Corpus& corpus) { return stats_over(corpus, nullptr); }

BackgroundStats compute_background_stats(const Corpus& corpus,
                                         const std::unordered_set<Pid>& background_pids) {
  return stats_over(corpus, &background_pids);
}

std::string Corpus::serialize() const {
  ByteWriter w;
  w.magic(kCorpusMagic);
  w.u32(kCorpusVersion);
  w.u8(deterministic_ ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(track_uris_.size()));
  w.u32(static_cast<std::uint32_t>(artist_uris_.size()));
  w.u32(static_cast<std::uint32_t>(album_uris_.size()));
  w.u64(playlists_.size());

  for (std::size_t i = 0; i < track_uris_.size(); ++i) {
    w.str(track_uris_[i]);
    w.str(track_meta_[i].title);
    w.u32(track_meta_[i].artist);
    w.u32(track_meta_[i].album);
    w.i64(track_meta_[i].duration_ms);
  }
  for (std::size_t i = 0; i < artist_uris_.size(); ++i) {
    w.str(artist_uris_[i]);
    w.str(artist_names_[i]);
  }
  for (std::size_t i = 0; i < album_uris_.size(); ++i) {
    w.str(album_uris_[i]);
    w.str(album_names_[i]);
  }
  for (const auto& pl : playlists_) {
    w.i64(pl.pid);
    w.str(pl.title);
    w.u32(static_cast<std::uint32_t>(pl.tracks.size()));
    for (TrackId t : pl.tracks) w.u32(t);
  }

  w.u64(bg_stats_.total_playlists);
  for (std::uint32_t v : bg_stats_.track_playlists) w.u32(v);
  for (std::uint32_t v : bg_stats_.artist_playlists) w.u32(v);
  for (std::uint32_t v : bg_stats_.album_playlists) w.u32(v);
  for (const auto& grp : bg_stats_.track_title_group)
    for (std::uint32_t v : grp) w.u32(v);
  return w.take();
}

Corpus Corpus::deserialize(std::string_view bytes, const std::string& origin) {
  ByteReader r(bytes, origin);
  r.magic(kCorpusMagic, kCorpusVersion);
  Corpus c;
  c.deterministic_ = r.u8() != 0;
  std::uint32_t n_tracks = r.u32();
  std::uint32_t n_artists = r.u32();
  std::uint32_t n_albums = r.u32();
  std::uint64_t n_playlists = r.u64();

  c.track_uris_.reserve(n_tracks);
  c.track_meta_.reserve(n_tracks);
  for (std::uint32_t i = 0; i < n_tracks; ++i) {
    c.track_uris_.push_back(r.str());
    TrackMeta m;
    m.title = r.str();
    m.artist = r.u32();
    m.album = r.u32();
    m.duration_ms = r.i64();
    c.track_meta_.push_back(std::move(m));
  }
  for (std::uint32_t i = 0; i < n_artists; ++i) {
    c.artist_uris_.push_back(r.str());
    c.artist_names_.push_back(r.str());
  }
  for (std::uint32_t i = 0; i < n_albums; ++i) {
    c.album_uris_.push_back(r.str());
    c.album_names_.push_back(r.str());
  }
  c.playlists_.reserve(n_playlists);
  for (std::uint64_t i = 0; i < n_playlists; ++i) {
    PlaylistRecord pl;
    pl.pid = r.i64();
    pl.title = r.str();
    std::uint32_t n = r.u32();
    pl.tracks.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k) pl.tracks.push_back(r.u32());
    c.playlists_.push_back(std::move(pl));
  }

  c.bg_stats_.total_playlists = r.u64();
  c.bg_stats_.track_playlists.resize(n_tracks);
  for (auto& v : c.bg_stats_.track_playlists) v = r.u32();
  c.bg_stats_.artist_playlists.resize(n_artists);
  for (auto& v : c.bg_stats_.artist_playlists) v = r.u32();
  c.bg_stats_.album_playlists.resize(n_albums);
  for (auto& v : c.bg_stats_.album_playlists) v = r.u32();
  for (auto& grp : c.bg_stats_.track_title_group) {
    grp.resize(n_tracks);
    for (auto& v : grp) v = r.u32();
  }
  if (!r.at_end()) fail(Errc::parse, origin + ": trailing bytes after corpus payload");
  c.rebuild_lookup();
  return c;
}

void Corpus::save(const std::string& path) const { write_file(path, serialize()); }

Corpus Corpus::load(const std::string& path) { return deserialize(read_file(path), path); }

std::string Corpus::stats_json() const {
  std::size_t total_occ = 0, min_len = 0, max_len = 0;
  for (const auto& pl : playlists_) {
    total_occ += pl.tracks.size();
    if (min_len == 0 || pl.tracks.size() < min_len) min_len = pl.tracks.size();
    max_len = std::max(max_len, pl.tracks.size());
  }
  json j;
  j["version"] = 1;
  j["playlists"] = playlists_.size();
  j["tracks"] = track_uris_.size();
  j["artists"] = artist_uris_.size();
  j["albums"] = album_uris_.size();
  j["track_occurrences"] = total_occ;
  j["min_playlist_length"] = min_len;
  j["max_playlist_length"] = max_len;
  j["deterministic"] = deterministic_;
  j["fingerprint"] = fingerprint();
  return j.dump(2) + "\n";
}

}  // namespace segue
