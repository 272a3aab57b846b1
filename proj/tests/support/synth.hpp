// SPDX-License-Identifier: Apache-2.0
//
// Synthetic corpus builders shared by the unit and acceptance suites. All
// corpora are materialized as real slice JSON and loaded through the normal
// ingestion path.

#pragma once

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "corpus.hpp"
#include "io.hpp"

namespace synth {

struct Track {
  std::string uri, name, artist_uri, artist_name, album_uri, album_name;
  std::int64_t duration = 200000;
};

struct Playlist {
  std::int64_t pid = 0;
  std::string name;
  std::vector<Track> tracks;
};

inline Track simple_track(int t, int artist = -1, int album = -1, std::string name = "") {
  if (artist < 0) artist = t;
  if (album < 0) album = t;
  Track tr;
  tr.uri = "spotify:track:t" + std::to_string(t);
  tr.name = name.empty() ? "Track " + std::to_string(t) : std::move(name);
  tr.artist_uri = "spotify:artist:a" + std::to_string(artist);
  tr.artist_name = "Artist " + std::to_string(artist);
  tr.album_uri = "spotify:album:b" + std::to_string(album);
  tr.album_name = "Album " + std::to_string(album);
  return tr;
}

inline std::string slice_json(const std::vector<Playlist>& playlists) {
  nlohmann::json root;
  auto& arr = root["playlists"] = nlohmann::json::array();
  for (const auto& pl : playlists) {
    nlohmann::json p;
    p["pid"] = pl.pid;
    p["name"] = pl.name;
    auto& tracks = p["tracks"] = nlohmann::json::array();
    for (std::size_t i = 0; i < pl.tracks.size(); ++i) {
      const auto& t = pl.tracks[i];
      tracks.push_back({{"pos", i},
                        {"track_uri", t.uri},
                        {"track_name", t.name},
                        {"artist_uri", t.artist_uri},
                        {"artist_name", t.artist_name},
                        {"album_uri", t.album_uri},
                        {"album_name", t.album_name},
                        {"duration_ms", t.duration}});
    }
    arr.push_back(std::move(p));
  }
  return root.dump();
}

inline std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("segue_test_" + tag + "_" +
                                                       std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string write_slice(const std::vector<Playlist>& playlists, const std::string& path) {
  segue::write_file(path, slice_json(playlists));
  return path;
}

inline segue::Corpus corpus_from(const std::vector<Playlist>& playlists, bool deterministic = true) {
  std::string dir = temp_dir("slice");
  std::string path = dir + "/slice.json";
  write_slice(playlists, path);
  return segue::load_mpd_slices({path}, deterministic);
}

// Planted-genre corpus: tracks cluster into genres, playlists sample almost
// exclusively inside one genre, and titles reuse genre-specific words. This
// gives QE/EMB real co-occurrence signal and META real title signal.
struct GenreConfig {
  int genres = 20;
  int tracks_per_genre = 150;
  int artists_per_genre = 30;
  int albums_per_genre = 40;
  int playlists = 2000;
  int min_len = 15;
  int max_len = 40;
  double noise = 0.04;  // probability of a cross-genre track
  std::uint64_t seed = 7;
};

inline const std::vector<std::string>& genre_words() {
  static const std::vector<std::string> words = {
      "running", "workout", "study",  "chill", "party", "road",  "sleep",
      "focus",   "summer",  "winter", "jazz",  "rock",  "metal", "country",
      "disco",   "indie",   "rap",    "blues", "folk",  "dance"};
  return words;
}

inline std::vector<Playlist> planted_genre_playlists(const GenreConfig& cfg) {
  segue::Rng rng(cfg.seed);
  static const char* suffixes[] = {"jams", "mix", "songs", "tunes", "vibes", "beats"};

  auto genre_track = [&](int g, int i) {
    Track tr;
    tr.uri = "spotify:track:g" + std::to_string(g) + "-t" + std::to_string(i);
    tr.name = genre_words()[g % genre_words().size()] + " song " + std::to_string(i);
    int artist = i % cfg.artists_per_genre;
    tr.artist_uri = "spotify:artist:g" + std::to_string(g) + "-a" + std::to_string(artist);
    tr.artist_name = "The " + genre_words()[g % genre_words().size()] + " band " + std::to_string(artist);
    int album = i % cfg.albums_per_genre;
    tr.album_uri = "spotify:album:g" + std::to_string(g) + "-b" + std::to_string(album);
    tr.album_name = genre_words()[g % genre_words().size()] + " album " + std::to_string(album);
    tr.duration = 150000 + static_cast<std::int64_t>(rng.below(120000));
    return tr;
  };

  std::vector<Playlist> out;
  out.reserve(cfg.playlists);
  for (int p = 0; p < cfg.playlists; ++p) {
    int g = static_cast<int>(rng.below(cfg.genres));
    Playlist pl;
    pl.pid = 100000 + p;
    pl.name = genre_words()[g % genre_words().size()] + " " +
              suffixes[rng.below(std::size(suffixes))];
    int len = cfg.min_len + static_cast<int>(rng.below(cfg.max_len - cfg.min_len + 1));
    std::vector<int> pool(cfg.tracks_per_genre);
    for (int i = 0; i < cfg.tracks_per_genre; ++i) pool[i] = i;
    rng.shuffle(pool);
    for (int i = 0; i < len; ++i) {
      if (rng.real() < cfg.noise) {
        int og = static_cast<int>(rng.below(cfg.genres));
        pl.tracks.push_back(genre_track(og, static_cast<int>(rng.below(cfg.tracks_per_genre))));
      } else {
        pl.tracks.push_back(genre_track(g, pool[i % pool.size()]));
      }
    }
    out.push_back(std::move(pl));
  }
  return out;
}

}  // namespace synth
