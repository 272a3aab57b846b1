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

#include "splits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "io.hpp"

namespace segue {

using nlohmann::json;

namespace {

constexpr std::array<CategorySpec, kCategoryCount> kSpecs = {{
    {0, true, false},    // title_only
    {1, true, false},    // title_first_1
    {5, true, false},    // title_first_5
    {5, false, false},   // first_5
    {10, true, false},   // title_first_10
    {10, false, false},  // first_10
    {25, true, false},   // title_first_25
    {25, true, true},    // title_rand_25
    {100, true, false},  // title_first_100
    {100, true, true},   // title_rand_100
}};

constexpr std::array<const char*, kCategoryCount> kNames = {
    "title_only",     "title_first_1", "title_first_5",  "first_5",       "title_first_10",
    "first_10",       "title_first_25", "title_rand_25", "title_first_100", "title_rand_100",
};

std::size_t unique_track_count(const PlaylistRecord& pl) {
  std::vector<TrackId> u(pl.tracks.begin(), pl.tracks.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u.size();
}

}  // namespace

const CategorySpec& category_spec(Category c) {
  auto i = static_cast<std::size_t>(c);
  if (i >= kCategoryCount) fail(Errc::invalid_argument, "unknown challenge category");
  return kSpecs[i];
}

const char* category_name(Category c) {
  auto i = static_cast<std::size_t>(c);
  return i < kCategoryCount ? kNames[i] : "unknown";
}

bool category_feasible(const PlaylistRecord& playlist, Category category) {
  // A category is feasible iff some tracks are necessarily left to hold out.
  return unique_track_count(playlist) > category_spec(category).seed_count;
}

SplitPlaylist make_challenge_category(const PlaylistRecord& playlist, Category category,
                                      std::uint64_t rng_seed) {
  const CategorySpec& spec = category_spec(category);
  if (!category_feasible(playlist, category)) {
    fail(Errc::infeasible, "playlist " + std::to_string(playlist.pid) + " has too few unique tracks for category " +
                               category_name(category));
  }

  SplitPlaylist out;
  out.pid = playlist.pid;
  out.category = category;
  out.has_title = spec.has_title;
  if (spec.has_title) out.title = playlist.title;

  std::vector<std::size_t> positions;
  if (spec.random) {
    std::vector<std::size_t> all(playlist.tracks.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Rng rng(rng_seed);
    for (std::uint32_t k = 0; k < spec.seed_count; ++k) {
      std::size_t j = k + rng.below(all.size() - k);
      std::swap(all[k], all[j]);
    }
    positions.assign(all.begin(), all.begin() + spec.seed_count);
    std::sort(positions.begin(), positions.end());
  } else {
    for (std::uint32_t i = 0; i < spec.seed_count; ++i) positions.push_back(i);
  }

  out.seed_tracks.reserve(positions.size());
  for (std::size_t p : positions) {
    out.seed_tracks.push_back(playlist.tracks[p]);
    out.seed_positions.push_back(static_cast<std::int64_t>(p));
  }

  std::vector<TrackId> uniq(playlist.tracks.begin(), playlist.tracks.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<TrackId> seed_ids(out.seed_tracks.begin(), out.seed_tracks.end());
  std::sort(seed_ids.begin(), seed_ids.end());
  seed_ids.erase(std::unique(seed_ids.begin(), seed_ids.end()), seed_ids.end());
  std::set_difference(uniq.begin(), uniq.end(), seed_ids.begin(), seed_ids.end(),
                      std::back_inserter(out.held_tracks));
  out.n_held = static_cast<std::uint32_t>(out.held_tracks.size());
  return out;
}

CorpusSplit make_ltr_splits(const Corpus& corpus, const Params& params, std::uint64_t rng_seed) {
  if (corpus.num_playlists() == 0) fail(Errc::invalid_argument, "empty corpus");
  if (params.background_fraction < 0.0 || params.background_fraction > 1.0) {
    fail(Errc::config, "background_fraction must be within [0, 1]");
  }

  std::vector<std::size_t> order(corpus.num_playlists());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(rng_seed);
  rng.shuffle(order);

  auto n_background = static_cast<std::size_t>(
      std::llround(params.background_fraction * static_cast<double>(order.size())));
  std::size_t remainder = order.size() - n_background;
  if (params.train_playlists + params.eval_playlists > remainder) {
    fail(Errc::config, "train+eval sizes (" + std::to_string(params.train_playlists + params.eval_playlists) +
                           ") exceed the non-background remainder (" + std::to_string(remainder) + ")");
  }

  CorpusSplit split;
  split.background.reserve(n_background);
  for (std::size_t i = 0; i < n_background; ++i) {
    split.background.push_back(corpus.playlists()[order[i]].pid);
  }
  std::sort(split.background.begin(), split.background.end());

  double total_weight = 0.0;
  for (double w : params.category_weights) {
    if (w < 0.0) fail(Errc::config, "category weights must be non-negative");
    total_weight += w;
  }
  if (total_weight <= 0.0) fail(Errc::config, "category weights sum to zero");

  std::size_t next = n_background;
  auto draw = [&](std::vector<SplitPlaylist>& dest, std::uint64_t want) {
    while (dest.size() < want) {
      if (next >= order.size()) {
        fail(Errc::config, "not enough feasible playlists for the requested split sizes");
      }
      const PlaylistRecord& pl = corpus.playlists()[order[next++]];
      double feasible_weight = 0.0;
      std::array<double, kCategoryCount> cumulative{};
      for (int c = 0; c < kCategoryCount; ++c) {
        double w = params.category_weights[c];
        if (w > 0.0 && category_feasible(pl, static_cast<Category>(c))) feasible_weight += w;
        cumulative[c] = feasible_weight;
      }
      if (feasible_weight <= 0.0) continue;  // no usable category for this playlist
      double pick = rng.real() * feasible_weight;
      int chosen = 0;
      while (chosen < kCategoryCount - 1 && pick >= cumulative[chosen]) ++chosen;
      dest.push_back(make_challenge_category(pl, static_cast<Category>(chosen), rng.fork()));
    }
  };
  draw(split.ltr_train, params.train_playlists);
  draw(split.ltr_eval, params.eval_playlists);
  return split;
}

void write_challenge_json(const std::string& path, const std::vector<SplitPlaylist>& entries,
                          const Corpus& corpus) {
  json playlists = json::array();
  for (const auto& e : entries) {
    json p;
    p["pid"] = e.pid;
    if (e.has_title) p["name"] = e.title;
    p["num_holdouts"] = e.n_held;
    json tracks = json::array();
    for (std::size_t i = 0; i < e.seed_tracks.size(); ++i) {
      TrackId t = e.seed_tracks[i];
      const TrackMeta& m = corpus.track_meta(t);
      json tr;
      tr["pos"] = i < e.seed_positions.size() ? e.seed_positions[i] : static_cast<std::int64_t>(i);
      tr["track_uri"] = corpus.track_uri(t);
      tr["track_name"] = m.title;
      tr["artist_uri"] = corpus.artist_uri(m.artist);
      tr["artist_name"] = corpus.artist_name(m.artist);
      tr["album_uri"] = corpus.album_uri(m.album);
      tr["album_name"] = corpus.album_name(m.album);
      tr["duration_ms"] = m.duration_ms;
      tracks.push_back(std::move(tr));
    }
    p["tracks"] = std::move(tracks);
    playlists.push_back(std::move(p));
  }
  json root;
  root["version"] = 1;
  root["playlists"] = std::move(playlists);
  write_file(path, root.dump(2) + "\n");
}

void write_truth_json(const std::string& path, const std::vector<SplitPlaylist>& entries,
                      const Corpus& corpus) {
  json playlists = json::array();
  for (const auto& e : entries) {
    json p;
    p["pid"] = e.pid;
    json tracks = json::array();
    for (TrackId t : e.held_tracks) tracks.push_back(corpus.track_uri(t));
    p["tracks"] = std::move(tracks);
    playlists.push_back(std::move(p));
  }
  json root;
  root["version"] = 1;
  root["playlists"] = std::move(playlists);
  write_file(path, root.dump(2) + "\n");
}

std::vector<SplitPlaylist> read_challenge_json(const std::string& path, const Corpus& corpus) {
  std::string content = read_file(path);
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.contains("playlists") || !root["playlists"].is_array()) {
    fail(Errc::schema, path + ": missing 'playlists' array");
  }
  std::vector<SplitPlaylist> out;
  for (const auto& p : root["playlists"]) {
    SplitPlaylist e;
    if (!p.contains("pid")) fail(Errc::schema, path + ": challenge playlist without 'pid'");
    e.pid = p["pid"].get<Pid>();
    e.has_title = p.contains("name");
    if (e.has_title) e.title = p["name"].get<std::string>();
    e.n_held = p.value("num_holdouts", 0u);
    if (p.contains("tracks")) {
      for (const auto& tr : p["tracks"]) {
        std::string uri = tr.value("track_uri", "");
        auto id = corpus.find_track(uri);
        if (!id) {
          std::fprintf(stderr, "warning: pid %lld seed '%s' not in corpus, skipped\n",
                       static_cast<long long>(e.pid), uri.c_str());
          continue;
        }
        e.seed_tracks.push_back(*id);
        e.seed_positions.push_back(tr.value("pos", static_cast<std::int64_t>(e.seed_tracks.size() - 1)));
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::unordered_map<Pid, std::vector<std::string>> read_truth_json(const std::string& path) {
  std::string content = read_file(path);
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.contains("playlists") || !root["playlists"].is_array()) {
    fail(Errc::schema, path + ": missing 'playlists' array");
  }
  std::unordered_map<Pid, std::vector<std::string>> out;
  for (const auto& p : root["playlists"]) {
    if (!p.contains("pid") || !p.contains("tracks")) {
      fail(Errc::schema, path + ": truth entry requires 'pid' and 'tracks'");
    }
    auto& held = out[p["pid"].get<Pid>()];
    for (const auto& uri : p["tracks"]) held.push_back(uri.get<std::string>());
  }
  return out;
}

void write_background_json(const std::string& path, const std::vector<Pid>& pids) {
  json root;
  root["version"] = 1;
  root["pids"] = pids;
  write_file(path, root.dump() + "\n");
}

std::vector<Pid> read_background_json(const std::string& path) {
  std::string content = read_file(path);
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.contains("pids") || !root["pids"].is_array()) {
    fail(Errc::schema, path + ": missing 'pids' array");
  }
  std::vector<Pid> out;
  for (const auto& pid : root["pids"]) out.push_back(pid.get<Pid>());
  return out;
}

}  // namespace segue
