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
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "corpus.hpp"
#include "params.hpp"

namespace segue {

// The ten challenge input categories.
enum class Category : std::uint8_t {
  title_only = 0,
  title_first_1,
  title_first_5,
  first_5,
  title_first_10,
  first_10,
  title_first_25,
  title_rand_25,
  title_first_100,
  title_rand_100,
  unknown = 255,  // entries read back from a challenge file
};
inline constexpr int kCategoryCount = 10;

struct CategorySpec {
  std::uint32_t seed_count;
  bool has_title;
  bool random;
};
const CategorySpec& category_spec(Category c);
const char* category_name(Category c);

struct SplitPlaylist {
  Pid pid = 0;
  bool has_title = false;
  std::string title;
  std::vector<TrackId> seed_tracks;        // position order
  std::vector<std::int64_t> seed_positions;
  std::vector<TrackId> held_tracks;        // sorted unique ids
  std::uint32_t n_held = 0;                // known to the predictor
  Category category = Category::unknown;
};

struct CorpusSplit {
  std::vector<Pid> background;
  std::vector<SplitPlaylist> ltr_train;
  std::vector<SplitPlaylist> ltr_eval;
};

bool category_feasible(const PlaylistRecord& playlist, Category category);

/// Hides part of a playlist per the category definition. Prefix categories
/// take the first k positions; random categories sample k positions without
/// replacement. Throws Errc::infeasible when the playlist is too small.
SplitPlaylist make_challenge_category(const PlaylistRecord& playlist, Category category,
                                      std::uint64_t rng_seed);

/// Partitions the corpus into background / LTR-train / LTR-eval and converts
/// the train and eval playlists into challenge-style splits with categories
/// sampled from params.category_weights (restricted to feasible ones).
CorpusSplit make_ltr_splits(const Corpus& corpus, const Params& params, std::uint64_t rng_seed);

// Challenge-set file (MPD-shaped, tracks truncated to seeds, plus
// num_holdouts) and the ground-truth sidecar (pid -> held URIs).
void write_challenge_json(const std::string& path, const std::vector<SplitPlaylist>& entries,
                          const Corpus& corpus);
void write_truth_json(const std::string& path, const std::vector<SplitPlaylist>& entries,
                      const Corpus& corpus);
std::vector<SplitPlaylist> read_challenge_json(const std::string& path, const Corpus& corpus);
std::unordered_map<Pid, std::vector<std::string>> read_truth_json(const std::string& path);

void write_background_json(const std::string& path, const std::vector<Pid>& pids);
std::vector<Pid> read_background_json(const std::string& path);

}  // namespace segue
