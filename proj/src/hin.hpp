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
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "corpus.hpp"

namespace segue {

enum class NodeKind : std::uint8_t { track = 0, playlist = 1, artist = 2, word = 3 };

struct TypedNode {
  NodeKind kind;
  std::uint32_t id;  // track/artist id, or corpus playlist index
  bool operator==(const TypedNode&) const = default;
};

// Typed adjacency over the background subgraph. Playlist nodes are corpus
// playlist indexes. Every relation is stored symmetrically with sorted,
// deduplicated neighbor lists; playlist<->artist is the composite
// "artist has a track in the playlist" relation, which the ATPA cycle needs
// as a direct step.
struct HinGraph {
  std::vector<std::vector<std::uint32_t>> playlist_tracks;
  std::vector<std::vector<std::uint32_t>> track_playlists;
  std::vector<std::vector<std::uint32_t>> artist_tracks;
  std::vector<std::vector<std::uint32_t>> track_artists;
  std::vector<std::vector<std::uint32_t>> playlist_artists;
  std::vector<std::vector<std::uint32_t>> artist_playlists;
  std::vector<std::vector<std::uint32_t>> album_tracks;
  std::vector<std::vector<std::uint32_t>> track_albums;

  const std::vector<std::uint32_t>& neighbors(TypedNode from, NodeKind to) const;
  bool has_edge(TypedNode from, TypedNode to) const;
};

HinGraph build_hin(const Corpus& corpus, const std::unordered_set<Pid>& background_pids);

enum class Metapath : std::uint8_t { atpa = 0, tpt = 1 };

struct WalkConfig {
  Metapath metapath = Metapath::tpt;
  std::uint32_t cycles = 20;          // metapath cycles per walk
  std::uint32_t walks_per_start = 10;
  std::uint64_t rng_seed = 42;
};

/// Metapath-constrained random walks with uniform neighbor sampling. A walk
/// starting at a node with no type-consistent neighbor is truncated and kept
/// only if it still has at least two nodes.
std::vector<std::vector<TypedNode>> generate_walks(const HinGraph& graph, const WalkConfig& config,
                                                   int threads = 1);

}  // namespace segue
