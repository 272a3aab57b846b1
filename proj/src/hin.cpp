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

#include "hin.hpp"

#include <algorithm>

namespace segue {

namespace {

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

const std::vector<std::uint32_t> kNoNeighbors;

// Node-type cycle per metapath, as (from kind -> to kind) steps.
struct Step {
  NodeKind from, to;
};
constexpr Step kAtpaSteps[3] = {
    {NodeKind::artist, NodeKind::track},
    {NodeKind::track, NodeKind::playlist},
    {NodeKind::playlist, NodeKind::artist},
};
constexpr Step kTptSteps[2] = {
    {NodeKind::track, NodeKind::playlist},
    {NodeKind::playlist, NodeKind::track},
};

}  // namespace

const std::vector<std::uint32_t>& HinGraph::neighbors(TypedNode from, NodeKind to) const {
  auto pick = [&](const std::vector<std::vector<std::uint32_t>>& adj) -> const std::vector<std::uint32_t>& {
    return from.id < adj.size() ? adj[from.id] : kNoNeighbors;
  };
  switch (from.kind) {
    case NodeKind::playlist:
      if (to == NodeKind::track) return pick(playlist_tracks);
      if (to == NodeKind::artist) return pick(playlist_artists);
      break;
    case NodeKind::track:
      if (to == NodeKind::playlist) return pick(track_playlists);
      if (to == NodeKind::artist) return pick(track_artists);
      if (to == NodeKind::word) break;
      break;
    case NodeKind::artist:
      if (to == NodeKind::track) return pick(artist_tracks);
      if (to == NodeKind::playlist) return pick(artist_playlists);
      break;
    default:
      break;
  }
  return kNoNeighbors;
}

bool HinGraph::has_edge(TypedNode from, TypedNode to) const {
  const auto& n = neighbors(from, to.kind);
  return std::binary_search(n.begin(), n.end(), to.id);
}

HinGraph build_hin(const Corpus& corpus, const std::unordered_set<Pid>& background_pids) {
  HinGraph g;
  g.playlist_tracks.resize(corpus.num_playlists());
  g.track_playlists.resize(corpus.num_tracks());
  g.artist_tracks.resize(corpus.num_artists());
  g.track_artists.resize(corpus.num_tracks());
  g.playlist_artists.resize(corpus.num_playlists());
  g.artist_playlists.resize(corpus.num_artists());
  g.album_tracks.resize(corpus.num_albums());
  g.track_albums.resize(corpus.num_tracks());

  for (std::uint32_t p = 0; p < corpus.num_playlists(); ++p) {
    const PlaylistRecord& pl = corpus.playlists()[p];
    if (!background_pids.count(pl.pid)) continue;
    for (TrackId t : pl.tracks) {
      g.playlist_tracks[p].push_back(t);
      g.track_playlists[t].push_back(p);
      const TrackMeta& m = corpus.track_meta(t);
      if (m.artist != kInvalidId) {
        g.playlist_artists[p].push_back(m.artist);
        g.artist_playlists[m.artist].push_back(p);
        g.artist_tracks[m.artist].push_back(t);
        g.track_artists[t].push_back(m.artist);
      }
      if (m.album != kInvalidId) {
        g.album_tracks[m.album].push_back(t);
        g.track_albums[t].push_back(m.album);
      }
    }
  }
  for (auto* adj : {&g.playlist_tracks, &g.track_playlists, &g.artist_tracks, &g.track_artists,
                    &g.playlist_artists, &g.artist_playlists, &g.album_tracks, &g.track_albums}) {
    for (auto& v : *adj) sort_unique(v);
  }
  return g;
}

std::vector<std::vector<TypedNode>> generate_walks(const HinGraph& graph, const WalkConfig& config,
                                                   int threads) {
  if (config.cycles < 1 || config.walks_per_start < 1) {
    fail(Errc::invalid_argument, "walk config requires cycles >= 1 and walks_per_start >= 1");
  }
  const Step* steps = config.metapath == Metapath::atpa ? kAtpaSteps : kTptSteps;
  const std::size_t steps_per_cycle = config.metapath == Metapath::atpa ? 3 : 2;
  const NodeKind start_kind = steps[0].from;

  std::vector<std::uint32_t> starts;
  const auto& start_adj =
      start_kind == NodeKind::artist ? graph.artist_tracks : graph.track_playlists;
  for (std::uint32_t i = 0; i < start_adj.size(); ++i) {
    if (!start_adj[i].empty()) starts.push_back(i);
  }

  std::vector<std::vector<TypedNode>> walks(starts.size() * config.walks_per_start);
  parallel_chunks(starts.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      for (std::uint32_t w = 0; w < config.walks_per_start; ++w) {
        Rng rng(config.rng_seed ^ fnv1a64(&starts[s], sizeof(starts[s]),
                                          0x9E3779B97F4A7C15ULL + w * 0x1000193ULL));
        std::vector<TypedNode> walk;
        walk.reserve(config.cycles * steps_per_cycle + 1);
        TypedNode cur{start_kind, starts[s]};
        walk.push_back(cur);
        bool alive = true;
        for (std::uint32_t cycle = 0; cycle < config.cycles && alive; ++cycle) {
          for (std::size_t k = 0; k < steps_per_cycle; ++k) {
            const auto& nbrs = graph.neighbors(cur, steps[k].to);
            if (nbrs.empty()) {
              alive = false;
              break;
            }
            cur = TypedNode{steps[k].to, nbrs[rng.below(nbrs.size())]};
            walk.push_back(cur);
          }
        }
        if (walk.size() >= 2) walks[s * config.walks_per_start + w] = std::move(walk);
      }
    }
  });

  walks.erase(std::remove_if(walks.begin(), walks.end(),
                             [](const std::vector<TypedNode>& w) { return w.empty(); }),
              walks.end());
  return walks;
}

}  // namespace segue
