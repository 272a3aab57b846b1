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

#include "embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "cbow.hpp"
#include "io.hpp"
#include "tokenize.hpp"

namespace segue {

namespace {

constexpr char kEmbMagic[9] = "SEGEMBD1";
constexpr std::uint32_t kEmbVersion = 1;

std::uint64_t item_key(NodeKind kind, std::uint32_t id) {
  return (static_cast<std::uint64_t>(kind) << 32) | id;
}

struct TokenSeq {
  std::vector<TypedNode> tokens;
};

}  // namespace

const char* emb_variant_name(EmbVariant v) {
  switch (v) {
    case EmbVariant::emb1: return "emb1";
    case EmbVariant::emb2: return "emb2";
    case EmbVariant::emb3: return "emb3";
    case EmbVariant::emb4: return "emb4";
  }
  return "?";
}

void EmbeddingMatrix::rebuild_track_rows(std::size_t num_tracks) {
  track_row.assign(num_tracks, -1);
  for (std::size_t r = 0; r < items.size(); ++r) {
    if (items[r].kind == NodeKind::track && items[r].id < num_tracks) {
      track_row[items[r].id] = static_cast<std::int32_t>(r);
    }
  }
}

EmbCorpus build_emb_corpus(const Corpus& corpus, const std::unordered_set<Pid>& background_pids,
                           EmbVariant variant, const Params& params, std::uint64_t rng_seed) {
  std::vector<TokenSeq> raw;
  std::vector<std::string> word_table;
  std::unordered_map<std::string, std::uint32_t> word_ids;
  auto word_token = [&](const std::string& w) {
    auto [it, inserted] = word_ids.emplace(w, static_cast<std::uint32_t>(word_table.size()));
    if (inserted) word_table.push_back(w);
    return TypedNode{NodeKind::word, it->second};
  };

  if (variant == EmbVariant::emb1 || variant == EmbVariant::emb2) {
    for (std::uint32_t p = 0; p < corpus.num_playlists(); ++p) {
      const PlaylistRecord& pl = corpus.playlists()[p];
      if (!background_pids.count(pl.pid)) continue;
      TokenSeq seq;
      if (variant == EmbVariant::emb1) {
        for (TrackId t : pl.tracks) seq.tokens.push_back({NodeKind::track, t});
      } else {
        // Title words spread round-robin through the track sequence, one
        // word after every ceil(n/(k+1)) tracks.
        auto words = tokenize(pl.title);
        std::size_t n = pl.tracks.size(), k = words.size();
        std::size_t gap = k == 0 ? n + 1 : (n + k) / (k + 1);
        if (gap == 0) gap = 1;
        std::size_t wi = 0;
        for (std::size_t i = 0; i < n; ++i) {
          seq.tokens.push_back({NodeKind::track, pl.tracks[i]});
          if ((i + 1) % gap == 0 && wi < k) seq.tokens.push_back(word_token(words[wi++]));
        }
        while (wi < k) seq.tokens.push_back(word_token(words[wi++]));
      }
      raw.push_back(std::move(seq));
    }
  } else {
    WalkConfig wc;
    wc.metapath = variant == EmbVariant::emb3 ? Metapath::atpa : Metapath::tpt;
    wc.cycles = params.walk_cycles;
    wc.walks_per_start = params.walks_per_start;
    wc.rng_seed = rng_seed;
    HinGraph graph = build_hin(corpus, background_pids);
    for (auto& walk : generate_walks(graph, wc, params.threads)) {
      raw.push_back(TokenSeq{std::move(walk)});
    }
  }

  // Vocabulary: occurrence counts, min_count filter, rows ordered by
  // (kind, id) with word ids remapped to lexicographic order.
  std::map<std::uint64_t, std::uint64_t> occurrence;
  for (const auto& seq : raw) {
    for (const TypedNode& tok : seq.tokens) ++occurrence[item_key(tok.kind, tok.id)];
  }

  std::vector<std::uint32_t> word_order(word_table.size());
  for (std::uint32_t i = 0; i < word_order.size(); ++i) word_order[i] = i;
  std::sort(word_order.begin(), word_order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return word_table[a] < word_table[b]; });
  std::vector<std::uint32_t> word_remap(word_table.size());
  EmbCorpus out;
  out.variant = variant;
  {
    std::uint32_t next = 0;
    for (std::uint32_t old : word_order) {
      word_remap[old] = next++;
      out.words.push_back(word_table[old]);
    }
  }

  std::unordered_map<std::uint64_t, std::uint32_t> row_of;
  for (int kind = 0; kind < 4; ++kind) {
    if (static_cast<NodeKind>(kind) == NodeKind::word) continue;
    for (auto& [key, count] : occurrence) {
      if (static_cast<int>(key >> 32) != kind || count < params.emb_min_count) continue;
      row_of[key] = static_cast<std::uint32_t>(out.items.size());
      out.items.push_back({static_cast<NodeKind>(kind), static_cast<std::uint32_t>(key)});
      out.counts.push_back(count);
    }
  }
  for (std::uint32_t new_id = 0; new_id < out.words.size(); ++new_id) {
    std::uint32_t old_id = word_order[new_id];
    auto it = occurrence.find(item_key(NodeKind::word, old_id));
    if (it == occurrence.end() || it->second < params.emb_min_count) continue;
    row_of[item_key(NodeKind::word, old_id)] = static_cast<std::uint32_t>(out.items.size());
    out.items.push_back({NodeKind::word, word_remap[old_id]});
    out.counts.push_back(it->second);
  }

  out.sequences.reserve(raw.size());
  for (const auto& seq : raw) {
    std::vector<std::uint32_t> rows;
    rows.reserve(seq.tokens.size());
    for (const TypedNode& tok : seq.tokens) {
      auto it = row_of.find(item_key(tok.kind, tok.id));
      if (it != row_of.end()) rows.push_back(it->second);
    }
    if (!rows.empty()) out.sequences.push_back(std::move(rows));
  }
  return out;
}

namespace {

struct NoiseTable {
  std::vector<double> cumulative;
  explicit NoiseTable(const std::vector<std::uint64_t>& counts) {
    cumulative.reserve(counts.size());
    double acc = 0.0;
    for (std::uint64_t c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative.push_back(acc);
    }
  }
  std::uint32_t draw(Rng& rng) const {
    double x = rng.real() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    if (it == cumulative.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative.begin());
  }
};

void collect_context(const std::vector<std::uint32_t>& seq, std::size_t i, std::uint32_t window,
                     std::vector<std::uint32_t>& ctx) {
  ctx.clear();
  std::size_t lo = i > window ? i - window : 0;
  std::size_t hi = std::min(seq.size(), i + window + 1);
  for (std::size_t j = lo; j < hi; ++j) {
    if (j != i) ctx.push_back(seq[j]);
  }
}

}  // namespace

EmbeddingMatrix train_cbow(const EmbCorpus& corpus, const CbowConfig& config) {
  const std::size_t rows = corpus.items.size();
  if (rows < 2) fail(Errc::invalid_argument, "embedding vocabulary must have at least 2 items");
  if (config.window < 1 || config.negatives < 1 || config.dim < 1) {
    fail(Errc::invalid_argument, "cbow config requires window, negatives and dim >= 1");
  }

  EmbeddingMatrix emb;
  emb.variant = corpus.variant;
  emb.dim = config.dim;
  emb.items = corpus.items;
  emb.words = corpus.words;
  emb.input.resize(rows * config.dim);
  emb.output.assign(rows * config.dim, 0.0f);

  Rng init_rng(config.seed);
  const float scale = 0.5f / static_cast<float>(config.dim);
  for (auto& v : emb.input) {
    v = (static_cast<float>(init_rng.real()) * 2.0f - 1.0f) * scale;
  }

  NoiseTable noise(corpus.counts);
  std::uint64_t total_positions = 0;
  for (const auto& seq : corpus.sequences) total_positions += seq.size();
  total_positions *= config.epochs;
  if (total_positions == 0) fail(Errc::invalid_argument, "embedding corpus has no tokens");

  const int threads = std::max(1, config.threads);
  auto train_range = [&](std::size_t begin, std::size_t end, std::uint64_t seed,
                         std::uint64_t share_total) {
    Rng rng(seed);
    std::vector<float> h, gh;
    std::vector<std::uint32_t> ctx, negs;
    std::uint64_t processed = 0;
    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
      for (std::size_t s = begin; s < end; ++s) {
        const auto& seq = corpus.sequences[s];
        for (std::size_t i = 0; i < seq.size(); ++i) {
          double frac = static_cast<double>(processed++) / static_cast<double>(share_total);
          float lr = static_cast<float>(config.lr * std::max(1.0 - frac, 1e-4));
          collect_context(seq, i, config.window, ctx);
          if (ctx.empty()) continue;
          std::uint32_t center = seq[i];
          negs.clear();
          for (std::uint32_t n = 0; n < config.negatives; ++n) {
            std::uint32_t cand = noise.draw(rng);
            if (cand != center) negs.push_back(cand);
          }
          float loss = cbow_pair_train(emb.input.data(), emb.output.data(), config.dim, ctx,
                                       center, negs, lr, h, gh);
          if (!std::isfinite(loss)) {
            fail(Errc::internal, "non-finite training loss at sequence " + std::to_string(s) +
                                     " position " + std::to_string(i) + " epoch " +
                                     std::to_string(epoch));
          }
        }
      }
    }
  };

  if (threads <= 1) {
    train_range(0, corpus.sequences.size(), config.seed ^ 0xA5A5A5A5ULL, total_positions);
  } else {
    // lock-free shared updates; row collisions are rare and tolerated
    std::size_t n = corpus.sequences.size();
    std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t) {
      std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
      if (begin >= end) break;
      std::uint64_t share = 0;
      for (std::size_t s = begin; s < end; ++s) share += corpus.sequences[s].size();
      share *= config.epochs;
      if (share == 0) continue;
      pool.emplace_back([&, begin, end, share, t] {
        try {
          train_range(begin, end, config.seed ^ (0xC0FFEEULL + t), share);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  std::uint32_t max_track = 0;
  for (const auto& item : emb.items) {
    if (item.kind == NodeKind::track) max_track = std::max(max_track, item.id + 1);
  }
  emb.rebuild_track_rows(max_track);
  return emb;
}

double corpus_loss(const EmbCorpus& corpus, const EmbeddingMatrix& emb, std::uint32_t window,
                   std::uint32_t negatives, std::uint64_t seed) {
  Rng rng(seed);
  NoiseTable noise(corpus.counts);
  std::vector<double> input(emb.input.begin(), emb.input.end());
  std::vector<double> output(emb.output.begin(), emb.output.end());
  std::vector<double> h;
  std::vector<std::uint32_t> ctx, negs;
  double total = 0.0;
  std::uint64_t n = 0;
  for (const auto& seq : corpus.sequences) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      collect_context(seq, i, window, ctx);
      if (ctx.empty()) continue;
      negs.clear();
      for (std::uint32_t k = 0; k < negatives; ++k) {
        std::uint32_t cand = noise.draw(rng);
        if (cand != seq[i]) negs.push_back(cand);
      }
      total += cbow_pair_loss(input.data(), output.data(), emb.dim, ctx, seq[i], negs, h);
      ++n;
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

std::vector<float> playlist_vector(const std::vector<TrackId>& seed_tracks,
                                   const EmbeddingMatrix& emb) {
  std::vector<float> acc(emb.dim, 0.0f);
  std::size_t used = 0;
  for (TrackId t : seed_tracks) {
    if (t >= emb.track_row.size() || emb.track_row[t] < 0) continue;
    const float* v = emb.row(static_cast<std::size_t>(emb.track_row[t]));
    for (std::uint32_t d = 0; d < emb.dim; ++d) acc[d] += v[d];
    ++used;
  }
  if (used == 0) fail(Errc::no_signal, "no seed track is in the embedding vocabulary");
  for (auto& v : acc) v /= static_cast<float>(used);
  return acc;
}

CandidateList nn_candidates(const std::vector<float>& vec, const EmbeddingMatrix& emb,
                            const std::vector<TrackId>& seed_tracks, Source source,
                            std::uint32_t limit) {
  CandidateList list;
  list.source = source;
  list.limit = limit;
  double qnorm = 0.0;
  for (float v : vec) qnorm += static_cast<double>(v) * v;
  qnorm = std::sqrt(qnorm);
  if (qnorm == 0.0 || !std::isfinite(qnorm)) {
    fail(Errc::no_signal, "query vector is zero or non-finite");
  }

  std::unordered_set<TrackId> seeds(seed_tracks.begin(), seed_tracks.end());
  std::vector<Candidate> scored;
  for (std::size_t r = 0; r < emb.rows(); ++r) {
    if (emb.items[r].kind != NodeKind::track) continue;
    TrackId t = emb.items[r].id;
    if (seeds.count(t)) continue;
    const float* row = emb.row(r);
    double dot = 0.0, norm = 0.0;
    for (std::uint32_t d = 0; d < emb.dim; ++d) {
      dot += static_cast<double>(row[d]) * vec[d];
      norm += static_cast<double>(row[d]) * row[d];
    }
    if (norm == 0.0) continue;
    scored.push_back({t, dot / (std::sqrt(norm) * qnorm)});
  }
  auto cmp = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.track < b.track;
  };
  if (scored.size() > limit) {
    std::partial_sort(scored.begin(), scored.begin() + limit, scored.end(), cmp);
    scored.resize(limit);
  } else {
    std::sort(scored.begin(), scored.end(), cmp);
  }
  list.entries = std::move(scored);
  return list;
}

std::string EmbeddingMatrix::serialize() const {
  ByteWriter w;
  w.magic(kEmbMagic);
  w.u32(kEmbVersion);
  w.u64(corpus_fp);
  w.u8(static_cast<std::uint8_t>(variant));
  w.u32(dim);
  w.u64(items.size());
  w.u32(static_cast<std::uint32_t>(words.size()));
  for (const auto& word : words) w.str(word);
  for (const auto& item : items) {
    w.u8(static_cast<std::uint8_t>(item.kind));
    w.u32(item.id);
  }
  for (float v : input) w.f32(v);
  return w.take();
}

EmbeddingMatrix EmbeddingMatrix::deserialize(std::string_view bytes, const std::string& origin) {
  ByteReader r(bytes, origin);
  r.magic(kEmbMagic, kEmbVersion);
  EmbeddingMatrix emb;
  emb.corpus_fp = r.u64();
  emb.variant = static_cast<EmbVariant>(r.u8());
  emb.dim = r.u32();
  std::uint64_t rows = r.u64();
  std::uint32_t n_words = r.u32();
  emb.words.reserve(n_words);
  for (std::uint32_t i = 0; i < n_words; ++i) emb.words.push_back(r.str());
  emb.items.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    VocabItem item;
    item.kind = static_cast<NodeKind>(r.u8());
    item.id = r.u32();
    emb.items.push_back(item);
  }
  emb.input.resize(rows * emb.dim);
  for (auto& v : emb.input) v = r.f32();
  if (!r.at_end()) fail(Errc::parse, origin + ": trailing bytes after embedding payload");
  std::uint32_t max_track = 0;
  for (const auto& item : emb.items) {
    if (item.kind == NodeKind::track) max_track = std::max(max_track, item.id + 1);
  }
  emb.rebuild_track_rows(max_track);
  return emb;
}

void EmbeddingMatrix::save(const std::string& path) const { write_file(path, serialize()); }

EmbeddingMatrix EmbeddingMatrix::load(const std::string& path) {
  return deserialize(read_file(path), path);
}

}  // namespace segue
