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

#include "index.hpp"

#include <algorithm>
#include <map>

#include "io.hpp"
#include "tokenize.hpp"

namespace segue {

namespace {

constexpr char kIndexMagic[9] = "SEGINDX1";
constexpr std::uint32_t kIndexVersion = 1;

std::uint32_t intern_word(PseudoDocCollection& c, const std::string& w) {
  auto [it, inserted] = c.word_ids.emplace(w, static_cast<std::uint32_t>(c.word_terms.size()));
  if (inserted) c.word_terms.push_back(w);
  return it->second;
}

// Tracks appearing in at least one background playlist, ascending id, plus
// the list of background playlists (corpus order).
struct BackgroundView {
  std::vector<TrackId> tracks;
  std::vector<const PlaylistRecord*> playlists;
};

BackgroundView background_view(const Corpus& corpus, const std::unordered_set<Pid>& background_pids) {
  BackgroundView v;
  std::vector<char> seen(corpus.num_tracks(), 0);
  for (const auto& pl : corpus.playlists()) {
    if (!background_pids.count(pl.pid)) continue;
    v.playlists.push_back(&pl);
    for (TrackId t : pl.tracks) seen[t] = 1;
  }
  for (TrackId t = 0; t < seen.size(); ++t) {
    if (seen[t]) v.tracks.push_back(t);
  }
  return v;
}

}  // namespace

PseudoDocCollection build_playlist_doc_collection(const Corpus& corpus,
                                                  const std::unordered_set<Pid>& background_pids,
                                                  bool raw_tf) {
  PseudoDocCollection c;
  c.kind = CollectionKind::playlist_tracks;
  c.track_terms = true;
  c.term_space = static_cast<std::uint32_t>(corpus.num_tracks());

  std::vector<std::uint32_t> counts(corpus.num_tracks(), 0);
  for (const auto& pl : corpus.playlists()) {
    if (!background_pids.count(pl.pid)) continue;
    std::vector<TermCount> doc;
    // first-occurrence order; tf 1 per distinct track unless raw_tf
    for (TrackId t : pl.tracks) {
      if (counts[t] == 0) doc.push_back({t, 0});
      ++counts[t];
    }
    for (auto& tc : doc) {
      tc.tf = raw_tf ? counts[tc.term] : 1;
      counts[tc.term] = 0;
    }
    c.docs.push_back(std::move(doc));
    c.doc_keys.push_back(pl.pid);
  }
  return c;
}

PseudoDocCollection build_track_title_doc_collection(const Corpus& corpus,
                                                     const std::unordered_set<Pid>& background_pids) {
  PseudoDocCollection c;
  c.kind = CollectionKind::track_parent_titles;
  auto view = background_view(corpus, background_pids);

  std::vector<std::uint32_t> row_of(corpus.num_tracks(), kInvalidId);
  c.docs.resize(view.tracks.size());
  c.doc_keys.reserve(view.tracks.size());
  for (std::uint32_t i = 0; i < view.tracks.size(); ++i) {
    row_of[view.tracks[i]] = i;
    c.doc_keys.push_back(view.tracks[i]);
  }

  // tf of a word in a track doc = number of parent titles containing it
  std::vector<std::map<std::uint32_t, std::uint32_t>> accum(view.tracks.size());
  std::vector<TrackId> uniq;
  for (const PlaylistRecord* pl : view.playlists) {
    auto tokens = tokenize(pl->title);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    std::vector<std::uint32_t> term_ids;
    term_ids.reserve(tokens.size());
    for (const auto& w : tokens) term_ids.push_back(intern_word(c, w));

    uniq.assign(pl->tracks.begin(), pl->tracks.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (TrackId t : uniq) {
      auto& doc = accum[row_of[t]];
      for (std::uint32_t term : term_ids) ++doc[term];
    }
  }
  for (std::size_t i = 0; i < accum.size(); ++i) {
    c.docs[i].reserve(accum[i].size());
    for (auto [term, tf] : accum[i]) c.docs[i].push_back({term, tf});
  }
  c.term_space = static_cast<std::uint32_t>(c.word_terms.size());
  return c;
}

PseudoDocCollection build_track_meta_doc_collection(const Corpus& corpus,
                                                    const std::unordered_set<Pid>& background_pids) {
  PseudoDocCollection c;
  c.kind = CollectionKind::track_meta;
  auto view = background_view(corpus, background_pids);

  for (TrackId t : view.tracks) {
    const auto& meta = corpus.track_meta(t);
    std::vector<std::string> tokens = tokenize(meta.title);
    if (meta.artist != kInvalidId) {
      auto more = tokenize(corpus.artist_name(meta.artist));
      tokens.insert(tokens.end(), more.begin(), more.end());
    }
    if (meta.album != kInvalidId) {
      auto more = tokenize(corpus.album_name(meta.album));
      tokens.insert(tokens.end(), more.begin(), more.end());
    }
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& w : tokens) ++counts[intern_word(c, w)];
    std::vector<TermCount> doc;
    doc.reserve(counts.size());
    for (auto [term, tf] : counts) doc.push_back({term, tf});
    c.docs.push_back(std::move(doc));
    c.doc_keys.push_back(t);
  }
  c.term_space = static_cast<std::uint32_t>(c.word_terms.size());
  return c;
}

InvertedIndex build_inverted_index(const PseudoDocCollection& collection, std::uint64_t corpus_fp) {
  if (collection.docs.empty()) fail(Errc::invalid_argument, "cannot index an empty collection");

  InvertedIndex idx;
  idx.kind = collection.kind;
  idx.track_terms = collection.track_terms;
  idx.corpus_fp = corpus_fp;
  idx.num_docs = collection.docs.size();
  idx.doc_keys = collection.doc_keys;
  idx.word_terms = collection.word_terms;
  idx.word_ids = collection.word_ids;
  idx.postings.resize(collection.term_space);
  idx.cf.assign(collection.term_space, 0);
  idx.doc_len.resize(collection.docs.size());

  for (std::uint32_t d = 0; d < collection.docs.size(); ++d) {
    std::uint32_t len = 0;
    for (const TermCount& tc : collection.docs[d]) {
      idx.postings[tc.term].push_back({d, tc.tf});
      idx.cf[tc.term] += tc.tf;
      len += tc.tf;
    }
    idx.doc_len[d] = len;
    idx.total_terms += len;
  }
  idx.avgdl = static_cast<double>(idx.total_terms) / static_cast<double>(idx.num_docs);
  if (collection.kind == CollectionKind::playlist_tracks) idx.forward = collection.docs;
  return idx;
}

std::string InvertedIndex::serialize() const {
  ByteWriter w;
  w.magic(kIndexMagic);
  w.u32(kIndexVersion);
  w.u64(corpus_fp);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u8(track_terms ? 1 : 0);
  w.u64(num_docs);
  w.f64(avgdl);
  w.u64(total_terms);
  w.u32(static_cast<std::uint32_t>(postings.size()));

  for (const auto& key : doc_keys) w.i64(key);
  for (std::uint32_t len : doc_len) w.u32(len);
  if (!track_terms) {
    for (const auto& t : word_terms) w.str(t);
  }
  for (const auto& plist : postings) {
    w.u32(static_cast<std::uint32_t>(plist.size()));
    for (const Posting& p : plist) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
  w.u8(forward.empty() ? 0 : 1);
  if (!forward.empty()) {
    for (const auto& doc : forward) {
      w.u32(static_cast<std::uint32_t>(doc.size()));
      for (const TermCount& tc : doc) {
        w.u32(tc.term);
        w.u32(tc.tf);
      }
    }
  }
  return w.take();
}

InvertedIndex InvertedIndex::deserialize(std::string_view bytes, const std::string& origin) {
  ByteReader r(bytes, origin);
  r.magic(kIndexMagic, kIndexVersion);
  InvertedIndex idx;
  idx.corpus_fp = r.u64();
  idx.kind = static_cast<CollectionKind>(r.u8());
  idx.track_terms = r.u8() != 0;
  idx.num_docs = r.u64();
  idx.avgdl = r.f64();
  idx.total_terms = r.u64();
  std::uint32_t n_terms = r.u32();

  idx.doc_keys.resize(idx.num_docs);
  for (auto& key : idx.doc_keys) key = r.i64();
  idx.doc_len.resize(idx.num_docs);
  for (auto& len : idx.doc_len) len = r.u32();
  if (!idx.track_terms) {
    idx.word_terms.resize(n_terms);
    for (auto& t : idx.word_terms) t = r.str();
    for (std::uint32_t i = 0; i < n_terms; ++i) idx.word_ids[idx.word_terms[i]] = i;
  }
  idx.postings.resize(n_terms);
  idx.cf.assign(n_terms, 0);
  for (std::uint32_t t = 0; t < n_terms; ++t) {
    std::uint32_t df = r.u32();
    idx.postings[t].resize(df);
    for (auto& p : idx.postings[t]) {
      p.doc = r.u32();
      p.tf = r.u32();
      idx.cf[t] += p.tf;
    }
  }
  if (r.u8() != 0) {
    idx.forward.resize(idx.num_docs);
    for (auto& doc : idx.forward) {
      std::uint32_t n = r.u32();
      doc.resize(n);
      for (auto& tc : doc) {
        tc.term = r.u32();
        tc.tf = r.u32();
      }
    }
  }
  if (!r.at_end()) fail(Errc::parse, origin + ": trailing bytes after index payload");
  return idx;
}

void InvertedIndex::save(const std::string& path) const { write_file(path, serialize()); }

InvertedIndex InvertedIndex::load(const std::string& path) {
  return deserialize(read_file(path), path);
}

}  // namespace segue
