// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <set>

#include "index.hpp"
#include "support/synth.hpp"

using namespace segue;

namespace {

std::unordered_set<Pid> all_pids(const Corpus& c) {
  std::unordered_set<Pid> out;
  for (const auto& pl : c.playlists()) out.insert(pl.pid);
  return out;
}

}  // namespace

TEST_CASE("playlist docs deduplicate track terms") {
  synth::Playlist pl;
  pl.pid = 1;
  pl.name = "loop";
  pl.tracks = {synth::simple_track(1), synth::simple_track(2), synth::simple_track(1)};
  Corpus corpus = synth::corpus_from({pl});
  auto coll = build_playlist_doc_collection(corpus, all_pids(corpus));
  REQUIRE(coll.docs.size() == 1);
  CHECK(coll.docs[0].size() == 2);
  std::uint32_t len = 0;
  for (auto tc : coll.docs[0]) {
    CHECK(tc.tf == 1);
    len += tc.tf;
  }
  CHECK(len == 2);

  auto raw = build_playlist_doc_collection(corpus, all_pids(corpus), /*raw_tf=*/true);
  std::map<std::uint32_t, std::uint32_t> tf;
  for (auto tc : raw.docs[0]) tf[tc.term] = tc.tf;
  CHECK(tf[*corpus.find_track("spotify:track:t1")] == 2);
}

TEST_CASE("index statistics over three background playlists") {
  std::vector<synth::Playlist> pls;
  for (int p = 0; p < 3; ++p) {
    synth::Playlist pl;
    pl.pid = p;
    pl.name = "p" + std::to_string(p);
    for (int t = 0; t < 5; ++t) pl.tracks.push_back(synth::simple_track(p == 2 && t == 0 ? 10 : p * 5 + t));
    pls.push_back(pl);
  }
  // track 10 appears in playlists 1 (5..9 contains 10? no) — make it explicit:
  pls[1].tracks.push_back(synth::simple_track(10));
  Corpus corpus = synth::corpus_from(pls);
  auto idx = build_inverted_index(build_playlist_doc_collection(corpus, all_pids(corpus)));
  CHECK(idx.num_docs == 3);
  CHECK(idx.df(*corpus.find_track("spotify:track:t10")) == 2);
}

TEST_CASE("parent-title docs count a word once per title") {
  synth::Playlist a;
  a.pid = 1;
  a.name = "Running Jams";
  a.tracks = {synth::simple_track(0), synth::simple_track(1)};
  synth::Playlist b;
  b.pid = 2;
  b.name = "Running Mix";
  b.tracks = {synth::simple_track(0), synth::simple_track(2)};
  Corpus corpus = synth::corpus_from({a, b});
  auto coll = build_track_title_doc_collection(corpus, all_pids(corpus));

  TrackId t0 = *corpus.find_track("spotify:track:t0");
  std::size_t doc_of_t0 = 0;
  for (std::size_t d = 0; d < coll.doc_keys.size(); ++d) {
    if (coll.doc_keys[d] == static_cast<std::int64_t>(t0)) doc_of_t0 = d;
  }
  std::map<std::string, std::uint32_t> tf;
  for (auto tc : coll.docs[doc_of_t0]) tf[coll.word_terms[tc.term]] = tc.tf;
  CHECK(tf["running"] == 2);
  CHECK(tf["jams"] == 1);
  CHECK(tf["mix"] == 1);
}

TEST_CASE("tracks with token-free parent titles keep an empty doc") {
  synth::Playlist a;
  a.pid = 1;
  a.name = "!!!";
  a.tracks = {synth::simple_track(0), synth::simple_track(1)};
  Corpus corpus = synth::corpus_from({a});
  auto coll = build_track_title_doc_collection(corpus, all_pids(corpus));
  CHECK(coll.docs.size() == 2);
  CHECK(coll.docs[0].empty());
  auto idx = build_inverted_index(coll);
  CHECK(idx.doc_len[0] == 0);
  CHECK(idx.num_docs == 2);
}

TEST_CASE("word df counts track documents") {
  // one word in the parent titles of exactly 7 tracks
  std::vector<synth::Playlist> pls;
  synth::Playlist big;
  big.pid = 1;
  big.name = "focus beats";
  for (int t = 0; t < 7; ++t) big.tracks.push_back(synth::simple_track(t));
  pls.push_back(big);
  synth::Playlist other;
  other.pid = 2;
  other.name = "sleepy";
  for (int t = 7; t < 10; ++t) other.tracks.push_back(synth::simple_track(t));
  pls.push_back(other);
  Corpus corpus = synth::corpus_from(pls);
  auto idx = build_inverted_index(build_track_title_doc_collection(corpus, all_pids(corpus)));
  CHECK(idx.df(idx.word_id("focus")) == 7);
  CHECK(idx.df(idx.word_id("sleepy")) == 3);
}

TEST_CASE("track meta docs concatenate title, artist and album tokens") {
  synth::Track hello;
  hello.uri = "spotify:track:hello";
  hello.name = "Hello";
  hello.artist_uri = "spotify:artist:adele";
  hello.artist_name = "Adele";
  hello.album_uri = "spotify:album:25";
  hello.album_name = "25";
  synth::Track other;
  other.uri = "spotify:track:other";
  other.name = "Someone Like You";
  other.artist_uri = "spotify:artist:adele";
  other.artist_name = "Adele";
  other.album_uri = "spotify:album:21";
  other.album_name = "21";
  synth::Playlist pl;
  pl.pid = 1;
  pl.name = "adele";
  pl.tracks = {hello, other};
  Corpus corpus = synth::corpus_from({pl});
  auto coll = build_track_meta_doc_collection(corpus, all_pids(corpus));

  TrackId h = *corpus.find_track("spotify:track:hello");
  std::set<std::string> terms;
  for (std::size_t d = 0; d < coll.doc_keys.size(); ++d) {
    if (coll.doc_keys[d] != static_cast<std::int64_t>(h)) continue;
    for (auto tc : coll.docs[d]) terms.insert(coll.word_terms[tc.term]);
  }
  CHECK(terms == std::set<std::string>{"hello", "adele", "25"});

  auto idx = build_inverted_index(coll);
  CHECK(idx.df(idx.word_id("adele")) == 2);
}

TEST_CASE("empty album contributes nothing to meta docs") {
  synth::Track t = synth::simple_track(0);
  t.album_name = "";
  synth::Playlist pl;
  pl.pid = 1;
  pl.name = "x";
  pl.tracks = {t, synth::simple_track(1)};
  Corpus corpus = synth::corpus_from({pl});
  auto coll = build_track_meta_doc_collection(corpus, all_pids(corpus));
  TrackId id = *corpus.find_track("spotify:track:t0");
  for (std::size_t d = 0; d < coll.doc_keys.size(); ++d) {
    if (coll.doc_keys[d] != static_cast<std::int64_t>(id)) continue;
    std::set<std::string> terms;
    for (auto tc : coll.docs[d]) terms.insert(coll.word_terms[tc.term]);
    CHECK(terms == std::set<std::string>{"track", "0", "artist"});
  }
}

TEST_CASE("single-doc index layout and round trip") {
  // doc {a:2, b:1} -> postings a->[(0,2)], b->[(0,1)], avgdl 3
  synth::Track ta = synth::simple_track(0, 0, 0, "alpha alpha");
  synth::Playlist pl;
  pl.pid = 9;
  pl.name = "z";
  pl.tracks = {ta};
  Corpus corpus = synth::corpus_from({pl});
  PseudoDocCollection coll;
  coll.kind = CollectionKind::track_meta;
  coll.track_terms = false;
  coll.word_terms = {"a", "b"};
  coll.word_ids = {{"a", 0}, {"b", 1}};
  coll.term_space = 2;
  coll.docs = {{{0, 2}, {1, 1}}};
  coll.doc_keys = {0};

  auto idx = build_inverted_index(coll, corpus.fingerprint());
  CHECK(idx.num_docs == 1);
  CHECK(idx.avgdl == doctest::Approx(3.0));
  REQUIRE(idx.postings[0].size() == 1);
  CHECK(idx.postings[0][0].doc == 0);
  CHECK(idx.postings[0][0].tf == 2);
  CHECK(idx.postings[1][0].tf == 1);

  std::string bytes = idx.serialize();
  auto again = InvertedIndex::deserialize(bytes, "mem");
  CHECK(again.serialize() == bytes);
  CHECK(again.word_id("b") == 1);
}

TEST_CASE("df of a term present in one of five docs") {
  std::vector<synth::Playlist> pls;
  for (int p = 0; p < 5; ++p) {
    synth::Playlist pl;
    pl.pid = p;
    pl.name = "p";
    pl.tracks.push_back(synth::simple_track(p));
    pl.tracks.push_back(synth::simple_track(100 + p));
    pls.push_back(pl);
  }
  Corpus corpus = synth::corpus_from(pls);
  auto idx = build_inverted_index(build_playlist_doc_collection(corpus, all_pids(corpus)));
  CHECK(idx.num_docs == 5);
  CHECK(idx.df(*corpus.find_track("spotify:track:t3")) == 1);
}

TEST_CASE("index statistics match brute-force recomputation on random corpora") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto pls = synth::planted_genre_playlists({.genres = 2,
                                               .tracks_per_genre = 25,
                                               .artists_per_genre = 5,
                                               .albums_per_genre = 5,
                                               .playlists = 30,
                                               .min_len = 3,
                                               .max_len = 12,
                                               .noise = 0.2,
                                               .seed = seed});
    Corpus corpus = synth::corpus_from(pls);
    auto idx = build_inverted_index(build_playlist_doc_collection(corpus, all_pids(corpus)));

    std::uint64_t doc_len_sum = 0;
    for (auto len : idx.doc_len) doc_len_sum += len;
    std::uint64_t cf_sum = 0;
    for (auto c : idx.cf) cf_sum += c;
    CHECK(doc_len_sum == cf_sum);
    CHECK(idx.total_terms == doc_len_sum);
    CHECK(idx.avgdl == doctest::Approx(static_cast<double>(doc_len_sum) / idx.num_docs));

    // postings exactly match a brute-force membership scan, sorted by doc
    for (TrackId t = 0; t < corpus.num_tracks(); ++t) {
      std::vector<std::uint32_t> expect;
      for (std::size_t d = 0; d < corpus.num_playlists(); ++d) {
        const auto& tracks = corpus.playlists()[d].tracks;
        if (std::find(tracks.begin(), tracks.end(), t) != tracks.end()) {
          expect.push_back(static_cast<std::uint32_t>(d));
        }
      }
      REQUIRE(idx.postings[t].size() == expect.size());
      for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(idx.postings[t][i].doc == expect[i]);
        if (i > 0) CHECK(idx.postings[t][i - 1].doc < idx.postings[t][i].doc);
      }
    }
  }
}

TEST_CASE("indexing an empty collection fails") {
  PseudoDocCollection coll;
  coll.kind = CollectionKind::track_meta;
  CHECK_THROWS_AS(build_inverted_index(coll), Error);
}
