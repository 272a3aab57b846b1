// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "corpus.hpp"
#include "io.hpp"
#include "support/synth.hpp"

using namespace segue;

namespace {

std::vector<synth::Playlist> two_playlist_fixture() {
  synth::Playlist p1;
  p1.pid = 1;
  p1.name = "Top Hits 2017";
  for (int t : {0, 1, 2, 3, 4}) p1.tracks.push_back(synth::simple_track(t, t % 2));
  synth::Playlist p2;
  p2.pid = 2;
  p2.name = "roadtrip";
  for (int t : {2, 5, 6, 7, 8}) p2.tracks.push_back(synth::simple_track(t, t % 2));
  return {p1, p2};
}

}  // namespace

TEST_CASE("single slice with one playlist of five distinct tracks") {
  synth::Playlist pl;
  pl.pid = 10;
  pl.name = "mix";
  for (int t = 0; t < 5; ++t) pl.tracks.push_back(synth::simple_track(t));
  Corpus corpus = synth::corpus_from({pl});

  CHECK(corpus.num_playlists() == 1);
  CHECK(corpus.num_tracks() == 5);
  CHECK(corpus.bg_stats().total_playlists == 1);
  for (TrackId t = 0; t < 5; ++t) CHECK(corpus.bg_stats().track_playlists[t] == 1);
}

TEST_CASE("containment counts are per distinct playlist") {
  Corpus corpus = synth::corpus_from(two_playlist_fixture());
  CHECK(corpus.bg_stats().total_playlists == 2);
  TrackId shared = *corpus.find_track("spotify:track:t2");
  CHECK(corpus.bg_stats().track_playlists[shared] == 2);

  // duplicate occurrences inside one playlist count once
  synth::Playlist dup;
  dup.pid = 5;
  dup.name = "loop";
  dup.tracks = {synth::simple_track(1), synth::simple_track(1), synth::simple_track(2),
                synth::simple_track(3), synth::simple_track(4)};
  Corpus c2 = synth::corpus_from({dup});
  CHECK(c2.bg_stats().track_playlists[*c2.find_track("spotify:track:t1")] == 1);
}

TEST_CASE("artist containment over four playlists") {
  std::vector<synth::Playlist> pls;
  for (int p = 0; p < 4; ++p) {
    synth::Playlist pl;
    pl.pid = p;
    pl.name = "list " + std::to_string(p);
    // artist 100 appears in playlists 0..2 only
    for (int k = 0; k < 5; ++k) {
      pl.tracks.push_back(synth::simple_track(p * 10 + k, p < 3 && k == 0 ? 100 : p * 10 + k));
    }
    pls.push_back(pl);
  }
  Corpus corpus = synth::corpus_from(pls);
  ArtistId a = *corpus.find_artist("spotify:artist:a100");
  CHECK(corpus.bg_stats().artist_playlists[a] == 3);
}

TEST_CASE("title word-group counts per track") {
  Corpus corpus = synth::corpus_from(two_playlist_fixture());
  TrackId in_top = *corpus.find_track("spotify:track:t0");      // only in "Top Hits 2017"
  TrackId shared = *corpus.find_track("spotify:track:t2");      // in both
  TrackId road_only = *corpus.find_track("spotify:track:t5");   // only in "roadtrip"
  const auto& bg = corpus.bg_stats();
  CHECK(bg.track_title_group[0][in_top] == 1);
  CHECK(bg.track_title_group[0][shared] == 1);
  CHECK(bg.track_title_group[0][road_only] == 0);
  for (int g = 1; g < kWordGroupCount; ++g) {
    CHECK(bg.track_title_group[g][in_top] == 0);  // no remix/new words anywhere
  }
}

TEST_CASE("binary round trip is bit-identical") {
  Corpus corpus = synth::corpus_from(two_playlist_fixture());
  std::string bytes = corpus.serialize();
  Corpus again = Corpus::deserialize(bytes, "mem");
  CHECK(again.serialize() == bytes);
  CHECK(again.num_tracks() == corpus.num_tracks());
  CHECK(again.fingerprint() == corpus.fingerprint());
  CHECK(again.find_track("spotify:track:t2") == corpus.find_track("spotify:track:t2"));
}

TEST_CASE("containment sums match per-playlist distinct counts") {
  auto pls = synth::planted_genre_playlists({.genres = 3,
                                             .tracks_per_genre = 30,
                                             .artists_per_genre = 6,
                                             .albums_per_genre = 8,
                                             .playlists = 40,
                                             .min_len = 5,
                                             .max_len = 15,
                                             .noise = 0.1,
                                             .seed = 3});
  Corpus corpus = synth::corpus_from(pls);
  std::uint64_t track_sum = 0;
  for (auto c : corpus.bg_stats().track_playlists) track_sum += c;
  std::uint64_t distinct_sum = 0;
  for (const auto& pl : corpus.playlists()) {
    std::vector<TrackId> u(pl.tracks.begin(), pl.tracks.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    distinct_sum += u.size();
  }
  CHECK(track_sum == distinct_sum);
}

TEST_CASE("deterministic interning is independent of file order") {
  auto pls = two_playlist_fixture();
  std::string dir = synth::temp_dir("order");
  synth::write_slice({pls[0]}, dir + "/a.json");
  synth::write_slice({pls[1]}, dir + "/b.json");

  Corpus fwd = load_mpd_slices({dir + "/a.json", dir + "/b.json"}, true);
  Corpus rev = load_mpd_slices({dir + "/b.json", dir + "/a.json"}, true);
  CHECK(fwd.serialize() == rev.serialize());
  CHECK(fwd.find_track("spotify:track:t7") == rev.find_track("spotify:track:t7"));
}

TEST_CASE("loader errors") {
  CHECK_THROWS_WITH_AS(load_mpd_slices({}, true), "no input slice files", Error);

  std::string dir = synth::temp_dir("bad");
  write_file(dir + "/broken.json", "{\"playlists\": [oops");
  try {
    load_mpd_slices({dir + "/broken.json"}, true);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }

  write_file(dir + "/missing.json",
             R"({"playlists":[{"pid":77,"name":"x","tracks":[{"pos":0,"track_uri":"u"}]}]})");
  try {
    load_mpd_slices({dir + "/missing.json"}, true);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema);
    CHECK(std::string(e.what()).find("77") != std::string::npos);
  }
}

TEST_CASE("playlists without tracks are dropped") {
  std::string dir = synth::temp_dir("empty");
  write_file(dir + "/slice.json",
             R"({"playlists":[{"pid":1,"name":"empty","tracks":[]}]})");
  Corpus corpus = load_mpd_slices({dir + "/slice.json"}, true);
  CHECK(corpus.num_playlists() == 0);
  CHECK(corpus.bg_stats().total_playlists == 0);
}

TEST_CASE("background stats can be restricted to a pid subset") {
  Corpus corpus = synth::corpus_from(two_playlist_fixture());
  auto bg = compute_background_stats(corpus, std::unordered_set<Pid>{1});
  CHECK(bg.total_playlists == 1);
  CHECK(bg.track_playlists[*corpus.find_track("spotify:track:t2")] == 1);
  CHECK(bg.track_playlists[*corpus.find_track("spotify:track:t5")] == 0);
}
