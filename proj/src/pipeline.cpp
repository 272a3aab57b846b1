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

#include "pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "io.hpp"

namespace segue {

void PipelineArtifacts::rebuild_popularity() {
  popularity_order.resize(corpus.num_tracks());
  for (TrackId t = 0; t < popularity_order.size(); ++t) popularity_order[t] = t;
  std::sort(popularity_order.begin(), popularity_order.end(), [&](TrackId a, TrackId b) {
    if (bg.track_playlists[a] != bg.track_playlists[b]) {
      return bg.track_playlists[a] > bg.track_playlists[b];
    }
    return a < b;
  });
}

PipelineArtifacts PipelineArtifacts::open_dir(const std::string& dir, bool with_model) {
  namespace an = artifact_names;
  auto at = [&](const char* name) { return dir + "/" + name; };
  PipelineArtifacts art;
  art.corpus = Corpus::load(at(an::corpus));
  art.background_pids = read_background_json(at(an::background));
  std::unordered_set<Pid> bg_set(art.background_pids.begin(), art.background_pids.end());
  art.bg = compute_background_stats(art.corpus, bg_set);
  std::uint64_t fp = art.corpus.fingerprint();
  auto check = [&](std::uint64_t got, const char* name) {
    if (got != 0 && got != fp) {
      fail(Errc::version, std::string(name) + " was built against a different corpus");
    }
  };
  art.index_qe = InvertedIndex::load(at(an::index_qe));
  check(art.index_qe.corpus_fp, an::index_qe);
  art.index_meta1 = InvertedIndex::load(at(an::index_meta1));
  check(art.index_meta1.corpus_fp, an::index_meta1);
  art.index_meta2 = InvertedIndex::load(at(an::index_meta2));
  check(art.index_meta2.corpus_fp, an::index_meta2);
  for (int i = 0; i < 4; ++i) {
    art.embeddings[i] = EmbeddingMatrix::load(at(an::embedding(i)));
    check(art.embeddings[i].corpus_fp, an::embedding(i));
  }
  if (with_model) {
    std::string bin = at(an::model_bin);
    art.model = file_exists(bin) ? LtrModel::load(bin) : LtrModel::load(at(an::model_json));
  }
  art.rebuild_popularity();
  return art;
}

CandidateList source_candidates(const SplitPlaylist& split, Source source,
                                const PipelineArtifacts& art, const Params& params) {
  switch (source) {
    case Source::QE:
      return qe_candidates(split.seed_tracks, art.index_qe, params);
    case Source::META1:
      return meta_candidates(split.title, split.has_title, Source::META1, art.index_meta1,
                             split.seed_tracks, params);
    case Source::META2:
      return meta_candidates(split.title, split.has_title, Source::META2, art.index_meta2,
                             split.seed_tracks, params);
    default: {
      int which = static_cast<int>(source) - static_cast<int>(Source::EMB1);
      CandidateList list;
      list.source = source;
      list.limit = params.emb_limit;
      if (split.seed_tracks.empty()) return list;
      try {
        auto vec = playlist_vector(split.seed_tracks, art.embeddings[which]);
        return nn_candidates(vec, art.embeddings[which], split.seed_tracks, source,
                             params.emb_limit);
      } catch (const Error& e) {
        if (e.code() != Errc::no_signal) throw;
        return list;
      }
    }
  }
}

std::vector<std::pair<TrackId, SourceRanks>> candidate_union(const SplitPlaylist& split,
                                                             const PipelineArtifacts& art,
                                                             const Params& params) {
  std::map<TrackId, SourceRanks> merged;
  for (int s = 0; s < kSourceCount; ++s) {
    CandidateList list = source_candidates(split, static_cast<Source>(s), art, params);
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
      merged[list.entries[i].track].rank[s] = static_cast<std::uint32_t>(i + 1);
    }
  }
  std::vector<std::pair<TrackId, SourceRanks>> out;
  out.reserve(merged.size());
  for (auto& [track, ranks] : merged) out.push_back({track, ranks});
  return out;
}

std::vector<TrackId> recommend(const SplitPlaylist& split, const PipelineArtifacts& art,
                               const Params& params) {
  auto sentinels = rank_sentinels(params);
  auto candidates = candidate_union(split, art, params);

  PlaylistFeatureSide side = playlist_feature_side(split, art.corpus);
  std::vector<std::pair<double, TrackId>> scored;
  scored.reserve(candidates.size());
  for (const auto& [track, ranks] : candidates) {
    FeatureVec x = extract_features(side, track, ranks, sentinels, art.bg, art.corpus);
    scored.push_back({art.model.score(x.data()), track});
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::unordered_set<TrackId> seeds(split.seed_tracks.begin(), split.seed_tracks.end());
  std::unordered_set<TrackId> taken;
  std::vector<TrackId> out;
  out.reserve(params.n_predictions);
  for (const auto& [score, track] : scored) {
    if (out.size() == params.n_predictions) break;
    if (seeds.count(track) || taken.count(track)) continue;
    out.push_back(track);
    taken.insert(track);
  }
  for (TrackId track : art.popularity_order) {
    if (out.size() == params.n_predictions) break;
    if (seeds.count(track) || taken.count(track)) continue;
    out.push_back(track);
    taken.insert(track);
  }
  if (out.size() < params.n_predictions) {
    fail(Errc::infeasible, "corpus cannot supply " + std::to_string(params.n_predictions) +
                               " distinct non-seed tracks for pid " + std::to_string(split.pid));
  }
  return out;
}

std::vector<SubmissionRow> run_batch(const std::vector<SplitPlaylist>& challenge,
                                     const PipelineArtifacts& art, const Params& params) {
  std::vector<SubmissionRow> rows(challenge.size());
  parallel_chunks(challenge.size(), params.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!challenge[i].has_title && challenge[i].seed_tracks.empty()) {
        std::fprintf(stderr,
                     "warning: pid %lld has neither title nor seeds; popularity-only ranking\n",
                     static_cast<long long>(challenge[i].pid));
      }
      rows[i] = SubmissionRow{challenge[i].pid, recommend(challenge[i], art, params)};
    }
  });
  return rows;
}

std::vector<std::pair<Pid, std::vector<std::string>>> rows_to_uris(
    const std::vector<SubmissionRow>& rows, const Corpus& corpus) {
  std::vector<std::pair<Pid, std::vector<std::string>>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::string> uris;
    uris.reserve(row.tracks.size());
    for (TrackId t : row.tracks) uris.push_back(corpus.track_uri(t));
    out.push_back({row.pid, std::move(uris)});
  }
  return out;
}

std::vector<RankingExample> build_examples_for_splits(const std::vector<SplitPlaylist>& splits,
                                                      const PipelineArtifacts& art,
                                                      const Params& params) {
  auto sentinels = rank_sentinels(params);
  std::vector<std::vector<RankingExample>> per_split(splits.size());
  parallel_chunks(splits.size(), params.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto candidates = candidate_union(splits[i], art, params);
      per_split[i] = build_ranking_examples(splits[i], candidates, sentinels, art.bg, art.corpus);
    }
  });
  std::vector<RankingExample> out;
  for (auto& part : per_split) {
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

PipelineResult run_pipeline(const std::vector<std::string>& slice_paths, const Params& params,
                            const std::string& workdir, const std::string& team,
                            const std::string& email) {
  namespace an = artifact_names;
  namespace fs = std::filesystem;
  fs::create_directories(workdir);
  fs::create_directories(workdir + "/splits");
  auto at = [&](const std::string& name) { return workdir + "/" + name; };

  PipelineArtifacts art;
  art.corpus = load_mpd_slices(slice_paths, params.deterministic, params.threads);
  art.corpus.save(at(an::corpus));
  write_file(at(an::corpus_stats), art.corpus.stats_json());
  std::uint64_t fp = art.corpus.fingerprint();

  CorpusSplit split = make_ltr_splits(art.corpus, params, params.seed);
  write_background_json(at(an::background), split.background);
  write_challenge_json(at("splits/train_challenge.json"), split.ltr_train, art.corpus);
  write_truth_json(at("splits/train_truth.json"), split.ltr_train, art.corpus);
  write_challenge_json(at("splits/eval_challenge.json"), split.ltr_eval, art.corpus);
  write_truth_json(at("splits/eval_truth.json"), split.ltr_eval, art.corpus);
  art.background_pids = split.background;

  std::unordered_set<Pid> bg_set(split.background.begin(), split.background.end());
  art.bg = compute_background_stats(art.corpus, bg_set);

  art.index_qe =
      build_inverted_index(build_playlist_doc_collection(art.corpus, bg_set, params.playlist_doc_raw_tf), fp);
  art.index_qe.save(at(an::index_qe));
  art.index_meta1 = build_inverted_index(build_track_title_doc_collection(art.corpus, bg_set), fp);
  art.index_meta1.save(at(an::index_meta1));
  art.index_meta2 = build_inverted_index(build_track_meta_doc_collection(art.corpus, bg_set), fp);
  art.index_meta2.save(at(an::index_meta2));

  for (int v = 0; v < 4; ++v) {
    auto variant = static_cast<EmbVariant>(v);
    EmbCorpus emb_corpus =
        build_emb_corpus(art.corpus, bg_set, variant, params, params.seed + 101 * (v + 1));
    CbowConfig cc;
    cc.dim = params.emb_dim;
    cc.window = (variant == EmbVariant::emb1 || variant == EmbVariant::emb2)
                    ? params.emb_window_docs
                    : params.emb_window_walks;
    cc.negatives = params.emb_negatives;
    cc.epochs = params.emb_epochs;
    cc.lr = params.emb_lr;
    cc.seed = params.seed + 7 * (v + 1);
    cc.threads = params.threads;
    art.embeddings[v] = train_cbow(emb_corpus, cc);
    art.embeddings[v].corpus_fp = fp;
    art.embeddings[v].save(at(an::embedding(v)));
  }
  art.rebuild_popularity();

  // candidate files for the training split, then features
  for (int s = 0; s < kSourceCount; ++s) {
    std::vector<std::pair<Pid, CandidateList>> lists;
    lists.reserve(split.ltr_train.size());
    for (const auto& entry : split.ltr_train) {
      lists.push_back({entry.pid, source_candidates(entry, static_cast<Source>(s), art, params)});
    }
    write_candidates_file(at("candidates_" + std::string(source_name(static_cast<Source>(s))) + ".bin"),
                          fp, lists);
  }

  std::vector<RankingExample> train_rows = build_examples_for_splits(split.ltr_train, art, params);
  write_features_bin(at("features.bin"), fp, rank_sentinels(params), train_rows);
  write_features_text(at("features.txt"), train_rows);

  LtrConfig ltr_config;
  ltr_config.trees = params.ltr_trees;
  ltr_config.leaves = params.ltr_leaves;
  ltr_config.lr = params.ltr_lr;
  ltr_config.ndcg_cutoff = params.ltr_ndcg_cutoff;
  ltr_config.seed = params.seed;
  ltr_config.threads = params.threads;
  art.model = train_lambdamart(train_rows, ltr_config);
  art.model.save(at(an::model_json));
  art.model.save(at(an::model_bin));

  auto rows = run_batch(split.ltr_eval, art, params);
  auto uri_rows = rows_to_uris(rows, art.corpus);
  PipelineResult result;
  result.submission_path = at("submission.csv");
  write_submission_csv(result.submission_path, team, email, uri_rows);

  auto truth = read_truth_json(at("splits/eval_truth.json"));
  result.report = evaluate_run(uri_rows, truth, art.corpus, params);
  result.report_json_path = at("report.json");
  write_file(result.report_json_path, result.report.to_json());
  write_file(at("report.txt"), result.report.to_table());
  return result;
}

}  // namespace segue
