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

#include "segue.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "corpus.hpp"
#include "embed.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "index.hpp"
#include "io.hpp"
#include "ltr.hpp"
#include "pipeline.hpp"
#include "retrieval.hpp"
#include "splits.hpp"

struct segue_corpus {
  segue::Corpus c;
};
struct segue_index {
  segue::InvertedIndex idx;
};
struct segue_embedding {
  segue::EmbeddingMatrix m;
};
struct segue_model {
  segue::LtrModel m;
};
struct segue_artifacts {
  segue::PipelineArtifacts a;
};

namespace {

thread_local std::string g_last_error;

segue_status map_code(segue::Errc code) {
  switch (code) {
    case segue::Errc::io: return SEGUE_ERR_IO;
    case segue::Errc::parse: return SEGUE_ERR_PARSE;
    case segue::Errc::schema: return SEGUE_ERR_SCHEMA;
    case segue::Errc::config: return SEGUE_ERR_CONFIG;
    case segue::Errc::version: return SEGUE_ERR_VERSION;
    case segue::Errc::invalid_argument: return SEGUE_ERR_INVALID_ARGUMENT;
    case segue::Errc::infeasible: return SEGUE_ERR_INFEASIBLE;
    case segue::Errc::no_signal: return SEGUE_ERR_NO_SIGNAL;
    case segue::Errc::internal: return SEGUE_ERR_INTERNAL;
  }
  return SEGUE_ERR_INTERNAL;
}

template <typename Fn>
segue_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    return SEGUE_OK;
  } catch (const segue::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SEGUE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SEGUE_ERR_INTERNAL;
  }
}

segue_status invalid(const char* msg) {
  g_last_error = msg;
  return SEGUE_ERR_INVALID_ARGUMENT;
}

segue::Params to_params(const segue_params* p) {
  segue::Params out;
  if (!p) return out;
  out.deterministic = p->deterministic != 0;
  out.threads = p->threads;
  out.seed = p->seed;
  out.background_fraction = p->background_fraction;
  out.train_playlists = p->train_playlists;
  out.eval_playlists = p->eval_playlists;
  for (int i = 0; i < 10; ++i) out.category_weights[i] = p->category_weights[i];
  out.playlist_doc_raw_tf = p->playlist_doc_raw_tf != 0;
  out.bm25_k1 = p->bm25_k1;
  out.bm25_b = p->bm25_b;
  out.mu = p->mu;
  out.k_feedback = p->k_feedback;
  out.strict_rm1 = p->strict_rm1 != 0;
  out.qe_limit = p->qe_limit;
  out.meta_limit = p->meta_limit;
  out.emb_limit = p->emb_limit;
  out.emb_dim = p->emb_dim;
  out.emb_window_docs = p->emb_window_docs;
  out.emb_window_walks = p->emb_window_walks;
  out.emb_negatives = p->emb_negatives;
  out.emb_epochs = p->emb_epochs;
  out.emb_lr = p->emb_lr;
  out.emb_min_count = p->emb_min_count;
  out.walks_per_start = p->walks_per_start;
  out.walk_cycles = p->walk_cycles;
  out.ltr_trees = p->ltr_trees;
  out.ltr_leaves = p->ltr_leaves;
  out.ltr_lr = p->ltr_lr;
  out.ltr_ndcg_cutoff = p->ltr_ndcg_cutoff;
  out.n_predictions = p->n_predictions;
  out.artist_credit = p->artist_credit;
  if (p->n_eval_cutoffs > 0 && p->n_eval_cutoffs <= 8) {
    out.eval_cutoffs.assign(p->eval_cutoffs, p->eval_cutoffs + p->n_eval_cutoffs);
  }
  return out;
}

std::unordered_set<segue::Pid> load_background_set(const segue::Corpus& corpus,
                                                   const char* background_json_or_null) {
  std::unordered_set<segue::Pid> bg;
  if (background_json_or_null) {
    auto pids = segue::read_background_json(background_json_or_null);
    bg.insert(pids.begin(), pids.end());
  } else {
    for (const auto& pl : corpus.playlists()) bg.insert(pl.pid);
  }
  return bg;
}

}  // namespace

extern "C" {

uint32_t segue_abi_version(void) { return 1; }

const char* segue_status_str(segue_status status) {
  switch (status) {
    case SEGUE_OK: return "ok";
    case SEGUE_ERR_IO: return "io error";
    case SEGUE_ERR_PARSE: return "parse error";
    case SEGUE_ERR_SCHEMA: return "schema error";
    case SEGUE_ERR_CONFIG: return "configuration error";
    case SEGUE_ERR_VERSION: return "artifact version mismatch";
    case SEGUE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEGUE_ERR_INFEASIBLE: return "infeasible request";
    case SEGUE_ERR_NO_SIGNAL: return "no usable signal";
    case SEGUE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* segue_last_error(void) { return g_last_error.c_str(); }

void segue_params_init(segue_params* params) {
  if (!params) return;
  segue::Params d;
  std::memset(params, 0, sizeof *params);
  params->deterministic = d.deterministic ? 1 : 0;
  params->threads = d.threads;
  params->seed = d.seed;
  params->background_fraction = d.background_fraction;
  params->train_playlists = d.train_playlists;
  params->eval_playlists = d.eval_playlists;
  for (int i = 0; i < 10; ++i) params->category_weights[i] = d.category_weights[i];
  params->playlist_doc_raw_tf = d.playlist_doc_raw_tf ? 1 : 0;
  params->bm25_k1 = d.bm25_k1;
  params->bm25_b = d.bm25_b;
  params->mu = d.mu;
  params->k_feedback = d.k_feedback;
  params->strict_rm1 = d.strict_rm1 ? 1 : 0;
  params->qe_limit = d.qe_limit;
  params->meta_limit = d.meta_limit;
  params->emb_limit = d.emb_limit;
  params->emb_dim = d.emb_dim;
  params->emb_window_docs = d.emb_window_docs;
  params->emb_window_walks = d.emb_window_walks;
  params->emb_negatives = d.emb_negatives;
  params->emb_epochs = d.emb_epochs;
  params->emb_lr = d.emb_lr;
  params->emb_min_count = d.emb_min_count;
  params->walks_per_start = d.walks_per_start;
  params->walk_cycles = d.walk_cycles;
  params->ltr_trees = d.ltr_trees;
  params->ltr_leaves = d.ltr_leaves;
  params->ltr_lr = d.ltr_lr;
  params->ltr_ndcg_cutoff = d.ltr_ndcg_cutoff;
  params->n_predictions = d.n_predictions;
  params->artist_credit = d.artist_credit;
  params->n_eval_cutoffs = d.eval_cutoffs.size();
  for (std::size_t i = 0; i < d.eval_cutoffs.size(); ++i) params->eval_cutoffs[i] = d.eval_cutoffs[i];
}

void segue_string_free(char* s) { std::free(s); }

/* corpus ---------------------------------------------------------------- */

segue_status segue_corpus_ingest(const char* const* slice_paths, size_t n_paths,
                                 const segue_params* params, segue_corpus** out) {
  if (!out || (!slice_paths && n_paths > 0)) return invalid("null argument");
  return wrap([&] {
    std::vector<std::string> paths(slice_paths, slice_paths + n_paths);
    segue::Params p = to_params(params);
    auto handle = new segue_corpus{segue::load_mpd_slices(paths, p.deterministic, p.threads)};
    *out = handle;
  });
}

segue_status segue_corpus_read(const char* path, segue_corpus** out) {
  if (!path || !out) return invalid("null argument");
  return wrap([&] { *out = new segue_corpus{segue::Corpus::load(path)}; });
}

segue_status segue_corpus_write(const segue_corpus* corpus, const char* path,
                                const char* stats_json_path_or_null) {
  if (!corpus || !path) return invalid("null argument");
  return wrap([&] {
    corpus->c.save(path);
    if (stats_json_path_or_null) segue::write_file(stats_json_path_or_null, corpus->c.stats_json());
  });
}

void segue_corpus_free(segue_corpus* corpus) { delete corpus; }

size_t segue_corpus_num_playlists(const segue_corpus* corpus) {
  return corpus ? corpus->c.num_playlists() : 0;
}
size_t segue_corpus_num_tracks(const segue_corpus* corpus) {
  return corpus ? corpus->c.num_tracks() : 0;
}
size_t segue_corpus_num_artists(const segue_corpus* corpus) {
  return corpus ? corpus->c.num_artists() : 0;
}
size_t segue_corpus_num_albums(const segue_corpus* corpus) {
  return corpus ? corpus->c.num_albums() : 0;
}

/* splits ------------------------------------------------------------------ */

segue_status segue_make_splits(const segue_corpus* corpus, const segue_params* params,
                               const char* out_dir) {
  if (!corpus || !out_dir) return invalid("null argument");
  return wrap([&] {
    segue::Params p = to_params(params);
    std::filesystem::create_directories(std::string(out_dir) + "/splits");
    segue::CorpusSplit split = segue::make_ltr_splits(corpus->c, p, p.seed);
    std::string dir(out_dir);
    segue::write_background_json(dir + "/background.json", split.background);
    segue::write_challenge_json(dir + "/splits/train_challenge.json", split.ltr_train, corpus->c);
    segue::write_truth_json(dir + "/splits/train_truth.json", split.ltr_train, corpus->c);
    segue::write_challenge_json(dir + "/splits/eval_challenge.json", split.ltr_eval, corpus->c);
    segue::write_truth_json(dir + "/splits/eval_truth.json", split.ltr_eval, corpus->c);
  });
}

/* indexes ------------------------------------------------------------------ */

segue_status segue_index_build(const segue_corpus* corpus, const char* background_json_or_null,
                               segue_collection collection, const segue_params* params,
                               segue_index** out) {
  if (!corpus || !out) return invalid("null argument");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto bg = load_background_set(corpus->c, background_json_or_null);
    segue::PseudoDocCollection docs;
    switch (collection) {
      case SEGUE_COLLECTION_QE:
        docs = segue::build_playlist_doc_collection(corpus->c, bg, p.playlist_doc_raw_tf);
        break;
      case SEGUE_COLLECTION_META1:
        docs = segue::build_track_title_doc_collection(corpus->c, bg);
        break;
      case SEGUE_COLLECTION_META2:
        docs = segue::build_track_meta_doc_collection(corpus->c, bg);
        break;
      default:
        segue::fail(segue::Errc::invalid_argument, "unknown collection kind");
    }
    *out = new segue_index{segue::build_inverted_index(docs, corpus->c.fingerprint())};
  });
}

segue_status segue_index_read(const char* path, segue_index** out) {
  if (!path || !out) return invalid("null argument");
  return wrap([&] { *out = new segue_index{segue::InvertedIndex::load(path)}; });
}

segue_status segue_index_write(const segue_index* index, const char* path) {
  if (!index || !path) return invalid("null argument");
  return wrap([&] { index->idx.save(path); });
}

void segue_index_free(segue_index* index) { delete index; }

size_t segue_index_num_docs(const segue_index* index) { return index ? index->idx.num_docs : 0; }
size_t segue_index_num_terms(const segue_index* index) {
  return index ? index->idx.postings.size() : 0;
}

/* embeddings ----------------------------------------------------------------- */

segue_status segue_embedding_train(const segue_corpus* corpus,
                                   const char* background_json_or_null, int variant_1to4,
                                   const segue_params* params, segue_embedding** out) {
  if (!corpus || !out) return invalid("null argument");
  if (variant_1to4 < 1 || variant_1to4 > 4) return invalid("variant must be 1..4");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto bg = load_background_set(corpus->c, background_json_or_null);
    auto variant = static_cast<segue::EmbVariant>(variant_1to4 - 1);
    segue::EmbCorpus emb_corpus =
        segue::build_emb_corpus(corpus->c, bg, variant, p, p.seed + 101 * variant_1to4);
    segue::CbowConfig cc;
    cc.dim = p.emb_dim;
    cc.window = (variant == segue::EmbVariant::emb1 || variant == segue::EmbVariant::emb2)
                    ? p.emb_window_docs
                    : p.emb_window_walks;
    cc.negatives = p.emb_negatives;
    cc.epochs = p.emb_epochs;
    cc.lr = p.emb_lr;
    cc.seed = p.seed + 7 * variant_1to4;
    cc.threads = p.threads;
    auto handle = new segue_embedding{segue::train_cbow(emb_corpus, cc)};
    handle->m.corpus_fp = corpus->c.fingerprint();
    *out = handle;
  });
}

segue_status segue_embedding_read(const char* path, segue_embedding** out) {
  if (!path || !out) return invalid("null argument");
  return wrap([&] { *out = new segue_embedding{segue::EmbeddingMatrix::load(path)}; });
}

segue_status segue_embedding_write(const segue_embedding* embedding, const char* path) {
  if (!embedding || !path) return invalid("null argument");
  return wrap([&] { embedding->m.save(path); });
}

void segue_embedding_free(segue_embedding* embedding) { delete embedding; }

size_t segue_embedding_rows(const segue_embedding* embedding) {
  return embedding ? embedding->m.rows() : 0;
}
uint32_t segue_embedding_dim(const segue_embedding* embedding) {
  return embedding ? embedding->m.dim : 0;
}

/* candidates / features --------------------------------------------------------- */

segue_status segue_gen_candidates(segue_source source, const char* challenge_json,
                                  const segue_corpus* corpus,
                                  const char* background_json_or_null,
                                  const segue_index* index_or_null,
                                  const segue_embedding* embedding_or_null,
                                  const segue_params* params, const char* out_path) {
  if (!challenge_json || !corpus || !out_path) return invalid("null argument");
  bool needs_index = source <= SEGUE_SOURCE_META2;
  if (needs_index && !index_or_null) return invalid("source requires an index");
  if (!needs_index && !embedding_or_null) return invalid("source requires an embedding");
  (void)background_json_or_null;
  return wrap([&] {
    segue::Params p = to_params(params);
    auto entries = segue::read_challenge_json(challenge_json, corpus->c);
    std::vector<std::pair<segue::Pid, segue::CandidateList>> lists;
    lists.reserve(entries.size());
    for (const auto& e : entries) {
      segue::CandidateList list;
      switch (source) {
        case SEGUE_SOURCE_QE:
          list = segue::qe_candidates(e.seed_tracks, index_or_null->idx, p);
          break;
        case SEGUE_SOURCE_META1:
        case SEGUE_SOURCE_META2:
          list = segue::meta_candidates(e.title, e.has_title,
                                        source == SEGUE_SOURCE_META1 ? segue::Source::META1
                                                                     : segue::Source::META2,
                                        index_or_null->idx, e.seed_tracks, p);
          break;
        default: {
          auto src = static_cast<segue::Source>(source);
          list.source = src;
          list.limit = p.emb_limit;
          if (!e.seed_tracks.empty()) {
            try {
              auto vec = segue::playlist_vector(e.seed_tracks, embedding_or_null->m);
              list = segue::nn_candidates(vec, embedding_or_null->m, e.seed_tracks, src, p.emb_limit);
            } catch (const segue::Error& err) {
              if (err.code() != segue::Errc::no_signal) throw;
            }
          }
          break;
        }
      }
      lists.push_back({e.pid, std::move(list)});
    }
    segue::write_candidates_file(out_path, corpus->c.fingerprint(), lists);
  });
}

segue_status segue_extract_features(const char* challenge_json, const char* truth_json_or_null,
                                    const segue_corpus* corpus, const char* background_json,
                                    const char* const* candidate_paths, size_t n_paths,
                                    const segue_params* params, const char* out_bin,
                                    const char* out_text_or_null) {
  if (!challenge_json || !corpus || !background_json || !out_bin) return invalid("null argument");
  if (!candidate_paths && n_paths > 0) return invalid("null candidate paths");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto entries = segue::read_challenge_json(challenge_json, corpus->c);
    auto bg_set = load_background_set(corpus->c, background_json);
    segue::BackgroundStats bg = segue::compute_background_stats(corpus->c, bg_set);
    auto sentinels = segue::rank_sentinels(p);

    // per-pid, per-source candidate ranks from the provided files
    std::unordered_map<segue::Pid, segue::SourceRanks> empty_ranks;
    std::unordered_map<segue::Pid, std::map<segue::TrackId, segue::SourceRanks>> merged;
    std::uint64_t fp = corpus->c.fingerprint();
    for (size_t i = 0; i < n_paths; ++i) {
      segue::Source source;
      auto lists = segue::read_candidates_file(candidate_paths[i], fp, &source);
      int s = static_cast<int>(source);
      for (auto& [pid, list] : lists) {
        auto& by_track = merged[pid];
        for (std::size_t r = 0; r < list.entries.size(); ++r) {
          by_track[list.entries[r].track].rank[s] = static_cast<std::uint32_t>(r + 1);
        }
      }
    }

    std::unordered_map<segue::Pid, std::vector<std::string>> truth;
    if (truth_json_or_null) truth = segue::read_truth_json(truth_json_or_null);

    std::vector<segue::RankingExample> rows;
    for (auto& e : entries) {
      auto it = merged.find(e.pid);
      if (it == merged.end()) continue;
      if (truth_json_or_null) {
        auto t = truth.find(e.pid);
        if (t != truth.end()) {
          for (const auto& uri : t->second) {
            auto id = corpus->c.find_track(uri);
            if (id) e.held_tracks.push_back(*id);
          }
          std::sort(e.held_tracks.begin(), e.held_tracks.end());
          e.held_tracks.erase(std::unique(e.held_tracks.begin(), e.held_tracks.end()),
                              e.held_tracks.end());
          if (e.n_held == 0) e.n_held = static_cast<std::uint32_t>(e.held_tracks.size());
        }
      }
      std::vector<std::pair<segue::TrackId, segue::SourceRanks>> candidates(it->second.begin(),
                                                                            it->second.end());
      auto examples = segue::build_ranking_examples(e, candidates, sentinels, bg, corpus->c);
      if (!truth_json_or_null) {
        for (auto& ex : examples) ex.label = -1;
      }
      rows.insert(rows.end(), examples.begin(), examples.end());
    }
    segue::write_features_bin(out_bin, fp, sentinels, rows);
    if (out_text_or_null) segue::write_features_text(out_text_or_null, rows);
  });
}

/* model --------------------------------------------------------------------------- */

segue_status segue_model_train(const char* features_bin, const segue_params* params,
                               segue_model** out) {
  if (!features_bin || !out) return invalid("null argument");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto rows = segue::read_features_bin(features_bin, 0);
    segue::LtrConfig config;
    config.trees = p.ltr_trees;
    config.leaves = p.ltr_leaves;
    config.lr = p.ltr_lr;
    config.ndcg_cutoff = p.ltr_ndcg_cutoff;
    config.seed = p.seed;
    config.threads = p.threads;
    *out = new segue_model{segue::train_lambdamart(rows, config)};
  });
}

segue_status segue_model_read(const char* path, segue_model** out) {
  if (!path || !out) return invalid("null argument");
  return wrap([&] { *out = new segue_model{segue::LtrModel::load(path)}; });
}

segue_status segue_model_write(const segue_model* model, const char* json_path_or_null,
                               const char* bin_path_or_null) {
  if (!model || (!json_path_or_null && !bin_path_or_null)) return invalid("null argument");
  return wrap([&] {
    if (json_path_or_null) segue::write_file(json_path_or_null, model->m.serialize_json());
    if (bin_path_or_null) segue::write_file(bin_path_or_null, model->m.serialize_bin());
  });
}

void segue_model_free(segue_model* model) { delete model; }

size_t segue_model_num_trees(const segue_model* model) { return model ? model->m.trees.size() : 0; }

/* prediction / evaluation ------------------------------------------------------------ */

segue_status segue_artifacts_open(const char* dir, segue_artifacts** out) {
  if (!dir || !out) return invalid("null argument");
  return wrap([&] { *out = new segue_artifacts{segue::PipelineArtifacts::open_dir(dir)}; });
}

void segue_artifacts_free(segue_artifacts* artifacts) { delete artifacts; }

segue_status segue_predict(const segue_artifacts* artifacts, const char* challenge_json,
                           const segue_params* params, const char* team, const char* email,
                           const char* out_csv) {
  if (!artifacts || !challenge_json || !out_csv) return invalid("null argument");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto entries = segue::read_challenge_json(challenge_json, artifacts->a.corpus);
    auto rows = segue::run_batch(entries, artifacts->a, p);
    segue::write_submission_csv(out_csv, team ? team : "segue", email ? email : "segue@example.com",
                                segue::rows_to_uris(rows, artifacts->a.corpus));
  });
}

segue_status segue_evaluate(const segue_corpus* corpus, const char* predictions_csv,
                            const char* truth_json, const segue_params* params,
                            const char* report_json_path_or_null, char** report_text_out) {
  if (!corpus || !predictions_csv || !truth_json) return invalid("null argument");
  return wrap([&] {
    segue::Params p = to_params(params);
    auto predictions = segue::read_submission_csv(predictions_csv);
    auto truth = segue::read_truth_json(truth_json);
    segue::MetricReport report = segue::evaluate_run(predictions, truth, corpus->c, p);
    if (report_json_path_or_null) segue::write_file(report_json_path_or_null, report.to_json());
    if (report_text_out) {
      std::string text = report.to_table();
      char* buf = static_cast<char*>(std::malloc(text.size() + 1));
      if (!buf) segue::fail(segue::Errc::internal, "out of memory");
      std::memcpy(buf, text.c_str(), text.size() + 1);
      *report_text_out = buf;
    }
  });
}

segue_status segue_run_pipeline(const char* const* slice_paths, size_t n_paths,
                                const segue_params* params, const char* workdir, const char* team,
                                const char* email) {
  if (!slice_paths || n_paths == 0 || !workdir) return invalid("null argument");
  return wrap([&] {
    std::vector<std::string> paths(slice_paths, slice_paths + n_paths);
    segue::run_pipeline(paths, to_params(params), workdir, team ? team : "segue",
                        email ? email : "segue@example.com");
  });
}

} /* extern "C" */
