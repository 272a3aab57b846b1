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

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segue.h"

namespace {

struct CorpusHandle {
  segue_corpus* p = nullptr;
  ~CorpusHandle() { segue_corpus_free(p); }
};
struct IndexHandle {
  segue_index* p = nullptr;
  ~IndexHandle() { segue_index_free(p); }
};
struct EmbeddingHandle {
  segue_embedding* p = nullptr;
  ~EmbeddingHandle() { segue_embedding_free(p); }
};
struct ModelHandle {
  segue_model* p = nullptr;
  ~ModelHandle() { segue_model_free(p); }
};
struct ArtifactsHandle {
  segue_artifacts* p = nullptr;
  ~ArtifactsHandle() { segue_artifacts_free(p); }
};

int check(segue_status status) {
  if (status == SEGUE_OK) return 0;
  std::fprintf(stderr, "error: %s: %s\n", segue_status_str(status), segue_last_error());
  return 1;
}

std::vector<const char*> c_paths(const std::vector<std::string>& paths) {
  std::vector<const char*> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.c_str());
  return out;
}

void print_config(const segue_params& p) {
  std::printf("seed = %llu\n", static_cast<unsigned long long>(p.seed));
  std::printf("threads = %d\n", p.threads);
  std::printf("deterministic = %d\n", p.deterministic);
  std::printf("background-fraction = %g\n", p.background_fraction);
  std::printf("train-size = %llu\n", static_cast<unsigned long long>(p.train_playlists));
  std::printf("eval-size = %llu\n", static_cast<unsigned long long>(p.eval_playlists));
  std::printf("category-weights =");
  for (double w : p.category_weights) std::printf(" %g", w);
  std::printf("\n");
  std::printf("raw-playlist-tf = %d\n", p.playlist_doc_raw_tf);
  std::printf("bm25-k1 = %g\nbm25-b = %g\n", p.bm25_k1, p.bm25_b);
  std::printf("mu = %g\n", p.mu);
  std::printf("k-feedback = %u\n", p.k_feedback);
  std::printf("strict-rm1 = %d\n", p.strict_rm1);
  std::printf("qe-limit = %u\nmeta-limit = %u\nemb-limit = %u\n", p.qe_limit, p.meta_limit,
              p.emb_limit);
  std::printf("emb-dim = %u\nemb-window-docs = %u\nemb-window-walks = %u\n", p.emb_dim,
              p.emb_window_docs, p.emb_window_walks);
  std::printf("emb-negatives = %u\nemb-epochs = %u\nemb-lr = %g\nemb-min-count = %u\n",
              p.emb_negatives, p.emb_epochs, p.emb_lr, p.emb_min_count);
  std::printf("walks-per-start = %u\nwalk-cycles = %u\n", p.walks_per_start, p.walk_cycles);
  std::printf("ltr-trees = %u\nltr-leaves = %u\nltr-lr = %g\nltr-ndcg-cutoff = %u\n", p.ltr_trees,
              p.ltr_leaves, p.ltr_lr, p.ltr_ndcg_cutoff);
  std::printf("n-predictions = %u\nartist-credit = %g\n", p.n_predictions, p.artist_credit);
  std::printf("eval-cutoffs =");
  for (size_t i = 0; i < p.n_eval_cutoffs; ++i) std::printf(" %u", p.eval_cutoffs[i]);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"segue - playlist continuation engine"};
  app.fallthrough(true);
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "key=value config file")->envname("SEGUE_CONFIG");

  segue_params params;
  segue_params_init(&params);
  bool want_print_config = false;
  bool insertion_order = false;
  std::vector<double> category_weights;
  std::vector<uint32_t> eval_cutoffs;

  app.add_flag("--print-config", want_print_config, "print effective settings");
  app.add_option("--seed", params.seed, "rng seed for every stochastic stage")
      ->capture_default_str();
  app.add_option("--threads", params.threads, "worker threads; 1 = deterministic mode")
      ->capture_default_str();
  app.add_flag("--insertion-order-intern", insertion_order,
               "intern ids in insertion order instead of sorted-URI order");
  app.add_option("--background-fraction", params.background_fraction)->capture_default_str();
  app.add_option("--train-size", params.train_playlists)->capture_default_str();
  app.add_option("--eval-size", params.eval_playlists)->capture_default_str();
  app.add_option("--category-weights", category_weights, "10 sampling weights")->expected(10);
  app.add_flag("--raw-playlist-tf", params.playlist_doc_raw_tf,
               "keep duplicate tracks as raw term frequency in playlist docs");
  app.add_option("--bm25-k1", params.bm25_k1)->capture_default_str();
  app.add_option("--bm25-b", params.bm25_b)->capture_default_str();
  app.add_option("--mu", params.mu, "Dirichlet smoothing")->capture_default_str();
  app.add_option("--k-feedback", params.k_feedback)->capture_default_str();
  app.add_flag("--strict-rm1", params.strict_rm1, "fully unsmoothed seed-likelihood product");
  app.add_option("--qe-limit", params.qe_limit)->capture_default_str();
  app.add_option("--meta-limit", params.meta_limit)->capture_default_str();
  app.add_option("--emb-limit", params.emb_limit)->capture_default_str();
  app.add_option("--emb-dim", params.emb_dim)->capture_default_str();
  app.add_option("--emb-window-docs", params.emb_window_docs)->capture_default_str();
  app.add_option("--emb-window-walks", params.emb_window_walks)->capture_default_str();
  app.add_option("--emb-negatives", params.emb_negatives)->capture_default_str();
  app.add_option("--emb-epochs", params.emb_epochs)->capture_default_str();
  app.add_option("--emb-lr", params.emb_lr)->capture_default_str();
  app.add_option("--emb-min-count", params.emb_min_count)->capture_default_str();
  app.add_option("--walks-per-start", params.walks_per_start)->capture_default_str();
  app.add_option("--walk-cycles", params.walk_cycles)->capture_default_str();
  app.add_option("--ltr-trees", params.ltr_trees)->capture_default_str();
  app.add_option("--ltr-leaves", params.ltr_leaves)->capture_default_str();
  app.add_option("--ltr-lr", params.ltr_lr)->capture_default_str();
  app.add_option("--ltr-ndcg-cutoff", params.ltr_ndcg_cutoff, "10 (main) or 500 (creative)")
      ->capture_default_str();
  app.add_option("--n-predictions", params.n_predictions)->capture_default_str();
  app.add_option("--artist-credit", params.artist_credit)->capture_default_str();
  app.add_option("--eval-cutoffs", eval_cutoffs, "report cutoffs")->expected(1, 8);

  // ingest
  auto* cmd_ingest = app.add_subcommand("ingest", "intern MPD JSON slices into a corpus file");
  std::vector<std::string> slices;
  std::string out_path, stats_path;
  cmd_ingest->add_option("slices", slices, "slice JSON files")->required();
  cmd_ingest->add_option("--out", out_path, "output corpus file")->required();
  cmd_ingest->add_option("--stats", stats_path, "stats sidecar JSON");

  // split
  auto* cmd_split = app.add_subcommand("split", "background/train/eval partition + challenge files");
  std::string corpus_path, out_dir;
  cmd_split->add_option("--corpus", corpus_path)->required();
  cmd_split->add_option("--out-dir", out_dir)->required();

  // build-index
  auto* cmd_index = app.add_subcommand("build-index", "build an inverted index");
  std::string collection = "qe", background_path;
  cmd_index->add_option("--corpus", corpus_path)->required();
  cmd_index->add_option("--background", background_path, "background pid list (JSON)");
  cmd_index->add_option("--collection", collection)->check(CLI::IsMember({"qe", "meta1", "meta2"}));
  cmd_index->add_option("--out", out_path)->required();

  // train-embeddings
  auto* cmd_emb = app.add_subcommand("train-embeddings", "train one embedding variant");
  std::string variant = "emb1";
  cmd_emb->add_option("--corpus", corpus_path)->required();
  cmd_emb->add_option("--background", background_path);
  cmd_emb->add_option("--variant", variant)->check(CLI::IsMember({"emb1", "emb2", "emb3", "emb4"}));
  cmd_emb->add_option("--out", out_path)->required();

  // gen-candidates
  auto* cmd_cand = app.add_subcommand("gen-candidates", "candidate lists for a challenge file");
  std::string source = "qe", input_path, index_path, embedding_path;
  cmd_cand->add_option("--source", source)
      ->check(CLI::IsMember({"qe", "meta1", "meta2", "emb1", "emb2", "emb3", "emb4"}));
  cmd_cand->add_option("--input", input_path, "challenge JSON")->required();
  cmd_cand->add_option("--corpus", corpus_path)->required();
  cmd_cand->add_option("--index", index_path, "index file (qe/meta sources)");
  cmd_cand->add_option("--embedding", embedding_path, "embedding file (emb sources)");
  cmd_cand->add_option("--out", out_path)->required();

  // extract-features
  auto* cmd_feat = app.add_subcommand("extract-features", "feature rows for candidate files");
  std::string challenge_path, truth_path, out_bin, out_txt;
  std::vector<std::string> candidate_paths;
  cmd_feat->add_option("--challenge", challenge_path)->required();
  cmd_feat->add_option("--truth", truth_path, "ground truth JSON (for labels)");
  cmd_feat->add_option("--corpus", corpus_path)->required();
  cmd_feat->add_option("--background", background_path)->required();
  cmd_feat->add_option("--candidates", candidate_paths, "candidate files")->required();
  cmd_feat->add_option("--out-bin", out_bin)->required();
  cmd_feat->add_option("--out-txt", out_txt, "plain-text ranking dump");

  // train-ltr
  auto* cmd_ltr = app.add_subcommand("train-ltr", "train the ranking model");
  std::string features_path, model_json, model_bin;
  cmd_ltr->add_option("--features", features_path)->required();
  cmd_ltr->add_option("--out-json", model_json);
  cmd_ltr->add_option("--out-bin", model_bin);

  // predict
  auto* cmd_predict = app.add_subcommand("predict", "emit a submission for a challenge file");
  std::string artifacts_dir, team = "segue", email = "segue@example.com";
  cmd_predict->add_option("--artifacts", artifacts_dir, "artifact directory")->required();
  cmd_predict->add_option("--challenge", challenge_path)->required();
  cmd_predict->add_option("--team", team)->capture_default_str();
  cmd_predict->add_option("--email", email)->capture_default_str();
  cmd_predict->add_option("--out", out_path)->required();

  // evaluate
  auto* cmd_eval = app.add_subcommand("evaluate", "score a submission against ground truth");
  std::string pred_path, report_json;
  cmd_eval->add_option("--pred", pred_path)->required();
  cmd_eval->add_option("--truth", truth_path)->required();
  cmd_eval->add_option("--corpus", corpus_path)->required();
  cmd_eval->add_option("--report-json", report_json);

  // pipeline
  auto* cmd_pipe = app.add_subcommand("pipeline", "run the whole chain end to end");
  std::string workdir;
  cmd_pipe->add_option("slices", slices, "slice JSON files")->required();
  cmd_pipe->add_option("--workdir", workdir)->required();
  cmd_pipe->add_option("--team", team)->capture_default_str();
  cmd_pipe->add_option("--email", email)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  params.deterministic = insertion_order ? 0 : 1;
  if (!category_weights.empty()) {
    for (size_t i = 0; i < 10 && i < category_weights.size(); ++i) {
      params.category_weights[i] = category_weights[i];
    }
  }
  if (!eval_cutoffs.empty()) {
    params.n_eval_cutoffs = eval_cutoffs.size();
    for (size_t i = 0; i < eval_cutoffs.size(); ++i) params.eval_cutoffs[i] = eval_cutoffs[i];
  }
  if (want_print_config) print_config(params);
  if (app.get_subcommands().empty()) return 0;

  if (cmd_ingest->parsed()) {
    CorpusHandle corpus;
    auto paths = c_paths(slices);
    if (int rc = check(segue_corpus_ingest(paths.data(), paths.size(), &params, &corpus.p))) return rc;
    if (int rc = check(segue_corpus_write(corpus.p, out_path.c_str(),
                                          stats_path.empty() ? nullptr : stats_path.c_str()))) {
      return rc;
    }
    std::printf("ingested %zu playlists, %zu tracks, %zu artists, %zu albums\n",
                segue_corpus_num_playlists(corpus.p), segue_corpus_num_tracks(corpus.p),
                segue_corpus_num_artists(corpus.p), segue_corpus_num_albums(corpus.p));
    return 0;
  }

  if (cmd_split->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    return check(segue_make_splits(corpus.p, &params, out_dir.c_str()));
  }

  if (cmd_index->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    segue_collection kind = collection == "qe"      ? SEGUE_COLLECTION_QE
                            : collection == "meta1" ? SEGUE_COLLECTION_META1
                                                    : SEGUE_COLLECTION_META2;
    IndexHandle index;
    if (int rc = check(segue_index_build(corpus.p,
                                         background_path.empty() ? nullptr : background_path.c_str(),
                                         kind, &params, &index.p))) {
      return rc;
    }
    if (int rc = check(segue_index_write(index.p, out_path.c_str()))) return rc;
    std::printf("indexed %zu docs, %zu terms\n", segue_index_num_docs(index.p),
                segue_index_num_terms(index.p));
    return 0;
  }

  if (cmd_emb->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    int v = variant[3] - '0';
    EmbeddingHandle emb;
    if (int rc = check(segue_embedding_train(
            corpus.p, background_path.empty() ? nullptr : background_path.c_str(), v, &params,
            &emb.p))) {
      return rc;
    }
    if (int rc = check(segue_embedding_write(emb.p, out_path.c_str()))) return rc;
    std::printf("trained %s: %zu rows x %u dims\n", variant.c_str(), segue_embedding_rows(emb.p),
                segue_embedding_dim(emb.p));
    return 0;
  }

  if (cmd_cand->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    segue_source src = source == "qe"      ? SEGUE_SOURCE_QE
                       : source == "meta1" ? SEGUE_SOURCE_META1
                       : source == "meta2" ? SEGUE_SOURCE_META2
                       : source == "emb1"  ? SEGUE_SOURCE_EMB1
                       : source == "emb2"  ? SEGUE_SOURCE_EMB2
                       : source == "emb3"  ? SEGUE_SOURCE_EMB3
                                           : SEGUE_SOURCE_EMB4;
    IndexHandle index;
    EmbeddingHandle emb;
    if (src <= SEGUE_SOURCE_META2) {
      if (index_path.empty()) {
        std::fprintf(stderr, "error: --index is required for source %s\n", source.c_str());
        return 2;
      }
      if (int rc = check(segue_index_read(index_path.c_str(), &index.p))) return rc;
    } else {
      if (embedding_path.empty()) {
        std::fprintf(stderr, "error: --embedding is required for source %s\n", source.c_str());
        return 2;
      }
      if (int rc = check(segue_embedding_read(embedding_path.c_str(), &emb.p))) return rc;
    }
    return check(segue_gen_candidates(src, input_path.c_str(), corpus.p, nullptr, index.p, emb.p,
                                      &params, out_path.c_str()));
  }

  if (cmd_feat->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    auto paths = c_paths(candidate_paths);
    return check(segue_extract_features(
        challenge_path.c_str(), truth_path.empty() ? nullptr : truth_path.c_str(), corpus.p,
        background_path.c_str(), paths.data(), paths.size(), &params, out_bin.c_str(),
        out_txt.empty() ? nullptr : out_txt.c_str()));
  }

  if (cmd_ltr->parsed()) {
    if (model_json.empty() && model_bin.empty()) {
      std::fprintf(stderr, "error: train-ltr needs --out-json and/or --out-bin\n");
      return 2;
    }
    ModelHandle model;
    if (int rc = check(segue_model_train(features_path.c_str(), &params, &model.p))) return rc;
    if (int rc = check(segue_model_write(model.p, model_json.empty() ? nullptr : model_json.c_str(),
                                         model_bin.empty() ? nullptr : model_bin.c_str()))) {
      return rc;
    }
    std::printf("trained %zu trees\n", segue_model_num_trees(model.p));
    return 0;
  }

  if (cmd_predict->parsed()) {
    ArtifactsHandle artifacts;
    if (int rc = check(segue_artifacts_open(artifacts_dir.c_str(), &artifacts.p))) return rc;
    return check(segue_predict(artifacts.p, challenge_path.c_str(), &params, team.c_str(),
                               email.c_str(), out_path.c_str()));
  }

  if (cmd_eval->parsed()) {
    CorpusHandle corpus;
    if (int rc = check(segue_corpus_read(corpus_path.c_str(), &corpus.p))) return rc;
    char* text = nullptr;
    if (int rc = check(segue_evaluate(corpus.p, pred_path.c_str(), truth_path.c_str(), &params,
                                      report_json.empty() ? nullptr : report_json.c_str(), &text))) {
      return rc;
    }
    if (text) {
      std::fputs(text, stdout);
      segue_string_free(text);
    }
    return 0;
  }

  if (cmd_pipe->parsed()) {
    auto paths = c_paths(slices);
    if (int rc = check(segue_run_pipeline(paths.data(), paths.size(), &params, workdir.c_str(),
                                          team.c_str(), email.c_str()))) {
      return rc;
    }
    std::printf("pipeline complete; see %s/report.txt\n", workdir.c_str());
    return 0;
  }

  return 0;
}
