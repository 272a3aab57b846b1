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

/* Public C API of the segue playlist-continuation engine.
 *
 * Every function returns SEGUE_OK (0) on success or a segue_status error
 * code; segue_last_error() returns a thread-local message for the most
 * recent failure on the calling thread. Objects are opaque handles created
 * and released by the matching *_free function.
 */

#ifndef SEGUE_H_
#define SEGUE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEGUE_API __declspec(dllexport)
#else
#define SEGUE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum segue_status {
  SEGUE_OK = 0,
  SEGUE_ERR_IO = 1,
  SEGUE_ERR_PARSE = 2,
  SEGUE_ERR_SCHEMA = 3,
  SEGUE_ERR_CONFIG = 4,
  SEGUE_ERR_VERSION = 5,
  SEGUE_ERR_INVALID_ARGUMENT = 6,
  SEGUE_ERR_INFEASIBLE = 7,
  SEGUE_ERR_NO_SIGNAL = 8,
  SEGUE_ERR_INTERNAL = 9
} segue_status;

typedef enum segue_collection {
  SEGUE_COLLECTION_QE = 0,    /* playlists as docs, tracks as terms */
  SEGUE_COLLECTION_META1 = 1, /* tracks described by parent playlist titles */
  SEGUE_COLLECTION_META2 = 2  /* tracks described by title + artist + album */
} segue_collection;

typedef enum segue_source {
  SEGUE_SOURCE_QE = 0,
  SEGUE_SOURCE_META1 = 1,
  SEGUE_SOURCE_META2 = 2,
  SEGUE_SOURCE_EMB1 = 3,
  SEGUE_SOURCE_EMB2 = 4,
  SEGUE_SOURCE_EMB3 = 5,
  SEGUE_SOURCE_EMB4 = 6
} segue_source;

typedef struct segue_corpus segue_corpus;
typedef struct segue_index segue_index;
typedef struct segue_embedding segue_embedding;
typedef struct segue_model segue_model;
typedef struct segue_artifacts segue_artifacts;

/* Tunables; initialize with segue_params_init and override fields. */
typedef struct segue_params {
  int deterministic;
  int threads;
  uint64_t seed;

  double background_fraction;
  uint64_t train_playlists;
  uint64_t eval_playlists;
  double category_weights[10];

  int playlist_doc_raw_tf;
  double bm25_k1;
  double bm25_b;
  double mu;
  uint32_t k_feedback;
  int strict_rm1;
  uint32_t qe_limit;
  uint32_t meta_limit;
  uint32_t emb_limit;

  uint32_t emb_dim;
  uint32_t emb_window_docs;
  uint32_t emb_window_walks;
  uint32_t emb_negatives;
  uint32_t emb_epochs;
  double emb_lr;
  uint32_t emb_min_count;
  uint32_t walks_per_start;
  uint32_t walk_cycles;

  uint32_t ltr_trees;
  uint32_t ltr_leaves;
  double ltr_lr;
  uint32_t ltr_ndcg_cutoff;

  uint32_t n_predictions;
  double artist_credit;
  uint32_t eval_cutoffs[8];
  size_t n_eval_cutoffs;
} segue_params;

SEGUE_API uint32_t segue_abi_version(void);
SEGUE_API const char* segue_status_str(segue_status status);
SEGUE_API const char* segue_last_error(void);
SEGUE_API void segue_params_init(segue_params* params);
SEGUE_API void segue_string_free(char* s);

/* corpus ------------------------------------------------------------- */

SEGUE_API segue_status segue_corpus_ingest(const char* const* slice_paths, size_t n_paths,
                                           const segue_params* params, segue_corpus** out);
SEGUE_API segue_status segue_corpus_read(const char* path, segue_corpus** out);
SEGUE_API segue_status segue_corpus_write(const segue_corpus* corpus, const char* path,
                                          const char* stats_json_path_or_null);
SEGUE_API void segue_corpus_free(segue_corpus* corpus);
SEGUE_API size_t segue_corpus_num_playlists(const segue_corpus* corpus);
SEGUE_API size_t segue_corpus_num_tracks(const segue_corpus* corpus);
SEGUE_API size_t segue_corpus_num_artists(const segue_corpus* corpus);
SEGUE_API size_t segue_corpus_num_albums(const segue_corpus* corpus);

/* splits -------------------------------------------------------------- */

/* Writes background.json plus splits/{train,eval}_{challenge,truth}.json
 * under out_dir. */
SEGUE_API segue_status segue_make_splits(const segue_corpus* corpus, const segue_params* params,
                                         const char* out_dir);

/* indexes -------------------------------------------------------------- */

SEGUE_API segue_status segue_index_build(const segue_corpus* corpus,
                                         const char* background_json_or_null,
                                         segue_collection collection, const segue_params* params,
                                         segue_index** out);
SEGUE_API segue_status segue_index_read(const char* path, segue_index** out);
SEGUE_API segue_status segue_index_write(const segue_index* index, const char* path);
SEGUE_API void segue_index_free(segue_index* index);
SEGUE_API size_t segue_index_num_docs(const segue_index* index);
SEGUE_API size_t segue_index_num_terms(const segue_index* index);

/* embeddings ----------------------------------------------------------- */

SEGUE_API segue_status segue_embedding_train(const segue_corpus* corpus,
                                             const char* background_json_or_null, int variant_1to4,
                                             const segue_params* params, segue_embedding** out);
SEGUE_API segue_status segue_embedding_read(const char* path, segue_embedding** out);
SEGUE_API segue_status segue_embedding_write(const segue_embedding* embedding, const char* path);
SEGUE_API void segue_embedding_free(segue_embedding* embedding);
SEGUE_API size_t segue_embedding_rows(const segue_embedding* embedding);
SEGUE_API uint32_t segue_embedding_dim(const segue_embedding* embedding);

/* candidates / features ------------------------------------------------- */

/* index_or_null serves QE/META sources, embedding_or_null the EMB sources. */
SEGUE_API segue_status segue_gen_candidates(segue_source source, const char* challenge_json,
                                            const segue_corpus* corpus,
                                            const char* background_json_or_null,
                                            const segue_index* index_or_null,
                                            const segue_embedding* embedding_or_null,
                                            const segue_params* params, const char* out_path);

/* candidate_paths: one file per source, any order; missing sources keep
 * their sentinel rank. truth_json_or_null provides labels. */
SEGUE_API segue_status segue_extract_features(const char* challenge_json,
                                              const char* truth_json_or_null,
                                              const segue_corpus* corpus,
                                              const char* background_json,
                                              const char* const* candidate_paths, size_t n_paths,
                                              const segue_params* params, const char* out_bin,
                                              const char* out_text_or_null);

/* model ----------------------------------------------------------------- */

SEGUE_API segue_status segue_model_train(const char* features_bin, const segue_params* params,
                                         segue_model** out);
SEGUE_API segue_status segue_model_read(const char* path, segue_model** out);
SEGUE_API segue_status segue_model_write(const segue_model* model, const char* json_path_or_null,
                                         const char* bin_path_or_null);
SEGUE_API void segue_model_free(segue_model* model);
SEGUE_API size_t segue_model_num_trees(const segue_model* model);

/* prediction / evaluation ------------------------------------------------ */

/* Loads corpus.bin, background.json, index_*.bin, emb*.bin and model.* from
 * dir (the layout segue_run_pipeline writes). */
SEGUE_API segue_status segue_artifacts_open(const char* dir, segue_artifacts** out);
SEGUE_API void segue_artifacts_free(segue_artifacts* artifacts);

SEGUE_API segue_status segue_predict(const segue_artifacts* artifacts, const char* challenge_json,
                                     const segue_params* params, const char* team,
                                     const char* email, const char* out_csv);

/* report_text_out, when non-NULL, receives a malloc'd table released with
 * segue_string_free. */
SEGUE_API segue_status segue_evaluate(const segue_corpus* corpus, const char* predictions_csv,
                                      const char* truth_json, const segue_params* params,
                                      const char* report_json_path_or_null,
                                      char** report_text_out);

/* full chain: ingest -> split -> index -> embed -> candidates -> features
 * -> train -> predict -> evaluate, everything under workdir. */
SEGUE_API segue_status segue_run_pipeline(const char* const* slice_paths, size_t n_paths,
                                          const segue_params* params, const char* workdir,
                                          const char* team, const char* email);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEGUE_H_ */
