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

#include <array>
#include <cstdint>
#include <vector>

namespace segue {

// Every tunable in one place. Defaults follow the published configuration
// where one is stated and this project's documented choices otherwise.
struct Params {
  bool deterministic = true;
  int threads = 1;  // 1 forces the deterministic path everywhere
  std::uint64_t seed = 42;

  // splits
  double background_fraction = 0.75;
  std::uint64_t train_playlists = 50000;
  std::uint64_t eval_playlists = 5000;
  std::array<double, 10> category_weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

  // retrieval
  bool playlist_doc_raw_tf = false;  // keep duplicate tracks as raw tf in playlist docs
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  double mu = 2500.0;          // Dirichlet smoothing for playlist retrieval / seed weights
  std::uint32_t k_feedback = 100;
  bool strict_rm1 = false;     // fully unsmoothed seed-likelihood product
  std::uint32_t qe_limit = 1000;
  std::uint32_t meta_limit = 500;
  std::uint32_t emb_limit = 250;

  // embeddings
  std::uint32_t emb_dim = 200;
  std::uint32_t emb_window_docs = 20;   // EMB1 / EMB2
  std::uint32_t emb_window_walks = 5;   // EMB3 / EMB4
  std::uint32_t emb_negatives = 5;
  std::uint32_t emb_epochs = 5;
  double emb_lr = 0.025;
  std::uint32_t emb_min_count = 1;
  std::uint32_t walks_per_start = 10;
  std::uint32_t walk_cycles = 20;

  // learning to rank
  std::uint32_t ltr_trees = 100;
  std::uint32_t ltr_leaves = 50;
  double ltr_lr = 0.1;
  std::uint32_t ltr_ndcg_cutoff = 10;  // 500 for the creative-track objective

  // prediction / evaluation
  std::uint32_t n_predictions = 500;
  double artist_credit = 0.5;
  std::vector<std::uint32_t> eval_cutoffs{10, 250, 500, 1000};
};

}  // namespace segue
