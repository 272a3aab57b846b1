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

// Gradient-boosted regression trees driven by NDCG lambda gradients
// (LambdaMART): per query group, every label-discordant pair contributes
// +-rho * |delta NDCG@K| to the lambdas and rho(1-rho) * |delta NDCG@K| to
// the Newton weights (sigma = 1); a variance-reduction tree is fit to the
// lambdas and its leaves take sum(lambda)/sum(w).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "features.hpp"

namespace segue {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double eval(const double* x) const;
  std::size_t leaf_count() const;
};

struct LtrModel {
  std::vector<RegressionTree> trees;
  double shrinkage = 0.1;
  std::uint32_t feature_count = kFeatureCount;
  std::uint32_t ndcg_cutoff = 10;

  double score(const double* x) const { return score_prefix(x, trees.size()); }
  double score_prefix(const double* x, std::size_t n_trees) const;

  std::string serialize_json() const;
  static LtrModel from_json(std::string_view text, const std::string& origin);
  std::string serialize_bin() const;
  static LtrModel deserialize_bin(std::string_view bytes, const std::string& origin);
  // Path ending in .json reads/writes the auditable form, anything else the
  // binary twin.
  void save(const std::string& path) const;
  static LtrModel load(const std::string& path);
};

struct LtrConfig {
  std::uint32_t trees = 100;
  std::uint32_t leaves = 50;
  double lr = 0.1;
  std::uint32_t ndcg_cutoff = 10;
  std::uint64_t seed = 42;
  int threads = 1;
};

/// Trains on consecutive-pid groups. Groups without both a positive and a
/// negative label are skipped; at least one usable group is required.
LtrModel train_lambdamart(const std::vector<RankingExample>& examples, const LtrConfig& config);

double ltr_score(const LtrModel& model, const FeatureVec& x);

/// Tracks of one group ordered by model score (desc, id tiebreak).
std::vector<TrackId> rank_group(const LtrModel& model, const std::vector<RankingExample>& group);

// NDCG over labels listed in ranked order: gains 2^rel - 1, discount
// 1/log2(rank+1), truncated at k. Zero when there is no relevant item.
double ranked_ndcg(const std::vector<int>& labels_in_rank_order, std::size_t k);

// |NDCG@k change| for swapping 1-based ranked positions pos_a and pos_b
// holding everything else fixed.
double ndcg_swap_delta(double gain_a, double gain_b, std::size_t pos_a, std::size_t pos_b,
                       std::size_t k, double idcg);

}  // namespace segue
