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

#include "ltr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "io.hpp"

namespace segue {

using nlohmann::json;

namespace {

constexpr char kModelMagic[9] = "SEGLTRM1";
constexpr std::uint32_t kModelVersion = 1;
constexpr std::size_t kMaxBins = 256;

double gain_of(int label) { return std::exp2(static_cast<double>(label)) - 1.0; }

double discount(std::size_t rank_1based, std::size_t k) {
  if (rank_1based > k) return 0.0;
  return 1.0 / std::log2(static_cast<double>(rank_1based) + 1.0);
}

struct Group {
  std::size_t begin, end;  // [begin, end) into the example array
  bool usable = false;     // has at least one positive and one negative
};

// Quantile-ish binning over distinct values; at most kMaxBins-1 cuts.
struct FeatureBins {
  std::vector<std::vector<double>> cuts;       // per feature, ascending
  std::vector<std::uint8_t> codes;             // n x F
  std::size_t n = 0;

  void build(const std::vector<RankingExample>& rows) {
    n = rows.size();
    cuts.resize(kFeatureCount);
    codes.resize(n * kFeatureCount);
    std::vector<double> values(n);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      for (std::size_t i = 0; i < n; ++i) values[i] = rows[i].features[f];
      std::vector<double> distinct = values;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      auto& c = cuts[f];
      if (distinct.size() > 1) {
        if (distinct.size() <= kMaxBins) {
          c.reserve(distinct.size() - 1);
          for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
            c.push_back(0.5 * (distinct[i] + distinct[i + 1]));
          }
        } else {
          c.reserve(kMaxBins - 1);
          for (std::size_t j = 1; j < kMaxBins; ++j) {
            std::size_t idx = j * distinct.size() / kMaxBins;
            c.push_back(0.5 * (distinct[idx - 1] + distinct[idx]));
          }
          c.erase(std::unique(c.begin(), c.end()), c.end());
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto it = std::upper_bound(c.begin(), c.end(), values[i]);
        codes[i * kFeatureCount + f] = static_cast<std::uint8_t>(it - c.begin());
      }
    }
  }

  std::uint8_t code(std::size_t row, std::size_t f) const { return codes[row * kFeatureCount + f]; }
};

struct SplitChoice {
  double gain = 0.0;
  std::int32_t feature = -1;
  std::size_t cut_bin = 0;
};

struct BuildNode {
  std::vector<std::uint32_t> rows;
  std::int32_t node_index = -1;
  SplitChoice best;
};

SplitChoice find_best_split(const FeatureBins& bins, const std::vector<std::uint32_t>& rows,
                            const std::vector<double>& lambdas) {
  SplitChoice best;
  if (rows.size() < 2) return best;
  double total_sum = 0.0;
  for (std::uint32_t r : rows) total_sum += lambdas[r];
  const double parent = total_sum * total_sum / static_cast<double>(rows.size());

  std::vector<double> bin_sum(kMaxBins);
  std::vector<std::uint32_t> bin_count(kMaxBins);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& cuts = bins.cuts[f];
    if (cuts.empty()) continue;
    std::size_t n_bins = cuts.size() + 1;
    std::fill(bin_sum.begin(), bin_sum.begin() + n_bins, 0.0);
    std::fill(bin_count.begin(), bin_count.begin() + n_bins, 0u);
    for (std::uint32_t r : rows) {
      std::uint8_t b = bins.code(r, f);
      bin_sum[b] += lambdas[r];
      ++bin_count[b];
    }
    double left_sum = 0.0;
    std::uint32_t left_count = 0;
    for (std::size_t b = 0; b + 1 < n_bins; ++b) {
      left_sum += bin_sum[b];
      left_count += bin_count[b];
      if (left_count == 0) continue;
      std::uint32_t right_count = static_cast<std::uint32_t>(rows.size()) - left_count;
      if (right_count == 0) break;
      double right_sum = total_sum - left_sum;
      double gain = left_sum * left_sum / left_count + right_sum * right_sum / right_count - parent;
      if (gain > best.gain + 1e-12) {
        best.gain = gain;
        best.feature = static_cast<std::int32_t>(f);
        best.cut_bin = b;
      }
    }
  }
  return best;
}

}  // namespace

double RegressionTree::eval(const double* x) const {
  std::int32_t at = 0;
  while (nodes[at].feature >= 0) {
    const TreeNode& nd = nodes[at];
    at = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes[at].value;
}

std::size_t RegressionTree::leaf_count() const {
  std::size_t c = 0;
  for (const auto& nd : nodes) {
    if (nd.feature < 0) ++c;
  }
  return c;
}

double LtrModel::score_prefix(const double* x, std::size_t n_trees) const {
  double s = 0.0;
  n_trees = std::min(n_trees, trees.size());
  for (std::size_t t = 0; t < n_trees; ++t) s += shrinkage * trees[t].eval(x);
  return s;
}

double ranked_ndcg(const std::vector<int>& labels_in_rank_order, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < labels_in_rank_order.size(); ++i) {
    dcg += gain_of(labels_in_rank_order[i]) * discount(i + 1, k);
  }
  std::vector<int> ideal = labels_in_rank_order;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i) idcg += gain_of(ideal[i]) * discount(i + 1, k);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double ndcg_swap_delta(double gain_a, double gain_b, std::size_t pos_a, std::size_t pos_b,
                       std::size_t k, double idcg) {
  if (idcg <= 0.0) return 0.0;
  return std::abs((gain_a - gain_b) * (discount(pos_a, k) - discount(pos_b, k))) / idcg;
}

LtrModel train_lambdamart(const std::vector<RankingExample>& examples, const LtrConfig& config) {
  if (examples.empty()) fail(Errc::invalid_argument, "no training examples");
  if (config.leaves < 2) fail(Errc::config, "ltr_leaves must be >= 2");
  for (const auto& ex : examples) {
    for (double v : ex.features) {
      if (!std::isfinite(v)) {
        fail(Errc::invalid_argument, "non-finite feature for pid " + std::to_string(ex.pid) +
                                         " track " + std::to_string(ex.track));
      }
    }
  }

  // consecutive-pid groups
  std::vector<Group> groups;
  for (std::size_t i = 0; i < examples.size();) {
    std::size_t j = i;
    bool pos = false, neg = false;
    while (j < examples.size() && examples[j].pid == examples[i].pid) {
      if (examples[j].label > 0) pos = true;
      if (examples[j].label == 0) neg = true;
      ++j;
    }
    groups.push_back({i, j, pos && neg});
    i = j;
  }
  std::size_t usable = 0;
  for (const auto& g : groups) usable += g.usable ? 1 : 0;
  if (usable == 0) {
    fail(Errc::invalid_argument, "no group has both a positive and a negative label");
  }

  const std::size_t n = examples.size();
  FeatureBins bins;
  bins.build(examples);

  // rows participating in tree fitting: members of usable groups only
  std::vector<std::uint32_t> active_rows;
  for (const auto& g : groups) {
    if (!g.usable) continue;
    for (std::size_t i = g.begin; i < g.end; ++i) active_rows.push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<double> scores(n, 0.0);
  std::vector<double> lambdas(n), weights(n);
  const std::size_t K = config.ndcg_cutoff;

  LtrModel model;
  model.shrinkage = config.lr;
  model.ndcg_cutoff = config.ndcg_cutoff;

  std::vector<std::size_t> usable_groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].usable) usable_groups.push_back(g);
  }

  for (std::uint32_t t = 0; t < config.trees; ++t) {
    std::fill(lambdas.begin(), lambdas.end(), 0.0);
    std::fill(weights.begin(), weights.end(), 0.0);

    parallel_chunks(usable_groups.size(), config.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> order;
      std::vector<std::uint32_t> pos_of;
      for (std::size_t gi = lo; gi < hi; ++gi) {
        const Group& g = groups[usable_groups[gi]];
        std::size_t sz = g.end - g.begin;
        order.resize(sz);
        std::iota(order.begin(), order.end(), static_cast<std::uint32_t>(g.begin));
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
          if (scores[a] != scores[b]) return scores[a] > scores[b];
          return a < b;
        });
        pos_of.resize(sz);
        for (std::size_t r = 0; r < sz; ++r) pos_of[order[r] - g.begin] = static_cast<std::uint32_t>(r + 1);

        double idcg = 0.0;
        {
          std::size_t rel = 0;
          for (std::size_t i = g.begin; i < g.end; ++i) rel += examples[i].label > 0 ? 1 : 0;
          std::size_t top = std::min(rel, std::min(K, sz));
          for (std::size_t r = 1; r <= top; ++r) idcg += gain_of(1) * discount(r, K);
        }
        if (idcg <= 0.0) continue;

        for (std::size_t a = g.begin; a < g.end; ++a) {
          if (examples[a].label <= 0) continue;
          for (std::size_t b = g.begin; b < g.end; ++b) {
            if (examples[b].label != 0) continue;
            double delta = ndcg_swap_delta(gain_of(examples[a].label), gain_of(examples[b].label),
                                           pos_of[a - g.begin], pos_of[b - g.begin], K, idcg);
            if (delta == 0.0) continue;
            double rho = 1.0 / (1.0 + std::exp(scores[a] - scores[b]));
            lambdas[a] += rho * delta;
            lambdas[b] -= rho * delta;
            double w = rho * (1.0 - rho) * delta;
            weights[a] += w;
            weights[b] += w;
          }
        }
      }
    });

    // fit a variance-reduction tree to the lambdas, best-first, <= leaves
    RegressionTree tree;
    tree.nodes.push_back(TreeNode{});
    std::vector<BuildNode> pending;
    {
      BuildNode root;
      root.rows = active_rows;
      root.node_index = 0;
      root.best = find_best_split(bins, root.rows, lambdas);
      pending.push_back(std::move(root));
    }
    std::vector<std::pair<std::int32_t, std::vector<std::uint32_t>>> leaves;
    std::size_t leaf_budget = config.leaves;

    while (!pending.empty()) {
      std::size_t leaves_now = pending.size() + leaves.size();
      // pick the splittable node with the best gain
      std::size_t best_i = pending.size();
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (pending[i].best.feature < 0) continue;
        if (best_i == pending.size() || pending[i].best.gain > pending[best_i].best.gain) best_i = i;
      }
      if (best_i == pending.size() || leaves_now >= leaf_budget) {
        for (auto& nd : pending) leaves.push_back({nd.node_index, std::move(nd.rows)});
        pending.clear();
        break;
      }

      BuildNode nd = std::move(pending[best_i]);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_i));

      auto& parent = tree.nodes[nd.node_index];
      parent.feature = nd.best.feature;
      parent.threshold = bins.cuts[nd.best.feature][nd.best.cut_bin];
      parent.left = static_cast<std::int32_t>(tree.nodes.size());
      parent.right = parent.left + 1;
      tree.nodes.push_back(TreeNode{});
      tree.nodes.push_back(TreeNode{});

      BuildNode left, right;
      left.node_index = parent.left;
      right.node_index = parent.right;
      for (std::uint32_t r : nd.rows) {
        if (bins.code(r, static_cast<std::size_t>(nd.best.feature)) <= nd.best.cut_bin) {
          left.rows.push_back(r);
        } else {
          right.rows.push_back(r);
        }
      }
      left.best = find_best_split(bins, left.rows, lambdas);
      right.best = find_best_split(bins, right.rows, lambdas);
      pending.push_back(std::move(left));
      pending.push_back(std::move(right));
    }

    // Newton leaf values and the boosting update
    for (auto& [node_index, rows] : leaves) {
      double sl = 0.0, sw = 0.0;
      for (std::uint32_t r : rows) {
        sl += lambdas[r];
        sw += weights[r];
      }
      double value = sw > 0.0 ? sl / sw : 0.0;
      tree.nodes[node_index].value = value;
      for (std::uint32_t r : rows) scores[r] += config.lr * value;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double ltr_score(const LtrModel& model, const FeatureVec& x) { return model.score(x.data()); }

std::vector<TrackId> rank_group(const LtrModel& model, const std::vector<RankingExample>& group) {
  std::vector<std::pair<double, TrackId>> scored;
  scored.reserve(group.size());
  for (const auto& ex : group) scored.push_back({model.score(ex.features.data()), ex.track});
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<TrackId> out;
  out.reserve(scored.size());
  for (const auto& [s, t] : scored) out.push_back(t);
  return out;
}

std::string LtrModel::serialize_json() const {
  json root;
  root["format"] = "segue-ltr";
  root["version"] = 1;
  root["feature_count"] = feature_count;
  root["shrinkage"] = shrinkage;
  root["ndcg_cutoff"] = ndcg_cutoff;
  json jtrees = json::array();
  for (const auto& tree : trees) {
    json jnodes = json::array();
    for (const auto& nd : tree.nodes) {
      if (nd.feature < 0) {
        jnodes.push_back(json{{"v", nd.value}});
      } else {
        jnodes.push_back(json{{"f", nd.feature}, {"t", nd.threshold}, {"l", nd.left}, {"r", nd.right}});
      }
    }
    jtrees.push_back(std::move(jnodes));
  }
  root["trees"] = std::move(jtrees);
  return root.dump(1) + "\n";
}

LtrModel LtrModel::from_json(std::string_view text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, origin + ": JSON parse error at byte " + std::to_string(e.byte));
  }
  if (root.value("format", "") != "segue-ltr" || root.value("version", 0) != 1) {
    fail(Errc::version, origin + ": not a segue-ltr v1 model file");
  }
  LtrModel m;
  m.feature_count = root.value("feature_count", kFeatureCount);
  m.shrinkage = root.value("shrinkage", 0.1);
  m.ndcg_cutoff = root.value("ndcg_cutoff", 10u);
  for (const auto& jtree : root.at("trees")) {
    RegressionTree tree;
    for (const auto& jn : jtree) {
      TreeNode nd;
      if (jn.contains("v")) {
        nd.value = jn["v"].get<double>();
      } else {
        nd.feature = jn.at("f").get<std::int32_t>();
        nd.threshold = jn.at("t").get<double>();
        nd.left = jn.at("l").get<std::int32_t>();
        nd.right = jn.at("r").get<std::int32_t>();
      }
      tree.nodes.push_back(nd);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

std::string LtrModel::serialize_bin() const {
  ByteWriter w;
  w.magic(kModelMagic);
  w.u32(kModelVersion);
  w.f64(shrinkage);
  w.u32(feature_count);
  w.u32(ndcg_cutoff);
  w.u32(static_cast<std::uint32_t>(trees.size()));
  for (const auto& tree : trees) {
    w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& nd : tree.nodes) {
      if (nd.feature < 0) {
        w.u8(1);
        w.f64(nd.value);
      } else {
        w.u8(0);
        w.u32(static_cast<std::uint32_t>(nd.feature));
        w.f64(nd.threshold);
        w.u32(static_cast<std::uint32_t>(nd.left));
        w.u32(static_cast<std::uint32_t>(nd.right));
      }
    }
  }
  return w.take();
}

LtrModel LtrModel::deserialize_bin(std::string_view bytes, const std::string& origin) {
  ByteReader r(bytes, origin);
  r.magic(kModelMagic, kModelVersion);
  LtrModel m;
  m.shrinkage = r.f64();
  m.feature_count = r.u32();
  m.ndcg_cutoff = r.u32();
  std::uint32_t n_trees = r.u32();
  m.trees.reserve(n_trees);
  for (std::uint32_t t = 0; t < n_trees; ++t) {
    RegressionTree tree;
    std::uint32_t n_nodes = r.u32();
    tree.nodes.reserve(n_nodes);
    for (std::uint32_t i = 0; i < n_nodes; ++i) {
      TreeNode nd;
      if (r.u8() != 0) {
        nd.value = r.f64();
      } else {
        nd.feature = static_cast<std::int32_t>(r.u32());
        nd.threshold = r.f64();
        nd.left = static_cast<std::int32_t>(r.u32());
        nd.right = static_cast<std::int32_t>(r.u32());
      }
      tree.nodes.push_back(nd);
    }
    m.trees.push_back(std::move(tree));
  }
  if (!r.at_end()) fail(Errc::parse, origin + ": trailing bytes after model payload");
  return m;
}

void LtrModel::save(const std::string& path) const {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    write_file(path, serialize_json());
  } else {
    write_file(path, serialize_bin());
  }
}

LtrModel LtrModel::load(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return from_json(read_file(path), path);
  }
  return deserialize_bin(read_file(path), path);
}

}  // namespace segue
