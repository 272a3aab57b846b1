// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations, written naively and kept
// independent of the library code they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Id = std::uint32_t;

inline double ref_recall(const std::vector<Id>& pred, const std::set<Id>& held, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size() && i < k; ++i) {
    if (held.count(pred[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(held.size());
}

inline double ref_ndcg(const std::vector<Id>& pred, const std::set<Id>& held, std::size_t cutoff) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < pred.size() && i < cutoff; ++i) {
    if (held.count(pred[i])) dcg += 1.0 / (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
  }
  double idcg = 0.0;
  for (std::size_t i = 0; i < held.size() && i < cutoff; ++i) {
    idcg += 1.0 / (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
  }
  return dcg / idcg;
}

inline int ref_clicks(const std::vector<Id>& pred, const std::set<Id>& held) {
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (held.count(pred[i])) {
      std::size_t c = i / 10;
      return static_cast<int>(c > 51 ? 51 : c);
    }
  }
  return 51;
}

// Greedy-in-rank-order crediting: exact hit = 1, else artist match against
// any uncredited held track = `credit`; every held track creditable once.
template <typename ArtistOf>
double ref_rprec(const std::vector<Id>& pred, const std::vector<Id>& held, ArtistOf artist_of,
                 std::size_t k, double credit) {
  std::vector<Id> remaining = held;
  std::size_t depth = std::min({pred.size(), held.size(), k});
  double total = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    Id p = pred[i];
    auto exact = std::find(remaining.begin(), remaining.end(), p);
    if (exact != remaining.end()) {
      total += 1.0;
      remaining.erase(exact);
      continue;
    }
    auto a = artist_of(p);
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      if (artist_of(*it) == a && a != 0xFFFFFFFFu) {
        total += credit;
        remaining.erase(it);
        break;
      }
    }
  }
  return total / static_cast<double>(held.size());
}

// RM1 over playlists treated as unique-track sets: the expansion factor is
// the in-playlist membership ratio and the seed weight the unsmoothed
// product of the same ratios. Output normalized over non-seed tracks.
inline std::map<Id, double> ref_rm1_strict(const std::vector<std::vector<Id>>& playlists,
                                           const std::vector<Id>& seeds) {
  std::map<Id, double> acc;
  for (const auto& raw : playlists) {
    std::set<Id> uniq(raw.begin(), raw.end());
    double ratio = 1.0 / static_cast<double>(uniq.size());
    double w = 1.0;
    for (Id s : seeds) w *= uniq.count(s) ? ratio : 0.0;
    if (w == 0.0) continue;
    for (Id t : uniq) acc[t] += w * ratio;
  }
  for (Id s : seeds) acc.erase(s);
  double sum = 0.0;
  for (auto& [t, v] : acc) sum += v;
  if (sum > 0.0) {
    for (auto& [t, v] : acc) v /= sum;
  }
  return acc;
}

// BM25 of one document against a bag-of-terms query, straight from the
// formula.
inline double ref_bm25_doc(const std::map<Id, std::uint32_t>& doc_tf, std::uint32_t doc_len,
                           const std::vector<Id>& query, double n_docs,
                           const std::map<Id, std::size_t>& df, double avgdl, double k1, double b) {
  double score = 0.0;
  for (Id q : query) {
    auto dit = doc_tf.find(q);
    if (dit == doc_tf.end()) continue;
    auto fit = df.find(q);
    double d = fit == df.end() ? 0.0 : static_cast<double>(fit->second);
    if (d == 0.0) continue;
    double idf = std::log(1.0 + (n_docs - d + 0.5) / (d + 0.5));
    double tf = dit->second;
    score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * doc_len / avgdl));
  }
  return score;
}

}  // namespace oracle
