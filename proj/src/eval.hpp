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

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "corpus.hpp"
#include "params.hpp"

namespace segue {

/// R-precision over the top |held| predictions: an exact hit scores 1; a miss
/// whose artist matches a not-yet-credited held track scores `artist_credit`
/// (each held track creditable once, greedy in rank order).
double r_precision(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                   const std::vector<ArtistId>& track_artist, double artist_credit = 0.5);

/// Same, with the prediction list truncated to its first k entries.
double r_precision_at(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                      const std::vector<ArtistId>& track_artist, std::size_t k,
                      double artist_credit = 0.5);

/// Binary-gain NDCG with 1/log2(rank+1) discounts, both sums truncated at
/// `cutoff`.
double ndcg(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
            std::size_t cutoff);

/// min(floor((r - 1) / 10), 51) where r is the best rank of a relevant
/// track; 51 when nothing relevant appears.
int clicks(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted);

double recall_at(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                 std::size_t k);

/// Borda aggregation: per-metric rankings (best first) over the same team
/// set; score(team) = sum of points(rank). Default points: teams - rank.
std::map<std::string, double> borda_aggregate(
    const std::vector<std::vector<std::string>>& metric_rankings,
    const std::function<double(std::size_t)>& points = nullptr);

struct MetricReport {
  std::vector<std::uint32_t> cutoffs;
  std::vector<double> recall;  // parallel to cutoffs
  std::vector<double> rprec;
  std::vector<double> ndcg;
  double clicks = 0.0;  // at 500
  std::size_t playlists = 0;

  std::string to_json() const;
  std::string to_table() const;
};

/// Per-playlist metrics averaged arithmetically. `predictions` are URI rows;
/// every truth pid must be present.
MetricReport evaluate_run(const std::vector<std::pair<Pid, std::vector<std::string>>>& predictions,
                          const std::unordered_map<Pid, std::vector<std::string>>& truth,
                          const Corpus& corpus, const Params& params);

// Submission CSV: `team_info,<team>,<email>` then `pid,uri_1,...,uri_n` rows.
void write_submission_csv(const std::string& path, const std::string& team,
                          const std::string& email,
                          const std::vector<std::pair<Pid, std::vector<std::string>>>& rows);
std::vector<std::pair<Pid, std::vector<std::string>>> read_submission_csv(const std::string& path);

}  // namespace segue
