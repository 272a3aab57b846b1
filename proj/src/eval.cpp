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

#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "io.hpp"

namespace segue {

using nlohmann::json;

namespace {

bool in_held(const std::vector<TrackId>& held_sorted, TrackId t) {
  return std::binary_search(held_sorted.begin(), held_sorted.end(), t);
}

ArtistId artist_of(const std::vector<ArtistId>& track_artist, TrackId t) {
  return t < track_artist.size() ? track_artist[t] : kInvalidId;
}

}  // namespace

double r_precision_at(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                      const std::vector<ArtistId>& track_artist, std::size_t k,
                      double artist_credit) {
  const std::size_t n = held_sorted.size();
  if (n == 0) fail(Errc::invalid_argument, "r_precision requires a non-empty held-out set");
  std::size_t depth = std::min({pred.size(), n, k});

  std::vector<char> credited(n, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    TrackId p = pred[i];
    auto it = std::lower_bound(held_sorted.begin(), held_sorted.end(), p);
    if (it != held_sorted.end() && *it == p) {
      std::size_t idx = static_cast<std::size_t>(it - held_sorted.begin());
      if (!credited[idx]) {
        credited[idx] = 1;
        total += 1.0;
        continue;
      }
    }
    // artist partial credit against the first uncredited held track by the
    // same artist
    ArtistId pa = artist_of(track_artist, p);
    if (pa == kInvalidId) continue;
    for (std::size_t h = 0; h < n; ++h) {
      if (credited[h]) continue;
      if (artist_of(track_artist, held_sorted[h]) == pa) {
        credited[h] = 1;
        total += artist_credit;
        break;
      }
    }
  }
  return total / static_cast<double>(n);
}

double r_precision(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                   const std::vector<ArtistId>& track_artist, double artist_credit) {
  return r_precision_at(pred, held_sorted, track_artist, pred.size(), artist_credit);
}

double ndcg(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
            std::size_t cutoff) {
  if (cutoff < 1) fail(Errc::invalid_argument, "ndcg cutoff must be >= 1");
  if (held_sorted.empty()) fail(Errc::invalid_argument, "ndcg requires a non-empty held-out set");
  double dcg = 0.0;
  std::size_t depth = std::min(pred.size(), cutoff);
  for (std::size_t i = 0; i < depth; ++i) {
    if (in_held(held_sorted, pred[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  std::size_t ideal = std::min(held_sorted.size(), cutoff);
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

int clicks(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted) {
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (in_held(held_sorted, pred[i])) {
      return static_cast<int>(std::min<std::size_t>(i / 10, 51));
    }
  }
  return 51;
}

double recall_at(const std::vector<TrackId>& pred, const std::vector<TrackId>& held_sorted,
                 std::size_t k) {
  if (k < 1) fail(Errc::invalid_argument, "recall cutoff must be >= 1");
  if (held_sorted.empty()) fail(Errc::invalid_argument, "recall requires a non-empty held-out set");
  std::size_t depth = std::min(pred.size(), k);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (in_held(held_sorted, pred[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(held_sorted.size());
}

std::map<std::string, double> borda_aggregate(
    const std::vector<std::vector<std::string>>& metric_rankings,
    const std::function<double(std::size_t)>& points) {
  if (metric_rankings.empty()) fail(Errc::invalid_argument, "borda_aggregate needs >= 1 metric");
  std::vector<std::string> teams = metric_rankings.front();
  std::vector<std::string> sorted_teams = teams;
  std::sort(sorted_teams.begin(), sorted_teams.end());
  for (const auto& ranking : metric_rankings) {
    std::vector<std::string> s = ranking;
    std::sort(s.begin(), s.end());
    if (s != sorted_teams) {
      fail(Errc::invalid_argument, "borda_aggregate: metric rankings cover different team sets");
    }
  }
  const std::size_t n = teams.size();
  auto pts = points ? points : [n](std::size_t rank) { return static_cast<double>(n - rank); };

  std::map<std::string, double> scores;
  for (const auto& ranking : metric_rankings) {
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      scores[ranking[r]] += pts(r + 1);
    }
  }
  return scores;
}

std::string MetricReport::to_json() const {
  json j;
  j["playlists"] = playlists;
  j["clicks@500"] = clicks;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    std::string k = std::to_string(cutoffs[i]);
    j["recall@" + k] = recall[i];
    j["r_precision@" + k] = rprec[i];
    j["ndcg@" + k] = ndcg[i];
  }
  return j.dump(2) + "\n";
}

std::string MetricReport::to_table() const {
  std::ostringstream os;
  char buf[64];
  os << "metric";
  for (auto k : cutoffs) os << "\t@" << k;
  os << '\n';
  auto row = [&](const char* name, const std::vector<double>& vals) {
    os << name;
    for (double v : vals) {
      std::snprintf(buf, sizeof buf, "\t%.4f", v);
      os << buf;
    }
    os << '\n';
  };
  row("recall", recall);
  row("rprec", rprec);
  row("ndcg", ndcg);
  std::snprintf(buf, sizeof buf, "%.3f", clicks);
  os << "clicks@500\t" << buf << '\n';
  os << "playlists\t" << playlists << '\n';
  return os.str();
}

MetricReport evaluate_run(const std::vector<std::pair<Pid, std::vector<std::string>>>& predictions,
                          const std::unordered_map<Pid, std::vector<std::string>>& truth,
                          const Corpus& corpus, const Params& params) {
  std::unordered_map<Pid, const std::vector<std::string>*> pred_by_pid;
  for (const auto& [pid, uris] : predictions) pred_by_pid[pid] = &uris;

  std::vector<Pid> missing;
  for (const auto& [pid, _] : truth) {
    if (!pred_by_pid.count(pid)) missing.push_back(pid);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      if (i) list += ", ";
      list += std::to_string(missing[i]);
    }
    if (missing.size() > 20) list += ", ...";
    fail(Errc::invalid_argument, "predictions missing pids: " + list);
  }

  // Local interning over truth + prediction URIs; artists come from the
  // corpus, unknown URIs get none (no artist credit possible).
  std::unordered_map<std::string, TrackId> local;
  std::vector<ArtistId> local_artist;
  auto local_id = [&](const std::string& uri) {
    auto [it, inserted] = local.emplace(uri, static_cast<TrackId>(local.size()));
    if (inserted) {
      auto known = corpus.find_track(uri);
      local_artist.push_back(known ? corpus.track_meta(*known).artist : kInvalidId);
    }
    return it->second;
  };

  MetricReport report;
  report.cutoffs = params.eval_cutoffs;
  report.recall.assign(report.cutoffs.size(), 0.0);
  report.rprec.assign(report.cutoffs.size(), 0.0);
  report.ndcg.assign(report.cutoffs.size(), 0.0);

  std::vector<Pid> pids;
  pids.reserve(truth.size());
  for (const auto& [pid, _] : truth) pids.push_back(pid);
  std::sort(pids.begin(), pids.end());

  for (Pid pid : pids) {
    const auto& held_uris = truth.at(pid);
    if (held_uris.empty()) {
      fail(Errc::invalid_argument, "truth for pid " + std::to_string(pid) + " is empty");
    }
    std::vector<TrackId> held;
    held.reserve(held_uris.size());
    for (const auto& uri : held_uris) held.push_back(local_id(uri));
    std::sort(held.begin(), held.end());
    held.erase(std::unique(held.begin(), held.end()), held.end());

    std::vector<TrackId> pred;
    for (const auto& uri : *pred_by_pid.at(pid)) pred.push_back(local_id(uri));

    for (std::size_t c = 0; c < report.cutoffs.size(); ++c) {
      std::size_t k = report.cutoffs[c];
      report.recall[c] += recall_at(pred, held, k);
      report.rprec[c] += r_precision_at(pred, held, local_artist, k, params.artist_credit);
      report.ndcg[c] += ndcg(pred, held, k);
    }
    std::vector<TrackId> pred500(pred.begin(),
                                 pred.begin() + std::min<std::size_t>(pred.size(), 500));
    report.clicks += clicks(pred500, held);
  }

  report.playlists = pids.size();
  if (!pids.empty()) {
    double inv = 1.0 / static_cast<double>(pids.size());
    for (auto& v : report.recall) v *= inv;
    for (auto& v : report.rprec) v *= inv;
    for (auto& v : report.ndcg) v *= inv;
    report.clicks *= inv;
  }
  return report;
}

void write_submission_csv(const std::string& path, const std::string& team,
                          const std::string& email,
                          const std::vector<std::pair<Pid, std::vector<std::string>>>& rows) {
  std::string out = "team_info," + team + "," + email + "\n";
  for (const auto& [pid, uris] : rows) {
    out += std::to_string(pid);
    for (const auto& uri : uris) {
      out += ',';
      out += uri;
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<std::pair<Pid, std::vector<std::string>>> read_submission_csv(const std::string& path) {
  std::string content = read_file(path);
  std::vector<std::pair<Pid, std::vector<std::string>>> rows;
  std::size_t pos = 0;
  bool first = true;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (first && line.substr(0, 10) == "team_info,") {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) comma = line.size();
      fields.emplace_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.empty()) continue;
    Pid pid;
    try {
      pid = std::stoll(fields[0]);
    } catch (...) {
      fail(Errc::parse, path + ": bad pid '" + fields[0] + "'");
    }
    rows.push_back({pid, std::vector<std::string>(fields.begin() + 1, fields.end())});
  }
  return rows;
}

}  // namespace segue
