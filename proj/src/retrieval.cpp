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

#include "retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "io.hpp"
#include "tokenize.hpp"

namespace segue {

namespace {

constexpr char kCandMagic[9] = "SEGCAND1";
constexpr std::uint32_t kCandVersion = 1;

void sort_and_truncate(std::vector<ScoredDoc>& scored, std::size_t top_k) {
  auto cmp = [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc < b.doc;
  };
  if (scored.size() > top_k) {
    std::partial_sort(scored.begin(), scored.begin() + top_k, scored.end(), cmp);
    scored.resize(top_k);
  } else {
    std::sort(scored.begin(), scored.end(), cmp);
  }
}

void sort_and_truncate(std::vector<Candidate>& scored, std::size_t limit) {
  auto cmp = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.track < b.track;
  };
  if (scored.size() > limit) {
    std::partial_sort(scored.begin(), scored.begin() + limit, scored.end(), cmp);
    scored.resize(limit);
  } else {
    std::sort(scored.begin(), scored.end(), cmp);
  }
}

}  // namespace

const char* source_name(Source s) {
  switch (s) {
    case Source::QE: return "qe";
    case Source::META1: return "meta1";
    case Source::META2: return "meta2";
    case Source::EMB1: return "emb1";
    case Source::EMB2: return "emb2";
    case Source::EMB3: return "emb3";
    case Source::EMB4: return "emb4";
  }
  return "?";
}

std::vector<ScoredDoc> bm25_rank(const std::vector<std::uint32_t>& query_terms,
                                 const InvertedIndex& index, const Bm25Params& params,
                                 std::size_t top_k) {
  if (top_k == 0) fail(Errc::invalid_argument, "bm25_rank: top_k must be >= 1");
  std::vector<double> acc(index.num_docs, 0.0);
  std::vector<std::uint32_t> touched;
  const double n_docs = static_cast<double>(index.num_docs);

  for (std::uint32_t term : query_terms) {
    std::size_t df = index.df(term);
    if (df == 0) continue;
    double idf = std::log(1.0 + (n_docs - static_cast<double>(df) + 0.5) /
                                    (static_cast<double>(df) + 0.5));
    for (const Posting& p : index.postings[term]) {
      double tf = p.tf;
      double norm = params.k1 * (1.0 - params.b + params.b * index.doc_len[p.doc] / index.avgdl);
      double contrib = idf * tf * (params.k1 + 1.0) / (tf + norm);
      if (acc[p.doc] == 0.0) touched.push_back(p.doc);
      acc[p.doc] += contrib;
    }
  }

  std::vector<ScoredDoc> scored;
  scored.reserve(touched.size());
  for (std::uint32_t d : touched) {
    if (acc[d] != 0.0) scored.push_back({d, acc[d]});
  }
  sort_and_truncate(scored, top_k);
  return scored;
}

std::vector<ScoredDoc> ql_rank(const std::vector<std::uint32_t>& query_terms,
                               const InvertedIndex& index, double mu, std::size_t top_k) {
  if (top_k == 0) fail(Errc::invalid_argument, "ql_rank: top_k must be >= 1");

  // multiplicities of known terms
  std::vector<std::pair<std::uint32_t, std::uint32_t>> q;  // (term, qtf)
  {
    std::vector<std::uint32_t> known;
    for (std::uint32_t t : query_terms) {
      if (index.df(t) > 0) known.push_back(t);
    }
    std::sort(known.begin(), known.end());
    for (std::size_t i = 0; i < known.size();) {
      std::size_t j = i;
      while (j < known.size() && known[j] == known[i]) ++j;
      q.push_back({known[i], static_cast<std::uint32_t>(j - i)});
      i = j;
    }
  }
  if (q.empty()) return {};

  const double coll = static_cast<double>(index.total_terms);
  std::vector<double> acc(index.num_docs, 0.0);
  std::vector<std::uint32_t> matches(index.num_docs, 0);
  std::vector<std::uint32_t> touched;

  if (mu > 0.0) {
    double base = 0.0;  // sum_t qtf * log(mu * p_t), doc-independent
    for (auto [term, qtf] : q) {
      double p_t = static_cast<double>(index.cf[term]) / coll;
      base += qtf * std::log(mu * p_t);
      for (const Posting& p : index.postings[term]) {
        if (matches[p.doc] == 0 && acc[p.doc] == 0.0) touched.push_back(p.doc);
        ++matches[p.doc];
        acc[p.doc] += qtf * std::log(1.0 + p.tf / (mu * p_t));
      }
    }
    double qlen = 0.0;
    for (auto [term, qtf] : q) qlen += qtf;
    std::vector<ScoredDoc> scored;
    scored.reserve(touched.size());
    for (std::uint32_t d : touched) {
      double s = base + acc[d] - qlen * std::log(index.doc_len[d] + mu);
      scored.push_back({d, s});
    }
    sort_and_truncate(scored, top_k);
    return scored;
  }

  // mu == 0: only docs containing every known query term survive.
  for (auto [term, qtf] : q) {
    for (const Posting& p : index.postings[term]) {
      if (matches[p.doc] == 0) touched.push_back(p.doc);
      ++matches[p.doc];
      acc[p.doc] += qtf * (std::log(static_cast<double>(p.tf)) -
                           std::log(static_cast<double>(index.doc_len[p.doc])));
    }
  }
  std::vector<ScoredDoc> scored;
  for (std::uint32_t d : touched) {
    if (matches[d] == q.size()) scored.push_back({d, acc[d]});
  }
  sort_and_truncate(scored, top_k);
  return scored;
}

std::vector<Candidate> rm1_expand(const std::vector<TrackId>& seed_tracks,
                                  const std::vector<ScoredDoc>& feedback,
                                  const InvertedIndex& index) {
  if (index.forward.empty()) {
    fail(Errc::invalid_argument, "rm1_expand requires an index with forward documents");
  }
  double max_log = -std::numeric_limits<double>::infinity();
  for (const auto& fb : feedback) max_log = std::max(max_log, fb.score);
  if (feedback.empty() || !std::isfinite(max_log)) {
    fail(Errc::no_signal, "rm1_expand: no feedback playlist has seed likelihood > 0");
  }

  // weights rescaled by the max log weight; the constant cancels in the
  // final normalization
  std::vector<double> acc(index.postings.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& fb : feedback) {
    if (!std::isfinite(fb.score)) continue;
    double w = std::exp(fb.score - max_log);
    double dl = static_cast<double>(index.doc_len[fb.doc]);
    if (dl == 0.0) continue;
    for (const TermCount& tc : index.forward[fb.doc]) {
      if (acc[tc.term] == 0.0) touched.push_back(tc.term);
      acc[tc.term] += w * (static_cast<double>(tc.tf) / dl);
    }
  }

  std::unordered_set<TrackId> seeds(seed_tracks.begin(), seed_tracks.end());
  std::vector<Candidate> out;
  out.reserve(touched.size());
  double sum = 0.0;
  for (std::uint32_t term : touched) {
    if (seeds.count(term)) continue;
    if (acc[term] > 0.0) {
      out.push_back({term, acc[term]});
      sum += acc[term];
    }
  }
  if (sum > 0.0) {
    for (auto& c : out) c.score /= sum;
  }
  sort_and_truncate(out, out.size());
  return out;
}

CandidateList qe_candidates(const std::vector<TrackId>& seed_tracks, const InvertedIndex& index,
                            const Params& params) {
  CandidateList list;
  list.source = Source::QE;
  list.limit = params.qe_limit;
  if (seed_tracks.empty()) return list;

  std::vector<std::uint32_t> terms(seed_tracks.begin(), seed_tracks.end());
  double mu = params.strict_rm1 ? 0.0 : params.mu;
  auto feedback = ql_rank(terms, index, mu, params.k_feedback);
  if (feedback.empty()) return list;

  try {
    list.entries = rm1_expand(seed_tracks, feedback, index);
  } catch (const Error& e) {
    if (e.code() != Errc::no_signal) throw;
    return list;
  }
  if (list.entries.size() > list.limit) list.entries.resize(list.limit);
  return list;
}

CandidateList meta_candidates(const std::string& title, bool has_title, Source which,
                              const InvertedIndex& index, const std::vector<TrackId>& seed_tracks,
                              const Params& params) {
  CandidateList list;
  list.source = which;
  list.limit = params.meta_limit;
  if (!has_title) return list;

  std::vector<std::uint32_t> terms;
  for (const auto& w : tokenize(title)) {
    std::uint32_t id = index.word_id(w);
    if (id != kInvalidId) terms.push_back(id);
  }
  if (terms.empty()) return list;

  // retrieve extra headroom so seed removal cannot shrink below the limit
  std::size_t top_k = static_cast<std::size_t>(list.limit) + seed_tracks.size();
  auto docs = bm25_rank(terms, index, Bm25Params{params.bm25_k1, params.bm25_b}, top_k);

  std::unordered_set<TrackId> seeds(seed_tracks.begin(), seed_tracks.end());
  for (const auto& sd : docs) {
    auto track = static_cast<TrackId>(index.doc_keys[sd.doc]);
    if (seeds.count(track)) continue;
    list.entries.push_back({track, sd.score});
    if (list.entries.size() == list.limit) break;
  }
  return list;
}

void write_candidates_file(const std::string& path, std::uint64_t corpus_fp,
                           const std::vector<std::pair<Pid, CandidateList>>& lists) {
  ByteWriter w;
  w.magic(kCandMagic);
  w.u32(kCandVersion);
  w.u64(corpus_fp);
  w.u8(lists.empty() ? 0 : static_cast<std::uint8_t>(lists.front().second.source));
  w.u64(lists.size());
  for (const auto& [pid, list] : lists) {
    w.i64(pid);
    w.u32(list.limit);
    w.u32(static_cast<std::uint32_t>(list.entries.size()));
    for (const Candidate& c : list.entries) {
      w.u32(c.track);
      w.f64(c.score);
    }
  }
  write_file(path, w.bytes());
}

std::vector<std::pair<Pid, CandidateList>> read_candidates_file(const std::string& path,
                                                                std::uint64_t expect_corpus_fp,
                                                                Source* source_out) {
  std::string bytes = read_file(path);
  ByteReader r(bytes, path);
  r.magic(kCandMagic, kCandVersion);
  std::uint64_t fp = r.u64();
  if (expect_corpus_fp != 0 && fp != expect_corpus_fp) {
    fail(Errc::version, path + ": candidates were generated against a different corpus");
  }
  Source source = static_cast<Source>(r.u8());
  if (source_out) *source_out = source;
  std::uint64_t n = r.u64();
  std::vector<std::pair<Pid, CandidateList>> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Pid pid = r.i64();
    CandidateList list;
    list.source = source;
    list.limit = r.u32();
    std::uint32_t m = r.u32();
    list.entries.resize(m);
    for (auto& c : list.entries) {
      c.track = r.u32();
      c.score = r.f64();
    }
    out.push_back({pid, std::move(list)});
  }
  return out;
}

}  // namespace segue
