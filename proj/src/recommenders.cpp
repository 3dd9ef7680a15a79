#include "tplrec/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tplrec/wmf.hpp"

namespace tplrec {

bool Query::knows(const std::string& library) const {
  return std::find(known_libraries.begin(), known_libraries.end(), library) !=
         known_libraries.end();
}

void sort_ranked(RankedList& ranked) {
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredLibrary& a, const ScoredLibrary& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.library < b.library;
            });
}

RankedList normalize_scores(const RankedList& ranked) {
  if (ranked.empty()) {
    throw std::invalid_argument("normalize_scores: empty list");
  }
  double lo = ranked.front().score;
  double hi = ranked.front().score;
  for (const auto& e : ranked) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }

  RankedList out = ranked;
  if (lo == hi) {
    const double uniform = 1.0 / static_cast<double>(out.size());
    for (auto& e : out) e.score = uniform;
    return out;
  }
  const double shift = lo < 0.0 ? -lo : 0.0;
  double sum = 0.0;
  for (const auto& e : out) sum += e.score + shift;
  for (auto& e : out) e.score = (e.score + shift) / sum;
  return out;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::popularity:
      return "popularity";
    case Algorithm::cf:
      return "cf";
    case Algorithm::assoc:
      return "assoc";
    case Algorithm::wmf:
      return "wmf";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "popularity") return Algorithm::popularity;
  if (name == "cf") return Algorithm::cf;
  if (name == "assoc") return Algorithm::assoc;
  if (name == "wmf") return Algorithm::wmf;
  throw std::invalid_argument("unknown algorithm: " + name);
}

// --- popularity -------------------------------------------------------------

PopularityRecommender::PopularityRecommender(PopularityModel pop,
                                             std::uint64_t fingerprint)
    : pop_(std::move(pop)) {
  fingerprint_ = fingerprint;
}

RankedList PopularityRecommender::recommend(const Query& query,
                                            std::size_t m) const {
  // rank_order is already (frequency desc, id asc).
  RankedList out;
  out.reserve(std::min(m, pop_.rank_order.size()));
  for (const auto& lib : pop_.rank_order) {
    if (out.size() == m) break;
    if (query.knows(lib)) continue;
    out.push_back({lib, static_cast<double>(pop_.frequency.at(lib))});
  }
  return out;
}

// --- collaborative filtering ------------------------------------------------

CfRecommender::CfRecommender(const LibraryCorpus& training,
                             std::size_t k_neighbors)
    : training_(training),
      pop_(compute_popularity(training)),
      k_neighbors_(k_neighbors) {
  if (k_neighbors_ == 0) {
    throw std::invalid_argument("cf: k_neighbors must be positive");
  }
  fingerprint_ = corpus_fingerprint(training_);
}

RankedList CfRecommender::recommend(const Query& query, std::size_t m) const {
  // Query as sorted library indices within the training universe; ids the
  // training never saw cannot influence similarity.
  std::vector<std::size_t> query_libs;
  for (const auto& lib : query.known_libraries) {
    if (auto idx = training_.find_library(lib)) query_libs.push_back(*idx);
  }
  std::sort(query_libs.begin(), query_libs.end());

  const std::size_t n_projects = training_.project_count();
  std::vector<double> sim(n_projects, 0.0);
  bool any_positive = false;
  if (!query_libs.empty()) {
    const double query_norm = std::sqrt(static_cast<double>(query_libs.size()));
    for (std::size_t p = 0; p < n_projects; ++p) {
      const auto& row = training_.libraries_of(p);
      std::size_t overlap = 0;
      auto qit = query_libs.begin();
      auto rit = row.begin();
      while (qit != query_libs.end() && rit != row.end()) {
        if (*qit < *rit) {
          ++qit;
        } else if (*rit < *qit) {
          ++rit;
        } else {
          ++overlap;
          ++qit;
          ++rit;
        }
      }
      if (overlap > 0) {
        sim[p] = static_cast<double>(overlap) /
                 (query_norm * std::sqrt(static_cast<double>(row.size())));
        any_positive = true;
      }
    }
  }

  if (!any_positive) {
    return recommend_popularity(pop_, query, m);
  }

  // Top-k neighbors: similarity desc, project index asc.
  std::vector<std::size_t> neighbors(n_projects);
  std::iota(neighbors.begin(), neighbors.end(), 0);
  const std::size_t k = std::min(k_neighbors_, n_projects);
  std::partial_sort(neighbors.begin(), neighbors.begin() + k, neighbors.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (sim[a] != sim[b]) return sim[a] > sim[b];
                      return a < b;
                    });

  std::vector<double> score(training_.library_count(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t p = neighbors[i];
    if (sim[p] == 0.0) break;  // the remaining neighbors contribute nothing
    for (std::size_t l : training_.libraries_of(p)) score[l] += sim[p];
  }

  RankedList out;
  for (std::size_t l = 0; l < score.size(); ++l) {
    if (score[l] <= 0.0) continue;
    const std::string& lib = training_.library_id(l);
    if (query.knows(lib)) continue;
    out.push_back({lib, score[l]});
  }
  sort_ranked(out);
  if (out.size() > m) out.resize(m);
  return out;
}

// --- association-rule hybrid ------------------------------------------------

AssocRecommender::AssocRecommender(RuleSet rules, PopularityModel pop,
                                   std::uint64_t fingerprint)
    : rules_(std::move(rules)), pop_(std::move(pop)) {
  fingerprint_ = fingerprint;
}

RankedList AssocRecommender::recommend(const Query& query,
                                       std::size_t m) const {
  std::vector<std::string> known = query.known_libraries;
  std::sort(known.begin(), known.end());

  // Max confidence over firing rules, per consequent.
  std::map<std::string, double> fired;
  for (const auto& rule : rules_.rules) {
    if (!std::includes(known.begin(), known.end(), rule.antecedent.begin(),
                       rule.antecedent.end())) {
      continue;
    }
    if (std::binary_search(known.begin(), known.end(), rule.consequent)) {
      continue;
    }
    auto [it, inserted] = fired.emplace(rule.consequent, rule.confidence);
    if (!inserted) it->second = std::max(it->second, rule.confidence);
  }

  RankedList out;
  out.reserve(fired.size());
  double min_fired = 1.0;
  for (const auto& [lib, conf] : fired) {
    out.push_back({lib, conf});
    min_fired = std::min(min_fired, conf);
  }

  // Popularity padding, scored strictly below every fired confidence.
  if (out.size() < m) {
    const double pad_scale = fired.empty() ? 1.0 : min_fired;
    const double denom = static_cast<double>(pop_.max_frequency()) + 1.0;
    for (const auto& lib : pop_.rank_order) {
      if (out.size() >= m) break;
      if (fired.contains(lib)) continue;
      if (std::binary_search(known.begin(), known.end(), lib)) continue;
      out.push_back(
          {lib, pad_scale * static_cast<double>(pop_.frequency.at(lib)) / denom});
    }
  }

  sort_ranked(out);
  if (out.size() > m) out.resize(m);
  return out;
}

// --- factory ----------------------------------------------------------------

std::unique_ptr<Recommender> make_recommender(const AlgorithmConfig& config,
                                              const LibraryCorpus& training,
                                              std::uint64_t seed) {
  const std::uint64_t fp = corpus_fingerprint(training);
  switch (config.algorithm) {
    case Algorithm::popularity:
      return std::make_unique<PopularityRecommender>(
          compute_popularity(training), fp);
    case Algorithm::cf:
      return std::make_unique<CfRecommender>(training, config.k_neighbors);
    case Algorithm::assoc:
      return std::make_unique<AssocRecommender>(
          mine_association_rules(training, config.min_support,
                                 config.min_confidence, config.max_antecedent),
          compute_popularity(training), fp);
    case Algorithm::wmf: {
      WmfModel::Config wmf{config.factors, config.iterations,
                           config.regularization, config.weight_exponent};
      return std::make_unique<WmfRecommender>(
          WmfModel::train(training, wmf, seed), fp);
    }
  }
  throw std::invalid_argument("make_recommender: unknown algorithm");
}

RankedList recommend_popularity(const PopularityModel& pop, const Query& query,
                                std::size_t m) {
  return PopularityRecommender(pop).recommend(query, m);
}

RankedList recommend_cf(const LibraryCorpus& corpus, const Query& query,
                        std::size_t k_neighbors, std::size_t m) {
  return CfRecommender(corpus, k_neighbors).recommend(query, m);
}

RankedList recommend_assoc(const RuleSet& rules, const PopularityModel& pop,
                           const Query& query, std::size_t m) {
  return AssocRecommender(rules, pop).recommend(query, m);
}

}  // namespace tplrec
