#include <algorithm>
#include <cmath>
#include <map>

#include "tplrec/recommenders.hpp"

namespace tplrec {

namespace {

using Itemset = std::vector<std::size_t>;  // sorted library indices

// Counts the projects containing each candidate itemset by enumerating the
// size-k subsets of every usage row.
void count_candidates(const LibraryCorpus& corpus, std::size_t k,
                      std::map<Itemset, std::size_t>& candidates) {
  if (candidates.empty()) return;
  Itemset subset(k);
  for (std::size_t p = 0; p < corpus.project_count(); ++p) {
    const auto& row = corpus.libraries_of(p);
    if (row.size() < k) continue;
    // Iterative k-combination walk over the sorted row.
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      for (std::size_t i = 0; i < k; ++i) subset[i] = row[pick[i]];
      if (auto it = candidates.find(subset); it != candidates.end()) {
        ++it->second;
      }
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == row.size() - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
}

}  // namespace

RuleSet mine_association_rules(const LibraryCorpus& corpus, double min_support,
                               double min_confidence,
                               std::size_t max_antecedent) {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw std::invalid_argument("min_support must be in (0,1]");
  }
  if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
    throw std::invalid_argument("min_confidence must be in (0,1]");
  }
  if (max_antecedent == 0) {
    throw std::invalid_argument("max_antecedent must be positive");
  }

  const auto n_projects = static_cast<double>(corpus.project_count());
  const double min_count = min_support * n_projects - 1e-9;
  const std::size_t max_size = max_antecedent + 1;

  // frequent[k-1]: itemsets of size k with their counts, in lexicographic
  // index order.
  std::vector<std::map<Itemset, std::size_t>> frequent;

  // Size 1.
  {
    std::map<Itemset, std::size_t> level;
    std::vector<std::size_t> counts(corpus.library_count(), 0);
    for (std::size_t p = 0; p < corpus.project_count(); ++p) {
      for (std::size_t l : corpus.libraries_of(p)) ++counts[l];
    }
    for (std::size_t l = 0; l < counts.size(); ++l) {
      if (static_cast<double>(counts[l]) >= min_count) {
        level.emplace(Itemset{l}, counts[l]);
      }
    }
    frequent.push_back(std::move(level));
  }

  for (std::size_t k = 2; k <= max_size; ++k) {
    const auto& prev = frequent.back();
    if (prev.empty()) break;
    std::map<Itemset, std::size_t> candidates;
    // Apriori join: merge pairs sharing the first k-2 items, then prune
    // candidates with an infrequent (k-1)-subset.
    for (auto a = prev.begin(); a != prev.end(); ++a) {
      auto b = a;
      for (++b; b != prev.end(); ++b) {
        if (!std::equal(a->first.begin(), a->first.end() - 1,
                        b->first.begin(), b->first.end() - 1)) {
          break;  // map order groups shared prefixes together
        }
        Itemset joined = a->first;
        joined.push_back(b->first.back());
        bool prune = false;
        Itemset sub(joined.size() - 1);
        for (std::size_t skip = 0; skip + 2 < joined.size() && !prune; ++skip) {
          sub.clear();
          for (std::size_t i = 0; i < joined.size(); ++i) {
            if (i != skip) sub.push_back(joined[i]);
          }
          prune = !prev.contains(sub);
        }
        if (!prune) candidates.emplace(std::move(joined), 0);
      }
    }
    count_candidates(corpus, k, candidates);
    std::map<Itemset, std::size_t> level;
    for (auto& [items, count] : candidates) {
      if (static_cast<double>(count) >= min_count) level.emplace(items, count);
    }
    frequent.push_back(std::move(level));
  }

  RuleSet rules;
  for (std::size_t k = 2; k <= frequent.size(); ++k) {
    for (const auto& [items, count] : frequent[k - 1]) {
      for (std::size_t skip = 0; skip < items.size(); ++skip) {
        Itemset antecedent;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (i != skip) antecedent.push_back(items[i]);
        }
        const std::size_t ant_count = frequent[antecedent.size() - 1].at(antecedent);
        const double confidence =
            static_cast<double>(count) / static_cast<double>(ant_count);
        if (confidence + 1e-12 < min_confidence) continue;
        AssociationRule rule;
        rule.antecedent.reserve(antecedent.size());
        for (std::size_t l : antecedent) {
          rule.antecedent.push_back(corpus.library_id(l));
        }
        std::sort(rule.antecedent.begin(), rule.antecedent.end());
        rule.consequent = corpus.library_id(items[skip]);
        rule.support = static_cast<double>(count) / n_projects;
        rule.confidence = confidence;
        rules.rules.push_back(std::move(rule));
      }
    }
  }
  return rules;
}

}  // namespace tplrec
