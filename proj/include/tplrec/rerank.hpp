#pragma once

#include <string>
#include <unordered_map>

#include "tplrec/corpus.hpp"
#include "tplrec/recommenders.hpp"

namespace tplrec {

enum class LibraryCategory { head, tail };

/// Trade-off and output-size knobs for the greedy diversification.
struct RerankConfig {
  double gamma = 0.2;  // 0 keeps the base order, 1 ranks by category alone
  std::size_t n_out = 1;
  double category_smoothing = 1.0;
};

/// Head/tail assignment for the candidates of one query plus the query's
/// category prior.
struct CategoryModel {
  std::unordered_map<std::string, LibraryCategory> category;
  double head_prior = 0.5;  // P(head | project)
  double tail_prior = 0.5;

  double prior(LibraryCategory c) const {
    return c == LibraryCategory::head ? head_prior : tail_prior;
  }
};

// Estimates P(c|p) from the query's head/tail membership counts with
// additive smoothing over the two categories. The candidate category map is
// left empty; see assign_candidate_categories.
CategoryModel category_priors(const Query& query, const PopularityModel& pop,
                              double smoothing = 1.0);

// Tags every candidate in the list as head or tail; libraries outside the
// popularity model's universe count as tail.
void assign_candidate_categories(CategoryModel& model,
                                 const RankedList& candidates,
                                 const PopularityModel& pop);

// Greedy selection of n_out items maximizing
//   s_l = (1-gamma) * P(l|p) + gamma * P(c_l|p) * prod_{i in S}(1 - P(i|c_l,S))
// with binary category membership, so the diversity term of a category drops
// to zero once the category is represented in the selection. Base scores are
// expected to be probabilities (see normalize_scores). Ties go to the higher
// base score, then the lexicographically smaller identifier. Output scores
// are the selection-time s_l values.
RankedList xquad_rerank(const RankedList& base, const CategoryModel& categories,
                        const RerankConfig& config);

}  // namespace tplrec
