#include "tplrec/rerank.hpp"

#include <stdexcept>
#include <vector>

namespace tplrec {

CategoryModel category_priors(const Query& query, const PopularityModel& pop,
                              double smoothing) {
  if (query.known_libraries.empty()) {
    throw std::invalid_argument("category_priors: empty query");
  }
  if (smoothing < 0.0) {
    throw std::invalid_argument("category_priors: smoothing must be non-negative");
  }
  std::size_t head_count = 0;
  for (const auto& lib : query.known_libraries) {
    if (pop.is_head(lib)) ++head_count;
  }
  const auto total = static_cast<double>(query.known_libraries.size());
  CategoryModel model;
  model.head_prior =
      (static_cast<double>(head_count) + smoothing) / (total + 2.0 * smoothing);
  model.tail_prior = (total - static_cast<double>(head_count) + smoothing) /
                     (total + 2.0 * smoothing);
  return model;
}

void assign_candidate_categories(CategoryModel& model,
                                 const RankedList& candidates,
                                 const PopularityModel& pop) {
  for (const auto& entry : candidates) {
    model.category[entry.library] = pop.is_head(entry.library)
                                        ? LibraryCategory::head
                                        : LibraryCategory::tail;
  }
}

RankedList xquad_rerank(const RankedList& base, const CategoryModel& categories,
                        const RerankConfig& config) {
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
    throw std::invalid_argument("xquad_rerank: gamma must be in [0,1]");
  }
  if (config.n_out == 0) {
    throw std::invalid_argument("xquad_rerank: n_out must be positive");
  }
  if (config.n_out > base.size()) {
    throw std::invalid_argument("xquad_rerank: n_out exceeds the candidate pool");
  }

  std::vector<LibraryCategory> category(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto it = categories.category.find(base[i].library);
    if (it == categories.category.end()) {
      throw std::invalid_argument("xquad_rerank: candidate '" +
                                  base[i].library + "' has no category");
    }
    category[i] = it->second;
  }

  // The product over the selection collapses to a covered/uncovered flag per
  // category: it is 1 until the category first enters S, then 0.
  bool covered_head = false;
  bool covered_tail = false;
  std::vector<bool> selected(base.size(), false);

  RankedList out;
  out.reserve(config.n_out);
  for (std::size_t step = 0; step < config.n_out; ++step) {
    std::size_t best = base.size();
    double best_score = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (selected[i]) continue;
      const bool covered =
          category[i] == LibraryCategory::head ? covered_head : covered_tail;
      const double diversity =
          covered ? 0.0 : categories.prior(category[i]);
      const double score =
          (1.0 - config.gamma) * base[i].score + config.gamma * diversity;
      // Base order is (score desc, id asc), so keeping the first maximum
      // applies the tie rule.
      if (best == base.size() || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    selected[best] = true;
    if (category[best] == LibraryCategory::head) {
      covered_head = true;
    } else {
      covered_tail = true;
    }
    out.push_back({base[best].library, best_score});
  }
  return out;
}

}  // namespace tplrec
