#pragma once

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tplrec/corpus.hpp"
#include "tplrec/recommenders.hpp"

namespace tplrec {

/// One evaluated project: its query half, the stored ranked list (truncated
/// to the run's maximum cut-off) and the held-out ground truth.
struct ProjectRun {
  std::string project_id;
  std::vector<std::string> query;         // sorted
  RankedList ranked;
  std::vector<std::string> ground_truth;  // sorted, non-empty

  bool relevant(const std::string& library) const {
    return std::binary_search(ground_truth.begin(), ground_truth.end(),
                              library);
  }
};

/// A batch of evaluated projects; all metrics read from here.
struct RunResult {
  std::vector<ProjectRun> projects;

  bool empty() const { return projects.empty(); }

  // num(l): how many projects have l in their top-n list.
  std::unordered_map<std::string, std::size_t> recommendation_counts(
      std::size_t n) const;

  // How many projects hold l in their ground truth.
  std::unordered_map<std::string, std::size_t> ground_truth_counts() const;
};

// Mean over projects of |top-n ∩ truth| / n. The denominator stays n even
// for lists shorter than n.
double precision_at_n(const RunResult& run, std::size_t n);

// Mean over projects of |top-n ∩ truth| / |truth|.
double recall_at_n(const RunResult& run, std::size_t n);

// Expected popularity complement: rank-discounted novelty of the relevant
// recommendations, with pop(l) = num(l) / max num over the same run at the
// same cut-off. Returns 0 when no list holds any relevant item.
double epc_at_n(const RunResult& run, std::size_t n);

// Variant with pop(l) = training frequency ratio f(l)/f_max instead of the
// run's recommendation counts.
double epc_at_n(const RunResult& run, std::size_t n,
                const PopularityModel& training_popularity);

// |union of all top-n lists| / total_libraries.
double coverage_at_n(const RunResult& run, std::size_t n,
                     std::size_t total_libraries);

// Fraction of projects whose top-n list contains target_library.
double hit_ratio_at_n(const RunResult& run, const std::string& target_library,
                      std::size_t n);

/// Head/tail composition of the recommendation lists.
struct PopularityProfile {
  // Head share of each project's top-n list (by its stored length).
  std::vector<double> per_project_head_fraction;
  // Per rank position r (0-based): how many lists have a head item there,
  // out of how many lists reach that position.
  std::vector<std::size_t> position_head_count;
  std::vector<std::size_t> position_total;

  double mean_head_fraction() const;
  std::vector<double> position_head_fraction() const;
};

PopularityProfile popularity_profile(const RunResult& run,
                                     const PopularityModel& pop,
                                     std::size_t n);

// Spearman rank correlation with average ranks for ties. Throws
// std::invalid_argument on size mismatch or fewer than two points,
// std::domain_error when either input has zero rank variance.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace tplrec
