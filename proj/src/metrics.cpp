#include "tplrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tplrec {

namespace {

std::size_t depth(const ProjectRun& project, std::size_t n) {
  return std::min(n, project.ranked.size());
}

std::size_t matched_in_top_n(const ProjectRun& project, std::size_t n) {
  std::size_t matched = 0;
  for (std::size_t r = 0; r < depth(project, n); ++r) {
    if (project.relevant(project.ranked[r].library)) ++matched;
  }
  return matched;
}

void require_non_empty(const RunResult& run, const char* op) {
  if (run.empty()) {
    throw std::invalid_argument(std::string(op) + ": empty run");
  }
}

}  // namespace

std::unordered_map<std::string, std::size_t> RunResult::recommendation_counts(
    std::size_t n) const {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& project : projects) {
    for (std::size_t r = 0; r < depth(project, n); ++r) {
      ++counts[project.ranked[r].library];
    }
  }
  return counts;
}

std::unordered_map<std::string, std::size_t> RunResult::ground_truth_counts()
    const {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& project : projects) {
    for (const auto& lib : project.ground_truth) ++counts[lib];
  }
  return counts;
}

double precision_at_n(const RunResult& run, std::size_t n) {
  require_non_empty(run, "precision_at_n");
  if (n == 0) throw std::invalid_argument("precision_at_n: n must be positive");
  double sum = 0.0;
  for (const auto& project : run.projects) {
    sum += static_cast<double>(matched_in_top_n(project, n)) /
           static_cast<double>(n);
  }
  return sum / static_cast<double>(run.projects.size());
}

double recall_at_n(const RunResult& run, std::size_t n) {
  require_non_empty(run, "recall_at_n");
  double sum = 0.0;
  for (const auto& project : run.projects) {
    if (project.ground_truth.empty()) {
      throw std::invalid_argument("recall_at_n: project '" +
                                  project.project_id +
                                  "' has empty ground truth");
    }
    sum += static_cast<double>(matched_in_top_n(project, n)) /
           static_cast<double>(project.ground_truth.size());
  }
  return sum / static_cast<double>(run.projects.size());
}

namespace {

// Shared EPC body; pop_of must return pop(l) in [0,1].
template <typename PopFn>
double epc_impl(const RunResult& run, std::size_t n, PopFn&& pop_of) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& project : run.projects) {
    for (std::size_t r = 0; r < depth(project, n); ++r) {
      const auto& lib = project.ranked[r].library;
      if (!project.relevant(lib)) continue;
      const double discount = 1.0 / std::log2(static_cast<double>(r) + 2.0);
      numerator += discount * (1.0 - pop_of(lib));
      denominator += discount;
    }
  }
  return denominator == 0.0 ? 0.0 : numerator / denominator;
}

}  // namespace

double epc_at_n(const RunResult& run, std::size_t n) {
  require_non_empty(run, "epc_at_n");
  const auto counts = run.recommendation_counts(n);
  std::size_t max_count = 0;
  for (const auto& [lib, count] : counts) max_count = std::max(max_count, count);
  if (max_count == 0) return 0.0;  // no recommendations at all
  return epc_impl(run, n, [&](const std::string& lib) {
    return static_cast<double>(counts.at(lib)) /
           static_cast<double>(max_count);
  });
}

double epc_at_n(const RunResult& run, std::size_t n,
                const PopularityModel& training_popularity) {
  require_non_empty(run, "epc_at_n");
  const auto f_max = static_cast<double>(training_popularity.max_frequency());
  if (f_max == 0.0) return 0.0;
  return epc_impl(run, n, [&](const std::string& lib) {
    return static_cast<double>(training_popularity.freq(lib)) / f_max;
  });
}

double coverage_at_n(const RunResult& run, std::size_t n,
                     std::size_t total_libraries) {
  require_non_empty(run, "coverage_at_n");
  if (total_libraries == 0) {
    throw std::invalid_argument("coverage_at_n: total_libraries must be positive");
  }
  std::set<std::string> seen;
  for (const auto& project : run.projects) {
    for (std::size_t r = 0; r < depth(project, n); ++r) {
      seen.insert(project.ranked[r].library);
    }
  }
  if (seen.size() > total_libraries) {
    throw std::invalid_argument(
        "coverage_at_n: total_libraries smaller than the recommended union");
  }
  return static_cast<double>(seen.size()) /
         static_cast<double>(total_libraries);
}

double hit_ratio_at_n(const RunResult& run, const std::string& target_library,
                      std::size_t n) {
  require_non_empty(run, "hit_ratio_at_n");
  std::size_t hits = 0;
  for (const auto& project : run.projects) {
    for (std::size_t r = 0; r < depth(project, n); ++r) {
      if (project.ranked[r].library == target_library) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(run.projects.size());
}

double PopularityProfile::mean_head_fraction() const {
  if (per_project_head_fraction.empty()) return 0.0;
  const double sum = std::accumulate(per_project_head_fraction.begin(),
                                     per_project_head_fraction.end(), 0.0);
  return sum / static_cast<double>(per_project_head_fraction.size());
}

std::vector<double> PopularityProfile::position_head_fraction() const {
  std::vector<double> out(position_total.size(), 0.0);
  for (std::size_t r = 0; r < position_total.size(); ++r) {
    if (position_total[r] > 0) {
      out[r] = static_cast<double>(position_head_count[r]) /
               static_cast<double>(position_total[r]);
    }
  }
  return out;
}

PopularityProfile popularity_profile(const RunResult& run,
                                     const PopularityModel& pop,
                                     std::size_t n) {
  PopularityProfile profile;
  profile.position_head_count.assign(n, 0);
  profile.position_total.assign(n, 0);
  for (const auto& project : run.projects) {
    const std::size_t len = depth(project, n);
    std::size_t head_items = 0;
    for (std::size_t r = 0; r < len; ++r) {
      ++profile.position_total[r];
      if (pop.is_head(project.ranked[r].library)) {
        ++head_items;
        ++profile.position_head_count[r];
      }
    }
    profile.per_project_head_fraction.push_back(
        len == 0 ? 0.0
                 : static_cast<double>(head_items) / static_cast<double>(len));
  }
  return profile;
}

namespace {

// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman_rho: length mismatch");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("spearman_rho: needs at least two points");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;

  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) {
    throw std::domain_error("spearman_rho: undefined for constant input");
  }
  return cov / std::sqrt(var_x * var_y);
}

}  // namespace tplrec
