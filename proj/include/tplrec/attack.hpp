#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tplrec/corpus.hpp"
#include "tplrec/evaluation.hpp"
#include "tplrec/rng.hpp"

namespace tplrec {

/// Push-attack parameters: fake projects pair a target library with fillers
/// drawn from the most popular libraries, at a chosen fake-to-genuine ratio.
/// The target does not have to exist in the corpus: a target nobody uses yet
/// models an attacker pushing their own library, and its clean-run hit ratio
/// is zero by construction because recommenders only emit libraries seen in
/// training.
struct AttackConfig {
  std::string target_library;
  std::vector<double> alphas = {0.05, 0.10, 0.15, 0.20};
  std::size_t filler_count = 0;     // 0 = round(mean libraries per project)
  std::size_t filler_pool_size = 20;

  // Throws std::invalid_argument on bad values.
  void validate() const;
};

struct FakeProject {
  std::string id;
  std::vector<std::string> libraries;  // fillers in draw order, target last
};

// One fake usage profile: `filler_count` distinct libraries sampled
// uniformly from the `filler_pool_size` most popular (target excluded),
// plus the target itself.
FakeProject build_fake_project(const PopularityModel& popularity,
                               const std::string& target,
                               std::size_t filler_count,
                               std::size_t filler_pool_size, std::size_t index,
                               std::uint64_t seed);

// Training corpus plus round(alpha * genuine projects) fake profiles named
// __fake_0, __fake_1, ... Fake project k depends only on (seed, k), so a
// larger alpha extends a smaller one's injection instead of reshuffling it.
LibraryCorpus inject_fake_projects(const LibraryCorpus& training,
                                   const std::string& target,
                                   double alpha, std::size_t filler_count,
                                   std::size_t filler_pool_size,
                                   std::uint64_t seed);

/// Outcome at one fake-to-genuine ratio.
struct AttackResult {
  double alpha = 0.0;
  std::size_t fake_projects_total = 0;      // summed over folds
  std::size_t n_projects_evaluated = 0;     // pooled over folds
  std::map<std::size_t, double> hit_ratio;  // n -> |hit| / |evaluated|
};

struct AttackReport {
  std::string target_library;
  std::size_t filler_count = 0;       // resolved value actually used
  std::size_t filler_pool_size = 20;
  std::vector<AttackResult> results;  // ascending alpha, baseline 0 included
};

// Repeats the cross-validation protocol with poisoned training folds for
// every alpha (plus the clean baseline) and pools the target's hit ratio
// over all folds. Only training data is poisoned; test projects stay
// untouched.
AttackReport run_attack_experiment(const LibraryCorpus& corpus,
                                   const FoldPlan& folds,
                                   const EvalOptions& options,
                                   const AttackConfig& attack);

}  // namespace tplrec
