#include "tplrec/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tplrec {

void AttackConfig::validate() const {
  if (target_library.empty()) {
    throw std::invalid_argument("attack: target library must not be empty");
  }
  if (alphas.empty()) {
    throw std::invalid_argument("attack: alpha grid must not be empty");
  }
  for (double alpha : alphas) {
    if (!(alpha >= 0.0)) {
      throw std::invalid_argument("attack: alpha must be >= 0");
    }
  }
  if (filler_pool_size == 0) {
    throw std::invalid_argument("attack: filler pool must not be empty");
  }
}

FakeProject build_fake_project(const PopularityModel& popularity,
                               const std::string& target,
                               std::size_t filler_count,
                               std::size_t filler_pool_size, std::size_t index,
                               std::uint64_t seed) {
  // Candidate fillers: the most popular libraries, minus the target.
  std::vector<std::string> pool;
  for (const std::string& library : popularity.rank_order) {
    if (pool.size() >= filler_pool_size) break;
    if (library != target) pool.push_back(library);
  }

  FakeProject fake;
  fake.id = "__fake_" + std::to_string(index);
  const std::size_t draws = std::min(filler_count, pool.size());
  Rng rng(seed);
  // Partial Fisher-Yates: the first `draws` slots become a uniform sample
  // without replacement.
  for (std::size_t i = 0; i < draws; ++i) {
    std::size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
    fake.libraries.push_back(pool[i]);
  }
  fake.libraries.push_back(target);
  return fake;
}

LibraryCorpus inject_fake_projects(const LibraryCorpus& training,
                                   const std::string& target, double alpha,
                                   std::size_t filler_count,
                                   std::size_t filler_pool_size,
                                   std::uint64_t seed) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("inject_fake_projects: alpha must be >= 0");
  }
  const auto n_fake = static_cast<std::size_t>(
      std::llround(alpha * static_cast<double>(training.project_count())));
  LibraryCorpus poisoned = training;
  if (n_fake == 0) return poisoned;

  PopularityModel popularity = compute_popularity(training);
  for (std::size_t k = 0; k < n_fake; ++k) {
    FakeProject fake =
        build_fake_project(popularity, target, filler_count, filler_pool_size,
                           k, derive_seed(seed, "fake/" + std::to_string(k)));
    if (poisoned.find_project(fake.id)) {
      throw std::invalid_argument(
          "inject_fake_projects: corpus already holds a project named " +
          fake.id);
    }
    for (const std::string& library : fake.libraries) {
      poisoned.add_usage(fake.id, library);
    }
  }
  return poisoned;
}

AttackReport run_attack_experiment(const LibraryCorpus& corpus,
                                   const FoldPlan& folds,
                                   const EvalOptions& options,
                                   const AttackConfig& attack) {
  options.validate();
  attack.validate();

  std::size_t filler_count = attack.filler_count;
  if (filler_count == 0) {
    filler_count = static_cast<std::size_t>(
        std::llround(corpus_stats(corpus).mean_libs_per_project));
  }

  // Ascending, deduplicated grid with the clean baseline always present.
  std::vector<double> alphas = attack.alphas;
  alphas.push_back(0.0);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  AttackReport report;
  report.target_library = attack.target_library;
  report.filler_count = filler_count;
  report.filler_pool_size = attack.filler_pool_size;

  for (double alpha : alphas) {
    std::size_t fake_total = 0;
    TrainingTransform transform;
    if (alpha > 0.0) {
      transform = [&](const LibraryCorpus& training, std::size_t fold) {
        LibraryCorpus poisoned = inject_fake_projects(
            training, attack.target_library, alpha, filler_count,
            attack.filler_pool_size,
            derive_seed(options.seed, "attack/" + std::to_string(fold)));
        fake_total += poisoned.project_count() - training.project_count();
        return poisoned;
      };
    }
    std::vector<FoldRun> fold_runs =
        run_protocol(corpus, folds, options, transform);

    // Hit ratio pooled over every fold's evaluated projects.
    RunResult pooled;
    for (FoldRun& fold_run : fold_runs) {
      for (ProjectRun& project : fold_run.run.projects) {
        pooled.projects.push_back(std::move(project));
      }
    }
    AttackResult result;
    result.alpha = alpha;
    result.fake_projects_total = fake_total;
    result.n_projects_evaluated = pooled.projects.size();
    for (std::size_t n : options.n_values) {
      result.hit_ratio[n] =
          pooled.empty() ? 0.0
                         : hit_ratio_at_n(pooled, attack.target_library, n);
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

}  // namespace tplrec
