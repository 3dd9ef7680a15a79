#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "tplrec/attack.hpp"
#include "tplrec/rng.hpp"

using namespace tplrec;

namespace {

LibraryCorpus synth(std::size_t projects, std::size_t libraries,
                    std::uint64_t seed) {
  SyntheticConfig config;
  config.n_projects = projects;
  config.n_libraries = libraries;
  config.min_libs_per_project = 3;
  config.max_libs_per_project = 8;
  config.zipf_exponent = 1.0;
  config.seed = seed;
  return generate_synthetic(config);
}

std::set<std::string> top_pool(const PopularityModel& pop,
                               const std::string& target, std::size_t size) {
  std::set<std::string> result;
  for (const std::string& library : pop.rank_order) {
    if (result.size() >= size) break;
    if (library != target) result.insert(library);
  }
  return result;
}

}  // namespace

TEST_CASE("attack configuration rejects bad values") {
  LibraryCorpus corpus = synth(20, 15, 1);
  AttackConfig config;
  config.target_library = corpus.library_id(3);
  CHECK_NOTHROW(config.validate());

  // A target nobody uses yet is legitimate: it models an attacker pushing
  // their own library into the ecosystem.
  AttackConfig fresh = config;
  fresh.target_library = "does-not-exist";
  CHECK_NOTHROW(fresh.validate());

  AttackConfig no_target = config;
  no_target.target_library.clear();
  CHECK_THROWS_AS(no_target.validate(), std::invalid_argument);

  AttackConfig no_alphas = config;
  no_alphas.alphas.clear();
  CHECK_THROWS_AS(no_alphas.validate(), std::invalid_argument);

  AttackConfig negative = config;
  negative.alphas = {0.1, -0.2};
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

  AttackConfig no_pool = config;
  no_pool.filler_pool_size = 0;
  CHECK_THROWS_AS(no_pool.validate(), std::invalid_argument);
}

TEST_CASE("fake projects pair popular fillers with the target") {
  LibraryCorpus corpus = synth(40, 30, 3);
  PopularityModel pop = compute_popularity(corpus);
  const std::string target = pop.rank_order.back();

  FakeProject fake = build_fake_project(pop, target, 4, 10, 7, 1234);
  CHECK(fake.id == "__fake_7");
  REQUIRE(fake.libraries.size() == 5);
  CHECK(fake.libraries.back() == target);

  std::set<std::string> pool = top_pool(pop, target, 10);
  std::set<std::string> fillers(fake.libraries.begin(),
                                fake.libraries.end() - 1);
  CHECK(fillers.size() == 4);  // distinct draws
  for (const std::string& filler : fillers) {
    CHECK(pool.contains(filler));
    CHECK(filler != target);
  }

  // Pure function of its arguments.
  FakeProject replay = build_fake_project(pop, target, 4, 10, 7, 1234);
  CHECK(replay.libraries == fake.libraries);
  bool any_difference = false;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    FakeProject other = build_fake_project(pop, target, 4, 10, 7, seed);
    if (other.libraries != fake.libraries) any_difference = true;
  }
  CHECK(any_difference);

  // Draws are capped by the pool actually available.
  FakeProject capped = build_fake_project(pop, target, 10, 4, 0, 9);
  CHECK(capped.libraries.size() == 5);  // 4 fillers + target

  FakeProject bare = build_fake_project(pop, target, 0, 10, 0, 9);
  CHECK(bare.libraries == std::vector<std::string>{target});
}

TEST_CASE("injection adds round(alpha * projects) fakes and nothing else") {
  LibraryCorpus training = synth(10, 20, 5);
  PopularityModel pop = compute_popularity(training);
  const std::string target = pop.rank_order.back();

  CHECK(inject_fake_projects(training, target, 0.0, 4, 10, 77) == training);
  CHECK(inject_fake_projects(training, target, 0.04, 4, 10, 77) ==
        training);  // round(0.4) = 0

  LibraryCorpus poisoned = inject_fake_projects(training, target, 0.25, 4, 10, 77);
  CHECK(poisoned.project_count() == 13);  // round(2.5) away from zero

  LibraryCorpus two = inject_fake_projects(training, target, 0.2, 4, 10, 77);
  CHECK(two.project_count() == 12);

  // Genuine rows stay bit-for-bit identical, fakes are appended after them.
  for (std::size_t p = 0; p < training.project_count(); ++p) {
    CHECK(poisoned.project_id(p) == training.project_id(p));
    CHECK(poisoned.library_ids_of(p) == training.library_ids_of(p));
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string id = "__fake_" + std::to_string(k);
    auto index = poisoned.find_project(id);
    REQUIRE(index.has_value());
    std::vector<std::string> libs = poisoned.library_ids_of(*index);
    CHECK(std::find(libs.begin(), libs.end(), target) != libs.end());
  }

  // Larger alpha extends the smaller injection instead of reshuffling it.
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string id = "__fake_" + std::to_string(k);
    CHECK(poisoned.library_ids_of(*poisoned.find_project(id)) ==
          two.library_ids_of(*two.find_project(id)));
  }

  // Determinism across replays, sensitivity to the seed.
  CHECK(inject_fake_projects(training, target, 0.25, 4, 10, 77) == poisoned);
  CHECK(inject_fake_projects(training, target, 0.25, 4, 10, 78) != poisoned);

  // Name collisions with pre-existing projects are refused.
  LibraryCorpus clash = training;
  clash.add_usage("__fake_0", "whatever");
  CHECK_THROWS_AS(inject_fake_projects(clash, target, 0.25, 4, 10, 77),
                  std::invalid_argument);
}

TEST_CASE("attack experiment: clean baseline, monotone grid, exact accounting") {
  LibraryCorpus corpus = synth(60, 40, 9);
  PopularityModel pop = compute_popularity(corpus);
  const std::string target = pop.rank_order.back();

  FoldPlan plan = make_folds(corpus, 4, 13);
  EvalOptions options;
  options.algo.algorithm = Algorithm::popularity;
  options.n_values = {3, 10};
  options.seed = 13;

  AttackConfig attack;
  attack.target_library = target;
  attack.alphas = {1.0, 0.5};  // deliberately unsorted
  attack.filler_count = 5;
  attack.filler_pool_size = 15;

  AttackReport report = run_attack_experiment(corpus, plan, options, attack);

  CHECK(report.target_library == target);
  CHECK(report.filler_count == 5);
  CHECK(report.filler_pool_size == 15);

  // Baseline inserted, grid sorted ascending.
  REQUIRE(report.results.size() == 3);
  CHECK(report.results[0].alpha == 0.0);
  CHECK(report.results[1].alpha == 0.5);
  CHECK(report.results[2].alpha == 1.0);

  // A bottom-of-the-ranking target never surfaces without poisoning.
  for (const auto& [n, value] : report.results[0].hit_ratio) {
    CHECK(value == 0.0);
  }
  CHECK(report.results[0].fake_projects_total == 0);

  // 60 projects over 4 folds: every fold trains on 45 genuine projects.
  CHECK(report.results[1].fake_projects_total == 4 * 23);  // round(22.5)
  CHECK(report.results[2].fake_projects_total == 4 * 45);

  // Poisoning touches training only, so the evaluated population is fixed.
  for (const AttackResult& result : report.results) {
    CHECK(result.n_projects_evaluated ==
          report.results[0].n_projects_evaluated);
  }

  // Hit ratio grows (weakly) with the injection ratio and the cut-off.
  for (std::size_t n : options.n_values) {
    CHECK(report.results[0].hit_ratio.at(n) <=
          report.results[1].hit_ratio.at(n));
    CHECK(report.results[1].hit_ratio.at(n) <=
          report.results[2].hit_ratio.at(n));
  }
  for (const AttackResult& result : report.results) {
    CHECK(result.hit_ratio.at(3) <= result.hit_ratio.at(10));
  }
  CHECK(report.results[2].hit_ratio.at(10) > 0.0);

  // Replay is exact.
  AttackReport replay = run_attack_experiment(corpus, plan, options, attack);
  REQUIRE(replay.results.size() == report.results.size());
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    CHECK(replay.results[i].alpha == report.results[i].alpha);
    CHECK(replay.results[i].fake_projects_total ==
          report.results[i].fake_projects_total);
    CHECK(replay.results[i].hit_ratio == report.results[i].hit_ratio);
  }

  // A target absent from the corpus: the clean run cannot emit it at all,
  // and injection still pushes it into the lists.
  AttackConfig fresh = attack;
  fresh.target_library = "brand-new-library";
  AttackReport fresh_report =
      run_attack_experiment(corpus, plan, options, fresh);
  REQUIRE(fresh_report.results.size() == 3);
  for (const auto& [n, value] : fresh_report.results[0].hit_ratio) {
    CHECK(value == 0.0);
  }
  CHECK(fresh_report.results[2].hit_ratio.at(10) > 0.0);
}

TEST_CASE("attack experiment matches a hand-built poisoned protocol run") {
  LibraryCorpus corpus = synth(50, 35, 21);
  PopularityModel pop = compute_popularity(corpus);
  const std::string target = pop.rank_order.back();

  FoldPlan plan = make_folds(corpus, 5, 31);
  EvalOptions options;
  options.algo.algorithm = Algorithm::popularity;
  options.n_values = {5};
  options.seed = 31;

  AttackConfig attack;
  attack.target_library = target;
  attack.alphas = {0.3};
  attack.filler_count = 4;
  attack.filler_pool_size = 12;

  AttackReport report = run_attack_experiment(corpus, plan, options, attack);
  REQUIRE(report.results.size() == 2);
  const AttackResult& poisoned = report.results[1];

  // Rebuild the same poisoned run directly on the protocol.
  TrainingTransform transform = [&](const LibraryCorpus& training,
                                    std::size_t fold) {
    return inject_fake_projects(
        training, target, 0.3, 4, 12,
        derive_seed(options.seed, "attack/" + std::to_string(fold)));
  };
  std::vector<FoldRun> fold_runs =
      run_protocol(corpus, plan, options, transform);
  RunResult pooled;
  for (FoldRun& fold_run : fold_runs) {
    for (ProjectRun& project : fold_run.run.projects) {
      CHECK(!project.project_id.starts_with("__fake_"));
      pooled.projects.push_back(std::move(project));
    }
  }

  CHECK(poisoned.n_projects_evaluated == pooled.projects.size());
  CHECK(poisoned.hit_ratio.at(5) == hit_ratio_at_n(pooled, target, 5));
}

TEST_CASE("filler count defaults to the corpus mean library footprint") {
  LibraryCorpus corpus = synth(30, 25, 17);
  FoldPlan plan = make_folds(corpus, 3, 7);
  EvalOptions options;
  options.algo.algorithm = Algorithm::popularity;
  options.n_values = {5};
  options.seed = 7;

  AttackConfig attack;
  attack.target_library = compute_popularity(corpus).rank_order.back();
  attack.alphas = {0.1};
  attack.filler_count = 0;

  AttackReport report = run_attack_experiment(corpus, plan, options, attack);
  const auto expected = static_cast<std::size_t>(
      std::llround(corpus_stats(corpus).mean_libs_per_project));
  CHECK(report.filler_count == expected);
  CHECK(expected >= 3);
  CHECK(expected <= 8);
}
