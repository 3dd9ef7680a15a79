#include "tplrec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "tplrec/rng.hpp"

namespace tplrec {

FoldPlan make_folds(const LibraryCorpus& corpus, std::size_t k,
                    std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
  if (corpus.empty()) throw std::invalid_argument("make_folds: empty corpus");

  std::vector<std::size_t> order(corpus.project_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "folds"));
  rng.shuffle(order);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.resize(order.size());
  // Round-robin over the shuffled order keeps fold sizes within one of
  // each other.
  for (std::size_t i = 0; i < order.size(); ++i) {
    plan.assignment[order[i]] = i % k;
  }
  return plan;
}

SplitResult split_query_groundtruth(const std::vector<std::string>& libraries,
                                    std::uint64_t seed) {
  if (libraries.size() < 2) {
    throw UnsplittableProjectError(
        "cannot split a project with fewer than two libraries");
  }
  // Sort before shuffling so the outcome depends only on the library set
  // and the seed, not on row insertion order.
  std::vector<std::string> pool = libraries;
  std::sort(pool.begin(), pool.end());
  Rng rng(seed);
  rng.shuffle(pool);

  const std::size_t query_size = (pool.size() + 1) / 2;
  SplitResult split;
  split.query_half.assign(pool.begin(),
                          pool.begin() + static_cast<std::ptrdiff_t>(query_size));
  split.truth_half.assign(pool.begin() + static_cast<std::ptrdiff_t>(query_size),
                          pool.end());
  std::sort(split.query_half.begin(), split.query_half.end());
  std::sort(split.truth_half.begin(), split.truth_half.end());
  return split;
}

std::size_t EvalOptions::max_n() const {
  return *std::max_element(n_values.begin(), n_values.end());
}

std::size_t EvalOptions::effective_pool() const {
  if (candidate_pool > 0) return candidate_pool;
  return std::max<std::size_t>(10 * max_n(), 100);
}

void EvalOptions::validate() const {
  if (n_values.empty()) {
    throw std::invalid_argument("evaluation: n_values must not be empty");
  }
  for (std::size_t n : n_values) {
    if (n == 0) throw std::invalid_argument("evaluation: n values must be >= 1");
  }
  if (!(head_fraction > 0.0 && head_fraction < 1.0)) {
    throw std::invalid_argument("evaluation: head_fraction must be in (0, 1)");
  }
  if (rerank) {
    if (rerank->gamma < 0.0 || rerank->gamma > 1.0) {
      throw std::invalid_argument("evaluation: gamma must be in [0, 1]");
    }
    if (rerank->category_smoothing < 0.0) {
      throw std::invalid_argument("evaluation: smoothing must be >= 0");
    }
  }
}

namespace {

bool query_reaches_training(const std::vector<std::string>& query,
                            const LibraryCorpus& training) {
  return std::any_of(query.begin(), query.end(), [&](const std::string& lib) {
    return training.find_library(lib).has_value();
  });
}

}  // namespace

std::vector<FoldRun> run_protocol(const LibraryCorpus& corpus,
                                  const FoldPlan& folds,
                                  const EvalOptions& options,
                                  const TrainingTransform& transform) {
  options.validate();
  if (folds.assignment.size() != corpus.project_count()) {
    throw std::invalid_argument("run_protocol: fold plan does not match corpus");
  }

  const std::size_t pool_size = options.effective_pool();
  PopularityModel full_popularity;
  if (options.head_tail_full_corpus) {
    full_popularity = compute_popularity(corpus, options.head_fraction);
  }

  std::vector<FoldRun> result;
  result.reserve(folds.k);
  for (std::size_t fold = 0; fold < folds.k; ++fold) {
    std::vector<std::size_t> train_projects;
    std::vector<std::size_t> test_projects;
    for (std::size_t p = 0; p < corpus.project_count(); ++p) {
      (folds.assignment[p] == fold ? test_projects : train_projects)
          .push_back(p);
    }

    LibraryCorpus training = project_subset(corpus, train_projects);
    if (transform) training = transform(training, fold);

    FoldRun fold_run;
    fold_run.fold = fold;
    fold_run.popularity =
        options.head_tail_full_corpus
            ? full_popularity
            : compute_popularity(training, options.head_fraction);

    const std::uint64_t train_seed =
        derive_seed(options.seed, "train/" + std::to_string(fold));
    auto recommender = make_recommender(options.algo, training, train_seed);

    for (std::size_t p : test_projects) {
      const std::string& project = corpus.project_id(p);
      if (training.find_project(project)) {
        throw std::logic_error("run_protocol: test project ended up in the "
                               "training corpus: " + project);
      }

      std::vector<std::string> libraries = corpus.library_ids_of(p);
      if (libraries.size() < 2) {
        ++fold_run.n_skipped_unsplittable;
        continue;
      }
      SplitResult split = split_query_groundtruth(
          libraries, derive_seed(options.seed, "split/" + project));
      if (!query_reaches_training(split.query_half, training)) {
        ++fold_run.n_skipped_cold;
        continue;
      }

      Query query{project, split.query_half};
      RankedList ranked = recommender->recommend(query, pool_size);
      fold_run.run.projects.push_back(ProjectRun{
          project, std::move(split.query_half), std::move(ranked),
          std::move(split.truth_half)});
    }
    result.push_back(std::move(fold_run));
  }
  if (options.rerank) {
    result = rerank_fold_runs(result, *options.rerank, options.max_n());
  }
  return result;
}

std::vector<FoldRun> rerank_fold_runs(const std::vector<FoldRun>& base,
                                      const RerankSettings& settings,
                                      std::size_t n_out) {
  if (n_out == 0) {
    throw std::invalid_argument("rerank_fold_runs: n_out must be >= 1");
  }
  std::vector<FoldRun> result = base;
  for (FoldRun& fold_run : result) {
    for (ProjectRun& project : fold_run.run.projects) {
      if (project.ranked.empty()) continue;
      project.ranked = normalize_scores(project.ranked);
      Query query{project.project_id, project.query};
      CategoryModel categories = category_priors(
          query, fold_run.popularity, settings.category_smoothing);
      assign_candidate_categories(categories, project.ranked,
                                  fold_run.popularity);
      RerankConfig config;
      config.gamma = settings.gamma;
      config.n_out = std::min(n_out, project.ranked.size());
      config.category_smoothing = settings.category_smoothing;
      project.ranked = xquad_rerank(project.ranked, categories, config);
    }
  }
  return result;
}

EvaluationReport summarize_folds(const LibraryCorpus& corpus,
                                 const std::vector<FoldRun>& fold_runs,
                                 const EvalOptions& options) {
  options.validate();
  const std::size_t top_n = options.max_n();

  EvaluationReport report;
  std::vector<std::size_t> pooled_head;
  std::vector<std::size_t> pooled_total;

  for (const FoldRun& fold_run : fold_runs) {
    FoldMetrics metrics;
    metrics.fold = fold_run.fold;
    metrics.n_evaluated = fold_run.run.projects.size();
    metrics.n_skipped_unsplittable = fold_run.n_skipped_unsplittable;
    metrics.n_skipped_cold = fold_run.n_skipped_cold;
    report.n_projects_evaluated += metrics.n_evaluated;
    report.n_skipped_unsplittable += metrics.n_skipped_unsplittable;
    report.n_skipped_cold += metrics.n_skipped_cold;

    if (metrics.n_evaluated > 0) {
      for (std::size_t n : options.n_values) {
        metrics.values["precision"][n] = precision_at_n(fold_run.run, n);
        metrics.values["recall"][n] = recall_at_n(fold_run.run, n);
        metrics.values["epc"][n] =
            options.epc_training_frequency
                ? epc_at_n(fold_run.run, n, fold_run.popularity)
                : epc_at_n(fold_run.run, n);
        metrics.values["coverage"][n] =
            coverage_at_n(fold_run.run, n, corpus.library_count());
        metrics.values["head_fraction"][n] =
            popularity_profile(fold_run.run, fold_run.popularity, n)
                .mean_head_fraction();
      }

      PopularityProfile profile =
          popularity_profile(fold_run.run, fold_run.popularity, top_n);
      if (profile.position_head_count.size() > pooled_head.size()) {
        pooled_head.resize(profile.position_head_count.size(), 0);
        pooled_total.resize(profile.position_head_count.size(), 0);
      }
      for (std::size_t r = 0; r < profile.position_head_count.size(); ++r) {
        pooled_head[r] += profile.position_head_count[r];
        pooled_total[r] += profile.position_total[r];
      }

      auto recs = fold_run.run.recommendation_counts(top_n);
      for (const auto& [library, count] : recs) {
        report.library_recommendations[library] += count;
      }
      auto truths = fold_run.run.ground_truth_counts();
      for (const auto& [library, count] : truths) {
        report.library_groundtruth[library] += count;
      }
    }
    report.folds.push_back(std::move(metrics));
  }

  report.position_head_fraction.resize(pooled_head.size(), 0.0);
  for (std::size_t r = 0; r < pooled_head.size(); ++r) {
    report.position_head_fraction[r] =
        pooled_total[r] == 0 ? 0.0
                             : static_cast<double>(pooled_head[r]) /
                                   static_cast<double>(pooled_total[r]);
  }

  // Mean over folds that evaluated at least one project.
  std::size_t live_folds = 0;
  for (const FoldMetrics& metrics : report.folds) {
    if (metrics.n_evaluated == 0) continue;
    ++live_folds;
    for (const auto& [name, by_n] : metrics.values) {
      for (const auto& [n, value] : by_n) {
        report.aggregate[name][n] += value;
      }
    }
  }
  if (live_folds > 0) {
    for (auto& [name, by_n] : report.aggregate) {
      for (auto& [n, value] : by_n) value /= static_cast<double>(live_folds);
    }
  }

  // Per-library counts over the whole universe; absent keys mean zero.
  PopularityModel full_popularity = compute_popularity(corpus, options.head_fraction);
  for (const std::string& library : corpus.library_ids()) {
    report.library_frequency[library] = full_popularity.freq(library);
    report.library_groundtruth.try_emplace(library, 0);
    report.library_recommendations.try_emplace(library, 0);
  }

  // Popularity-bias correlations: usage frequency and ground-truth demand
  // against how often each library actually gets recommended.
  std::vector<double> freq_vec;
  std::vector<double> truth_vec;
  std::vector<double> rec_vec;
  for (const std::string& library : corpus.library_ids()) {
    freq_vec.push_back(static_cast<double>(report.library_frequency[library]));
    truth_vec.push_back(
        static_cast<double>(report.library_groundtruth[library]));
    rec_vec.push_back(
        static_cast<double>(report.library_recommendations[library]));
  }
  auto correlate = [](const std::vector<double>& x,
                      const std::vector<double>& y) -> std::optional<double> {
    try {
      return spearman_rho(x, y);
    } catch (const std::domain_error&) {
      return std::nullopt;  // constant ranks, correlation undefined
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  };
  report.rho_frequency_recommendations = correlate(freq_vec, rec_vec);
  report.rho_groundtruth_recommendations = correlate(truth_vec, rec_vec);
  return report;
}

EvaluationReport run_evaluation(const LibraryCorpus& corpus,
                                const FoldPlan& folds,
                                const EvalOptions& options) {
  return summarize_folds(corpus, run_protocol(corpus, folds, options), options);
}

}  // namespace tplrec
