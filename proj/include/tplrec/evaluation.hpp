#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tplrec/corpus.hpp"
#include "tplrec/metrics.hpp"
#include "tplrec/recommenders.hpp"
#include "tplrec/rerank.hpp"

namespace tplrec {

struct UnsplittableProjectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Balanced k-fold assignment of projects, deterministic per seed.
struct FoldPlan {
  std::size_t k = 10;
  std::vector<std::size_t> assignment;  // project index -> fold in [0, k)
  std::uint64_t seed = 0;
};

FoldPlan make_folds(const LibraryCorpus& corpus, std::size_t k,
                    std::uint64_t seed);

struct SplitResult {
  std::vector<std::string> query_half;  // ceil(|libs| / 2) entries, sorted
  std::vector<std::string> truth_half;  // the rest, sorted
};

// Random disjoint halving of a project's library set. Throws
// UnsplittableProjectError for fewer than two libraries.
SplitResult split_query_groundtruth(const std::vector<std::string>& libraries,
                                    std::uint64_t seed);

/// Re-ranking knobs as the evaluation runner sees them.
struct RerankSettings {
  double gamma = 0.2;
  double category_smoothing = 1.0;
};

/// Everything run_evaluation needs beyond the corpus and the fold plan.
struct EvalOptions {
  AlgorithmConfig algo;
  std::vector<std::size_t> n_values = {5, 10, 15, 20};
  double head_fraction = 0.2;
  // Head/tail from the full corpus instead of each fold's training portion.
  bool head_tail_full_corpus = false;
  // EPC popularity from training frequency instead of recommendation counts.
  bool epc_training_frequency = false;
  std::size_t candidate_pool = 0;  // 0 = max(10 * max n, 100)
  std::uint64_t seed = 0;
  std::optional<RerankSettings> rerank;

  std::size_t max_n() const;
  std::size_t effective_pool() const;
  void validate() const;
};

/// Raw per-fold outcome of the cross-validation protocol.
struct FoldRun {
  std::size_t fold = 0;
  RunResult run;
  PopularityModel popularity;  // head/tail basis used for this fold
  std::size_t n_skipped_unsplittable = 0;
  std::size_t n_skipped_cold = 0;
};

// Optional hook replacing each fold's training corpus (the attack module
// injects fake projects here). Must keep genuine rows untouched.
using TrainingTransform =
    std::function<LibraryCorpus(const LibraryCorpus& training, std::size_t fold)>;

// Train-on-(k-1)/test-on-1 over all folds: split each test project's
// libraries into query and ground truth, collect ranked lists to the run's
// depth, never letting a test row into training. With options.rerank set,
// every stored list is the re-ranked one.
std::vector<FoldRun> run_protocol(const LibraryCorpus& corpus,
                                  const FoldPlan& folds,
                                  const EvalOptions& options,
                                  const TrainingTransform& transform = {});

// Re-ranks every stored list against its fold's head/tail split. Callers
// pass protocol output produced *without* options.rerank; this is how the
// before/after comparison reuses one training pass.
std::vector<FoldRun> rerank_fold_runs(const std::vector<FoldRun>& base,
                                      const RerankSettings& settings,
                                      std::size_t n_out);

using MetricTable = std::map<std::string, std::map<std::size_t, double>>;

struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t n_evaluated = 0;
  std::size_t n_skipped_unsplittable = 0;
  std::size_t n_skipped_cold = 0;
  MetricTable values;  // metric name -> n -> value
};

/// Full cross-validation result: per-fold tables, their means, and the
/// per-library frequency/ground-truth/recommendation counts behind the
/// popularity-bias correlations.
struct EvaluationReport {
  std::vector<FoldMetrics> folds;
  MetricTable aggregate;  // mean over folds with at least one project
  std::vector<double> position_head_fraction;  // pooled, at max n
  std::map<std::string, std::size_t> library_frequency;       // F
  std::map<std::string, std::size_t> library_groundtruth;     // G
  std::map<std::string, std::size_t> library_recommendations; // R at max n
  std::optional<double> rho_frequency_recommendations;
  std::optional<double> rho_groundtruth_recommendations;
  std::size_t n_projects_evaluated = 0;
  std::size_t n_skipped_unsplittable = 0;
  std::size_t n_skipped_cold = 0;
};

EvaluationReport run_evaluation(const LibraryCorpus& corpus,
                                const FoldPlan& folds,
                                const EvalOptions& options);

// Assembles the report from protocol output; exposed so the attack runner
// and tests can reuse it.
EvaluationReport summarize_folds(const LibraryCorpus& corpus,
                                 const std::vector<FoldRun>& fold_runs,
                                 const EvalOptions& options);

}  // namespace tplrec
