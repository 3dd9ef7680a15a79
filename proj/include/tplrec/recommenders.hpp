#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tplrec/corpus.hpp"

namespace tplrec {

// Raised when a query shares no library with the training universe and the
// algorithm cannot produce a ranking for it.
struct ColdQueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Query half of a project's library set.
struct Query {
  std::string project_id;
  std::vector<std::string> known_libraries;  // non-empty, unique

  bool knows(const std::string& library) const;
};

struct ScoredLibrary {
  std::string library;
  double score = 0.0;

  friend bool operator==(const ScoredLibrary&, const ScoredLibrary&) = default;
};

// Ordered recommendation output: score descending, ties by ascending id.
using RankedList = std::vector<ScoredLibrary>;

// Enforces the canonical order (score desc, id asc).
void sort_ranked(RankedList& ranked);

// Rescales scores into a probability vector: shifts so the minimum is zero
// if any score is negative, then divides by the sum; a constant list maps to
// the uniform distribution. Order is untouched.
[[nodiscard]] RankedList normalize_scores(const RankedList& ranked);

enum class Algorithm { popularity, cf, assoc, wmf };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// Hyper-parameters for all four recommenders; unused fields are ignored by
/// the selected algorithm.
struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::cf;
  // cf
  std::size_t k_neighbors = 25;
  // assoc
  double min_support = 0.05;
  double min_confidence = 0.3;
  std::size_t max_antecedent = 2;
  // wmf
  std::size_t factors = 32;
  std::size_t iterations = 15;
  double regularization = 0.1;
  double weight_exponent = 0.5;
};

/// A trained model answering top-m queries. Implementations are immutable
/// after construction; concurrent recommend calls are safe.
class Recommender {
 public:
  virtual ~Recommender() = default;

  // Top-m candidates, never containing a known library. May return fewer
  // than m entries when candidates run out.
  virtual RankedList recommend(const Query& query, std::size_t m) const = 0;

  virtual Algorithm algorithm() const = 0;
  std::uint64_t training_fingerprint() const { return fingerprint_; }

 protected:
  std::uint64_t fingerprint_ = 0;
};

class PopularityRecommender : public Recommender {
 public:
  PopularityRecommender(PopularityModel pop, std::uint64_t fingerprint = 0);

  RankedList recommend(const Query& query, std::size_t m) const override;
  Algorithm algorithm() const override { return Algorithm::popularity; }

  const PopularityModel& popularity() const { return pop_; }

 private:
  PopularityModel pop_;
};

/// User-based collaborative filtering over binary usage vectors: cosine
/// similarity against every training project, candidate scores summed over
/// the top-k neighbors. Falls back to popularity order when the query is
/// orthogonal to the whole training set. Only positively scored candidates
/// are returned.
class CfRecommender : public Recommender {
 public:
  CfRecommender(const LibraryCorpus& training, std::size_t k_neighbors);

  RankedList recommend(const Query& query, std::size_t m) const override;
  Algorithm algorithm() const override { return Algorithm::cf; }

 private:
  LibraryCorpus training_;
  PopularityModel pop_;  // fallback ranking
  std::size_t k_neighbors_;
};

// --- association rules -----------------------------------------------------

struct AssociationRule {
  std::vector<std::string> antecedent;  // sorted, never contains consequent
  std::string consequent;
  double support = 0.0;     // of antecedent + consequent
  double confidence = 0.0;  // support(ant + cons) / support(ant)
};

struct RuleSet {
  std::vector<AssociationRule> rules;
};

// Apriori mining, exhaustive over frequent itemsets of size up to
// max_antecedent + 1.
RuleSet mine_association_rules(const LibraryCorpus& corpus, double min_support,
                               double min_confidence,
                               std::size_t max_antecedent);

/// Rule-firing hybrid: candidates scored by the maximum confidence among
/// rules whose antecedent is covered by the query; short lists are padded
/// with popularity order (padding scores stay strictly below every fired
/// confidence).
class AssocRecommender : public Recommender {
 public:
  AssocRecommender(RuleSet rules, PopularityModel pop,
                   std::uint64_t fingerprint = 0);

  RankedList recommend(const Query& query, std::size_t m) const override;
  Algorithm algorithm() const override { return Algorithm::assoc; }

  const RuleSet& rules() const { return rules_; }

 private:
  RuleSet rules_;
  PopularityModel pop_;
};

// Trains the model selected by config.algorithm on the given corpus.
std::unique_ptr<Recommender> make_recommender(const AlgorithmConfig& config,
                                              const LibraryCorpus& training,
                                              std::uint64_t seed);

// Free-function forms of the individual recommenders.
RankedList recommend_popularity(const PopularityModel& pop, const Query& query,
                                std::size_t m);
RankedList recommend_cf(const LibraryCorpus& corpus, const Query& query,
                        std::size_t k_neighbors, std::size_t m);
RankedList recommend_assoc(const RuleSet& rules, const PopularityModel& pop,
                           const Query& query, std::size_t m);

}  // namespace tplrec
