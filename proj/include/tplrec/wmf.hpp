#pragma once

#include <Eigen/Dense>

#include "tplrec/recommenders.hpp"

namespace tplrec {

/// Adaptive-weight matrix factorization of the binary usage matrix.
///
/// Alternating least squares where an observed (project, library) cell of
/// library l carries confidence weight w(l) = (f_max / f(l))^a and every
/// unobserved cell weighs 1, so rarely used libraries are fit harder the
/// larger the exponent a. a = 0 recovers plain uniformly weighted ALS.
class WmfModel {
 public:
  struct Config {
    std::size_t factors = 32;
    std::size_t iterations = 15;
    double regularization = 0.1;
    double weight_exponent = 0.5;
  };

  static WmfModel train(const LibraryCorpus& corpus, const Config& config,
                        std::uint64_t seed);

  // Folds the query into factor space by a least-squares solve against its
  // known libraries, then scores all other libraries by inner product.
  // Throws ColdQueryError when no known library is in the training universe.
  RankedList recommend(const Query& query, std::size_t m) const;

  // Regularized weighted squared error after each ALS sweep.
  const std::vector<double>& objective_history() const { return objective_; }

  double library_weight(const std::string& library) const;
  std::size_t library_count() const { return libraries_.size(); }
  const Config& config() const { return config_; }

 private:
  WmfModel() = default;

  Eigen::VectorXd fold_in(const std::vector<std::size_t>& observed) const;

  Config config_;
  std::vector<std::string> libraries_;
  std::unordered_map<std::string, std::size_t> library_index_;
  std::vector<double> weights_;
  Eigen::MatrixXd user_factors_;  // projects x factors
  Eigen::MatrixXd item_factors_;  // libraries x factors
  std::vector<double> objective_;
};

class WmfRecommender : public Recommender {
 public:
  WmfRecommender(WmfModel model, std::uint64_t fingerprint = 0)
      : model_(std::move(model)) {
    fingerprint_ = fingerprint;
  }

  RankedList recommend(const Query& query, std::size_t m) const override {
    return model_.recommend(query, m);
  }
  Algorithm algorithm() const override { return Algorithm::wmf; }

  const WmfModel& model() const { return model_; }

 private:
  WmfModel model_;
};

// Free-function form matching the other recommenders.
WmfModel factorize_weighted(const LibraryCorpus& corpus, std::size_t factors,
                            std::size_t iterations, double regularization,
                            double weight_exponent, std::uint64_t seed);

}  // namespace tplrec
