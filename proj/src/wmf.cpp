#include "tplrec/wmf.hpp"

#include <algorithm>
#include <cmath>

#include "tplrec/rng.hpp"

namespace tplrec {

WmfModel WmfModel::train(const LibraryCorpus& corpus, const Config& config,
                         std::uint64_t seed) {
  if (corpus.empty()) {
    throw std::invalid_argument("wmf: empty corpus");
  }
  if (config.factors == 0) {
    throw std::invalid_argument("wmf: factors must be positive");
  }
  if (!(config.regularization > 0.0)) {
    throw std::invalid_argument("wmf: regularization must be positive");
  }
  if (config.weight_exponent < 0.0) {
    throw std::invalid_argument("wmf: weight_exponent must be non-negative");
  }

  const std::size_t n_projects = corpus.project_count();
  const std::size_t n_libraries = corpus.library_count();
  const auto f = static_cast<Eigen::Index>(config.factors);

  WmfModel model;
  model.config_ = config;
  model.libraries_ = corpus.library_ids();
  for (std::size_t l = 0; l < n_libraries; ++l) {
    model.library_index_.emplace(model.libraries_[l], l);
  }

  // Per-library confidence weight w(l) = (f_max / f(l))^a.
  std::vector<std::size_t> counts(n_libraries, 0);
  for (std::size_t p = 0; p < n_projects; ++p) {
    for (std::size_t l : corpus.libraries_of(p)) ++counts[l];
  }
  const auto f_max =
      static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  model.weights_.resize(n_libraries);
  for (std::size_t l = 0; l < n_libraries; ++l) {
    model.weights_[l] =
        std::pow(f_max / static_cast<double>(counts[l]), config.weight_exponent);
  }

  // Library -> using projects, for the item half-sweep.
  std::vector<std::vector<std::size_t>> columns(n_libraries);
  for (std::size_t p = 0; p < n_projects; ++p) {
    for (std::size_t l : corpus.libraries_of(p)) columns[l].push_back(p);
  }

  Rng rng(derive_seed(seed, "wmf-init"));
  const double init_scale = 0.1 / std::sqrt(static_cast<double>(config.factors));
  auto& U = model.user_factors_;
  auto& V = model.item_factors_;
  U.resize(static_cast<Eigen::Index>(n_projects), f);
  V.resize(static_cast<Eigen::Index>(n_libraries), f);
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    for (Eigen::Index j = 0; j < f; ++j) {
      U(i, j) = (rng.uniform01() - 0.5) * init_scale;
    }
  }
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    for (Eigen::Index j = 0; j < f; ++j) {
      V(i, j) = (rng.uniform01() - 0.5) * init_scale;
    }
  }

  const double lambda = config.regularization;
  const Eigen::MatrixXd reg = lambda * Eigen::MatrixXd::Identity(f, f);

  auto objective = [&]() {
    // sum over all cells of c * (r - u.v)^2, written as the dense zero-target
    // term plus per-observation corrections.
    const Eigen::MatrixXd gram = V.transpose() * V;
    double value = (U * gram).cwiseProduct(U).sum();
    for (std::size_t p = 0; p < n_projects; ++p) {
      for (std::size_t l : corpus.libraries_of(p)) {
        const double pred =
            U.row(static_cast<Eigen::Index>(p))
                .dot(V.row(static_cast<Eigen::Index>(l)));
        const double residual = 1.0 - pred;
        value += model.weights_[l] * residual * residual - pred * pred;
      }
    }
    value += lambda * (U.squaredNorm() + V.squaredNorm());
    return value;
  };

  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    // Project half-sweep.
    {
      const Eigen::MatrixXd gram = V.transpose() * V;
      for (std::size_t p = 0; p < n_projects; ++p) {
        Eigen::MatrixXd a = gram + reg;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
        for (std::size_t l : corpus.libraries_of(p)) {
          const auto row = V.row(static_cast<Eigen::Index>(l));
          a.noalias() += (model.weights_[l] - 1.0) * row.transpose() * row;
          b.noalias() += model.weights_[l] * row.transpose();
        }
        U.row(static_cast<Eigen::Index>(p)) = a.ldlt().solve(b).transpose();
      }
    }
    // Library half-sweep.
    {
      const Eigen::MatrixXd gram = U.transpose() * U;
      for (std::size_t l = 0; l < n_libraries; ++l) {
        Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(f, f);
        Eigen::VectorXd sum_u = Eigen::VectorXd::Zero(f);
        for (std::size_t p : columns[l]) {
          const auto row = U.row(static_cast<Eigen::Index>(p));
          outer.noalias() += row.transpose() * row;
          sum_u.noalias() += row.transpose();
        }
        const Eigen::MatrixXd a =
            gram + (model.weights_[l] - 1.0) * outer + reg;
        const Eigen::VectorXd b = model.weights_[l] * sum_u;
        V.row(static_cast<Eigen::Index>(l)) = a.ldlt().solve(b).transpose();
      }
    }
    model.objective_.push_back(objective());
  }
  return model;
}

Eigen::VectorXd WmfModel::fold_in(
    const std::vector<std::size_t>& observed) const {
  const auto f = static_cast<Eigen::Index>(config_.factors);
  Eigen::MatrixXd a = item_factors_.transpose() * item_factors_ +
                      config_.regularization * Eigen::MatrixXd::Identity(f, f);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
  for (std::size_t l : observed) {
    const auto row = item_factors_.row(static_cast<Eigen::Index>(l));
    a.noalias() += (weights_[l] - 1.0) * row.transpose() * row;
    b.noalias() += weights_[l] * row.transpose();
  }
  return a.ldlt().solve(b);
}

RankedList WmfModel::recommend(const Query& query, std::size_t m) const {
  std::vector<std::size_t> observed;
  for (const auto& lib : query.known_libraries) {
    if (auto it = library_index_.find(lib); it != library_index_.end()) {
      observed.push_back(it->second);
    }
  }
  std::sort(observed.begin(), observed.end());
  if (observed.empty()) {
    throw ColdQueryError("query '" + query.project_id +
                         "' shares no library with the training corpus");
  }

  const Eigen::VectorXd user = fold_in(observed);
  const Eigen::VectorXd scores = item_factors_ * user;

  RankedList out;
  out.reserve(libraries_.size() - observed.size());
  // observed is exactly known ∩ universe, so skipping it removes every
  // known library that could appear as a candidate.
  for (std::size_t l = 0; l < libraries_.size(); ++l) {
    if (std::binary_search(observed.begin(), observed.end(), l)) continue;
    out.push_back({libraries_[l], scores(static_cast<Eigen::Index>(l))});
  }
  sort_ranked(out);
  if (out.size() > m) out.resize(m);
  return out;
}

double WmfModel::library_weight(const std::string& library) const {
  auto it = library_index_.find(library);
  if (it == library_index_.end()) {
    throw std::invalid_argument("unknown library: " + library);
  }
  return weights_[it->second];
}

WmfModel factorize_weighted(const LibraryCorpus& corpus, std::size_t factors,
                            std::size_t iterations, double regularization,
                            double weight_exponent, std::uint64_t seed) {
  WmfModel::Config config{factors, iterations, regularization, weight_exponent};
  return WmfModel::train(corpus, config, seed);
}

}  // namespace tplrec
