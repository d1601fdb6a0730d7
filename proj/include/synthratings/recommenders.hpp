#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthratings/dense.hpp"
#include "synthratings/interaction_set.hpp"
#include "synthratings/kernels.hpp"

namespace synthratings {

enum class Algorithm { Random, MostPopular, UserKNN, BPRMF, WRMF };

/// Short key used on the command line and in `rec.<key>.<param>`.
std::string_view algorithm_key(Algorithm algorithm);
/// Display name used in reports and tables.
std::string_view algorithm_label(Algorithm algorithm);
/// Accepts the key or the display name, case-insensitively.
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> all_algorithms();

struct Hyperparameters {
  std::size_t knn_neighbors = 80;

  std::size_t bpr_factors = 10;
  double bpr_learning_rate = 0.05;
  double bpr_regularization = 0.0025;
  /// Each epoch draws |train| triples.
  std::size_t bpr_epochs = 100;
  double bpr_init_stddev = 0.1;

  std::size_t wrmf_factors = 10;
  double wrmf_alpha = 1.0;
  double wrmf_regularization = 0.015;
  std::size_t wrmf_iterations = 15;
  double wrmf_init_stddev = 0.01;
  /// Record the objective after every half step (costs one extra pass each).
  bool wrmf_track_loss = false;

  /// Sets `rec.<algo>.<param>`, e.g. `rec.bprmf.factors`. Throws ArgumentError
  /// for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// A fitted top-N recommender over the item index space of its training matrix.
class Recommender {
 public:
  virtual ~Recommender() = default;

  Algorithm algorithm() const noexcept { return algorithm_; }
  const UserItemMatrix& train() const noexcept { return train_; }

  /// Writes a score for every item; returns false when the user cannot be
  /// served (personalized models and users without training interactions).
  virtual bool score(UserIndex user, std::span<double> scores) const = 0;

  /// Top-n items by descending score, ties by ascending index. Candidates are
  /// items seen in training minus the user's training items and `exclude`.
  /// Returns an empty list for users the model cannot serve.
  std::vector<ItemIndex> recommend(UserIndex user, std::size_t n, std::span<const ItemIndex> exclude = {}) const;

 protected:
  Recommender(Algorithm algorithm, const UserItemMatrix& train);

  bool has_history(UserIndex user) const noexcept {
    return user < train_.user_count() && train_.row_size(user) > 0;
  }

 private:
  Algorithm algorithm_;
  UserItemMatrix train_;
  std::vector<std::uint32_t> degrees_;
};

class RandomRecommender final : public Recommender {
 public:
  RandomRecommender(const UserItemMatrix& train, std::uint64_t seed);
  bool score(UserIndex user, std::span<double> scores) const override;

 private:
  std::uint64_t seed_;
};

class MostPopularRecommender final : public Recommender {
 public:
  explicit MostPopularRecommender(const UserItemMatrix& train);
  bool score(UserIndex user, std::span<double> scores) const override;
  std::span<const std::uint32_t> popularity() const noexcept { return popularity_; }

 private:
  std::vector<std::uint32_t> popularity_;
};

/// Sum of cosine similarities of the user's k nearest neighbors holding the item.
class UserKnnRecommender final : public Recommender {
 public:
  UserKnnRecommender(const UserItemMatrix& train, std::size_t neighbors, bool reference_kernels = false);
  bool score(UserIndex user, std::span<double> scores) const override;
  std::span<const kernels::Neighbor> neighbors(UserIndex user) const { return neighbors_.at(user); }

 private:
  std::vector<std::vector<kernels::Neighbor>> neighbors_;
};

struct BprTriple {
  UserIndex user;
  ItemIndex positive;
  ItemIndex negative;
};

/// Sum over triples of ln sigmoid(p_u.(q_i - q_j)) - reg/2 (|p_u|^2 + |q_i|^2 + |q_j|^2).
double bpr_objective(const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                     std::span<const BprTriple> triples, double regularization);

/// Analytic gradient of bpr_objective; outputs are resized and overwritten.
void bpr_gradient(const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                  std::span<const BprTriple> triples, double regularization, DenseMatrix& user_grad,
                  DenseMatrix& item_grad);

/// Matrix factorization trained by stochastic gradient ascent on the
/// pairwise ranking objective with uniformly sampled negatives.
class BprRecommender final : public Recommender {
 public:
  BprRecommender(const UserItemMatrix& train, const Hyperparameters& hp, std::uint64_t seed);
  bool score(UserIndex user, std::span<double> scores) const override;
  const DenseMatrix& user_factors() const noexcept { return users_; }
  const DenseMatrix& item_factors() const noexcept { return items_; }

 private:
  DenseMatrix users_;
  DenseMatrix items_;
};

/// sum_{u,i} (1 + alpha r_ui)(r_ui - x_u.y_i)^2 + lambda (|X|^2 + |Y|^2).
double wrmf_loss(const UserItemMatrix& train, const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                 double alpha, double lambda);

/// Weighted matrix factorization for implicit feedback fitted by alternating least squares.
class WrmfRecommender final : public Recommender {
 public:
  WrmfRecommender(const UserItemMatrix& train, const Hyperparameters& hp, std::uint64_t seed,
                  bool reference_kernels = false);
  bool score(UserIndex user, std::span<double> scores) const override;
  double predict(UserIndex user, ItemIndex item) const;
  const DenseMatrix& user_factors() const noexcept { return users_; }
  const DenseMatrix& item_factors() const noexcept { return items_; }
  /// Objective after each half step when tracking was requested.
  std::span<const double> loss_history() const noexcept { return loss_history_; }

 private:
  DenseMatrix users_;
  DenseMatrix items_;
  std::vector<double> loss_history_;
};

/// Throws ArgumentError when `train` is empty and the algorithm is not Random.
std::unique_ptr<Recommender> fit(Algorithm algorithm, const UserItemMatrix& train, const Hyperparameters& hp,
                                 std::uint64_t seed, bool reference_kernels = false);

}  // namespace synthratings
