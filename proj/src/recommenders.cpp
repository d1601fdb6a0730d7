#include "synthratings/recommenders.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>

#include "synthratings/error.hpp"
#include "synthratings/random.hpp"

namespace synthratings {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  out.erase(std::remove_if(out.begin(), out.end(), [](unsigned char c) { return c == ' ' || c == '_' || c == '-'; }),
            out.end());
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ArgumentError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ArgumentError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

void fill_normal(DenseMatrix& m, double stddev, Rng& rng) {
  for (double& v : m.data) v = stddev * rng.normal();
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Adds the gradient of one triple's term to the three parameter rows.
void accumulate_triple(std::span<const double> pu, std::span<const double> qi, std::span<const double> qj,
                       double reg, std::span<double> gu, std::span<double> gi, std::span<double> gj) {
  double x = 0.0;
  for (std::size_t f = 0; f < pu.size(); ++f) x += pu[f] * (qi[f] - qj[f]);
  const double e = sigmoid(-x);
  for (std::size_t f = 0; f < pu.size(); ++f) {
    gu[f] += e * (qi[f] - qj[f]) - reg * pu[f];
    gi[f] += e * pu[f] - reg * qi[f];
    gj[f] += -e * pu[f] - reg * qj[f];
  }
}

}  // namespace

std::string_view algorithm_key(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Random: return "random";
    case Algorithm::MostPopular: return "mostpop";
    case Algorithm::UserKNN: return "userknn";
    case Algorithm::BPRMF: return "bprmf";
    case Algorithm::WRMF: return "wrmf";
  }
  return "?";
}

std::string_view algorithm_label(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Random: return "Random";
    case Algorithm::MostPopular: return "Most Popular";
    case Algorithm::UserKNN: return "User KNN";
    case Algorithm::BPRMF: return "BPRMF";
    case Algorithm::WRMF: return "WRMF";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  const std::string key = lower(name);
  for (const auto a : all_algorithms()) {
    if (key == algorithm_key(a) || key == lower(algorithm_label(a))) return a;
  }
  if (key == "mostpopular" || key == "popular") return Algorithm::MostPopular;
  if (key == "knn") return Algorithm::UserKNN;
  throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::Random, Algorithm::MostPopular, Algorithm::UserKNN, Algorithm::BPRMF, Algorithm::WRMF};
}

void Hyperparameters::set(std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "rec.userknn.neighbors" || k == "rec.userknn.k") {
    knn_neighbors = parse_count(key, value);
  } else if (k == "rec.bprmf.factors") {
    bpr_factors = parse_count(key, value);
  } else if (k == "rec.bprmf.learning_rate") {
    bpr_learning_rate = parse_real(key, value);
  } else if (k == "rec.bprmf.regularization") {
    bpr_regularization = parse_real(key, value);
  } else if (k == "rec.bprmf.epochs") {
    bpr_epochs = parse_count(key, value);
  } else if (k == "rec.bprmf.init_stddev") {
    bpr_init_stddev = parse_real(key, value);
  } else if (k == "rec.wrmf.factors") {
    wrmf_factors = parse_count(key, value);
  } else if (k == "rec.wrmf.alpha") {
    wrmf_alpha = parse_real(key, value);
  } else if (k == "rec.wrmf.regularization") {
    wrmf_regularization = parse_real(key, value);
  } else if (k == "rec.wrmf.iterations") {
    wrmf_iterations = parse_count(key, value);
  } else if (k == "rec.wrmf.init_stddev") {
    wrmf_init_stddev = parse_real(key, value);
  } else {
    throw ArgumentError("unknown hyperparameter '" + k + "'");
  }
  if (knn_neighbors == 0 || bpr_factors == 0 || wrmf_factors == 0) {
    throw ArgumentError(k + " must be positive");
  }
}

Recommender::Recommender(Algorithm algorithm, const UserItemMatrix& train)
    : algorithm_(algorithm), train_(train), degrees_(train.item_degrees()) {}

std::vector<ItemIndex> Recommender::recommend(UserIndex user, std::size_t n, std::span<const ItemIndex> exclude) const {
  std::vector<double> scores(train_.item_count(), 0.0);
  if (n == 0 || !score(user, scores)) return {};
  std::vector<std::uint8_t> blocked(train_.item_count(), 0);
  if (user < train_.user_count()) {
    for (const ItemIndex i : train_.row(user)) blocked[i] = 1;
  }
  for (const ItemIndex i : exclude) {
    if (i < blocked.size()) blocked[i] = 1;
  }
  std::vector<ItemIndex> candidates;
  candidates.reserve(train_.item_count());
  for (ItemIndex i = 0; i < train_.item_count(); ++i) {
    if (degrees_[i] > 0 && !blocked[i]) candidates.push_back(i);
  }
  const auto better = [&scores](ItemIndex a, ItemIndex b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  };
  const std::size_t take = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                    better);
  candidates.resize(take);
  return candidates;
}

RandomRecommender::RandomRecommender(const UserItemMatrix& train, std::uint64_t seed)
    : Recommender(Algorithm::Random, train), seed_(seed) {}

bool RandomRecommender::score(UserIndex user, std::span<double> scores) const {
  Rng rng(derive_seed(seed_, user));
  for (double& s : scores) s = rng.uniform();
  return true;
}

MostPopularRecommender::MostPopularRecommender(const UserItemMatrix& train)
    : Recommender(Algorithm::MostPopular, train), popularity_(train.item_degrees()) {}

bool MostPopularRecommender::score(UserIndex, std::span<double> scores) const {
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = popularity_[i];
  return true;
}

UserKnnRecommender::UserKnnRecommender(const UserItemMatrix& train, std::size_t neighbors, bool reference_kernels)
    : Recommender(Algorithm::UserKNN, train),
      neighbors_(reference_kernels ? kernels::cosine_neighbors_reference(train, neighbors)
                                   : kernels::cosine_neighbors(train, neighbors)) {}

bool UserKnnRecommender::score(UserIndex user, std::span<double> scores) const {
  if (!has_history(user)) return false;
  std::fill(scores.begin(), scores.end(), 0.0);
  for (const auto& [v, sim] : neighbors_[user]) {
    for (const ItemIndex i : train().row(v)) scores[i] += sim;
  }
  return true;
}

double bpr_objective(const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                     std::span<const BprTriple> triples, double regularization) {
  double total = 0.0;
  for (const auto& t : triples) {
    const auto pu = user_factors.row(t.user);
    const auto qi = item_factors.row(t.positive);
    const auto qj = item_factors.row(t.negative);
    double x = 0.0;
    for (std::size_t f = 0; f < pu.size(); ++f) x += pu[f] * (qi[f] - qj[f]);
    // ln sigmoid(x) = -log1p(exp(-x)), evaluated stably
    const double log_sig = x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
    total += log_sig - 0.5 * regularization * (dot(pu, pu) + dot(qi, qi) + dot(qj, qj));
  }
  return total;
}

void bpr_gradient(const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                  std::span<const BprTriple> triples, double regularization, DenseMatrix& user_grad,
                  DenseMatrix& item_grad) {
  user_grad = DenseMatrix(user_factors.rows, user_factors.cols);
  item_grad = DenseMatrix(item_factors.rows, item_factors.cols);
  for (const auto& t : triples) {
    accumulate_triple(user_factors.row(t.user), item_factors.row(t.positive), item_factors.row(t.negative),
                      regularization, user_grad.row(t.user), item_grad.row(t.positive), item_grad.row(t.negative));
  }
}

BprRecommender::BprRecommender(const UserItemMatrix& train, const Hyperparameters& hp, std::uint64_t seed)
    : Recommender(Algorithm::BPRMF, train),
      users_(train.user_count(), hp.bpr_factors),
      items_(train.item_count(), hp.bpr_factors) {
  Rng rng(derive_seed(seed, 0x627072));
  fill_normal(users_, hp.bpr_init_stddev, rng);
  fill_normal(items_, hp.bpr_init_stddev, rng);

  std::vector<UserIndex> owner;
  owner.reserve(train.nnz());
  for (UserIndex u = 0; u < train.user_count(); ++u) owner.insert(owner.end(), train.row_size(u), u);
  std::vector<ItemIndex> catalog;
  const auto degrees = train.item_degrees();
  for (ItemIndex i = 0; i < train.item_count(); ++i) {
    if (degrees[i] > 0) catalog.push_back(i);
  }
  std::vector<std::size_t> offsets(train.user_count() + 1, 0);
  for (UserIndex u = 0; u < train.user_count(); ++u) offsets[u + 1] = offsets[u] + train.row_size(u);

  const std::size_t f = hp.bpr_factors;
  std::vector<double> gu(f);
  std::vector<double> gi(f);
  std::vector<double> gj(f);
  const std::uint64_t steps = static_cast<std::uint64_t>(hp.bpr_epochs) * train.nnz();
  for (std::uint64_t step = 0; step < steps; ++step) {
    const std::size_t pos = rng.below(train.nnz());
    const UserIndex u = owner[pos];
    if (train.row_size(u) >= catalog.size()) continue;
    const ItemIndex i = train.row(u)[pos - offsets[u]];
    ItemIndex j = 0;
    do {
      j = catalog[rng.below(catalog.size())];
    } while (train.contains(u, j));
    std::fill(gu.begin(), gu.end(), 0.0);
    std::fill(gi.begin(), gi.end(), 0.0);
    std::fill(gj.begin(), gj.end(), 0.0);
    accumulate_triple(users_.row(u), items_.row(i), items_.row(j), hp.bpr_regularization, gu, gi, gj);
    auto pu = users_.row(u);
    auto qi = items_.row(i);
    auto qj = items_.row(j);
    for (std::size_t k = 0; k < f; ++k) {
      pu[k] += hp.bpr_learning_rate * gu[k];
      qi[k] += hp.bpr_learning_rate * gi[k];
      qj[k] += hp.bpr_learning_rate * gj[k];
    }
  }
}

bool BprRecommender::score(UserIndex user, std::span<double> scores) const {
  if (!has_history(user)) return false;
  const auto pu = users_.row(user);
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = dot(pu, items_.row(i));
  return true;
}

double wrmf_loss(const UserItemMatrix& train, const DenseMatrix& user_factors, const DenseMatrix& item_factors,
                 double alpha, double lambda) {
  const std::size_t f = item_factors.cols;
  // Unobserved cells contribute (x.y)^2 = x^T (Y^T Y) x summed over all items;
  // observed cells then swap that term for their weighted residual.
  DenseMatrix g(f, f);
  for (std::size_t j = 0; j < item_factors.rows; ++j) {
    const auto y = item_factors.row(j);
    for (std::size_t a = 0; a < f; ++a) {
      for (std::size_t b = 0; b < f; ++b) g(a, b) += y[a] * y[b];
    }
  }
  double loss = 0.0;
  for (UserIndex u = 0; u < train.user_count(); ++u) {
    const auto x = user_factors.row(u);
    for (std::size_t a = 0; a < f; ++a) loss += x[a] * dot(g.row(a), x);
    for (const ItemIndex i : train.row(u)) {
      const double s = dot(x, item_factors.row(i));
      loss += (1.0 + alpha) * (1.0 - s) * (1.0 - s) - s * s;
    }
  }
  loss += lambda * (dot(user_factors.data, user_factors.data) + dot(item_factors.data, item_factors.data));
  return loss;
}

WrmfRecommender::WrmfRecommender(const UserItemMatrix& train, const Hyperparameters& hp, std::uint64_t seed,
                                 bool reference_kernels)
    : Recommender(Algorithm::WRMF, train),
      users_(train.user_count(), hp.wrmf_factors),
      items_(train.item_count(), hp.wrmf_factors) {
  Rng rng(derive_seed(seed, 0x77726d66));
  fill_normal(items_, hp.wrmf_init_stddev, rng);
  const UserItemMatrix by_item = train.transpose();
  const auto step = reference_kernels ? kernels::als_half_step_reference : kernels::als_half_step;
  for (std::size_t it = 0; it < hp.wrmf_iterations; ++it) {
    step(train, items_, hp.wrmf_alpha, hp.wrmf_regularization, users_);
    if (hp.wrmf_track_loss) {
      loss_history_.push_back(wrmf_loss(train, users_, items_, hp.wrmf_alpha, hp.wrmf_regularization));
    }
    step(by_item, users_, hp.wrmf_alpha, hp.wrmf_regularization, items_);
    if (hp.wrmf_track_loss) {
      loss_history_.push_back(wrmf_loss(train, users_, items_, hp.wrmf_alpha, hp.wrmf_regularization));
    }
  }
}

double WrmfRecommender::predict(UserIndex user, ItemIndex item) const {
  return dot(users_.row(user), items_.row(item));
}

bool WrmfRecommender::score(UserIndex user, std::span<double> scores) const {
  if (!has_history(user)) return false;
  const auto x = users_.row(user);
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = dot(x, items_.row(i));
  return true;
}

std::unique_ptr<Recommender> fit(Algorithm algorithm, const UserItemMatrix& train, const Hyperparameters& hp,
                                 std::uint64_t seed, bool reference_kernels) {
  if (algorithm != Algorithm::Random && train.nnz() == 0) {
    throw ArgumentError(std::string(algorithm_label(algorithm)) + " needs a non-empty training set");
  }
  switch (algorithm) {
    case Algorithm::Random: return std::make_unique<RandomRecommender>(train, seed);
    case Algorithm::MostPopular: return std::make_unique<MostPopularRecommender>(train);
    case Algorithm::UserKNN: return std::make_unique<UserKnnRecommender>(train, hp.knn_neighbors, reference_kernels);
    case Algorithm::BPRMF: return std::make_unique<BprRecommender>(train, hp, seed);
    case Algorithm::WRMF: return std::make_unique<WrmfRecommender>(train, hp, seed, reference_kernels);
  }
  throw ArgumentError("unknown algorithm");
}

}  // namespace synthratings
