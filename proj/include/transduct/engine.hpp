#pragma once

// Finite model-space inference.
//
// A model is defined by its likelihood alone. A ModelSpace lists mutually
// exclusive, exhaustive models with log prior weights; continuous parameters
// enter as grids. Every family here is exchangeable: data are conditionally
// independent given the model, so a batch likelihood is the product of
// per-datum likelihoods and p(x_new | theta, x_old) = p(x_new | theta).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "transduct/binomial.hpp"
#include "transduct/predictive.hpp"

namespace transduct::engine {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Bernoulli-rate model: a datum Count{r, n} is binomial(n, p).
struct BinomialRate {
  double p = 0.5;
};

struct NormalParams {
  double mean = 0.0;
  double variance = 1.0;
};

// Each datum is normal with probability 1 - outlier_prob, otherwise uniform on outlier_support.
struct MixtureParams {
  NormalParams normal;
  double outlier_prob = 0.0;
  Interval outlier_support{-1.0, 1.0};
};

// Explicit pmf over Symbol indices 0..k-1, stored as log probabilities.
struct TabulatedParams {
  std::vector<double> log_probs;
};

using ModelParams = std::variant<BinomialRate, NormalParams, MixtureParams, TabulatedParams>;

enum class Family { binomial_p_grid, normal_grid, normal_outlier_mixture_grid, tabulated_discrete };

std::string to_string(Family family);

struct Model {
  std::string id;
  ModelParams params;
  double log_prior = 0.0;
};

// Immutable, ordered model space. Construction normalizes the log priors
// (any common offset is dropped) and checks that every model belongs to
// `family`. Model order is fixed and decides MAP ties.
class ModelSpace {
 public:
  // outcome_values gives the numeric value of each Symbol for tabulated
  // families; it is only needed by predictive_moments.
  ModelSpace(Family family, std::vector<Model> models, std::vector<double> outcome_values = {});

  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const std::vector<Model>& models() const noexcept { return models_; }
  [[nodiscard]] std::size_t size() const noexcept { return models_.size(); }
  [[nodiscard]] const Model& operator[](std::size_t i) const { return models_.at(i); }
  [[nodiscard]] const std::vector<double>& outcome_values() const noexcept {
    return outcome_values_;
  }
  [[nodiscard]] std::vector<double> log_weights() const;

  // Same models with new (unnormalized) log weights.
  [[nodiscard]] ModelSpace reweighted(std::span<const double> log_weights) const;

 private:
  Family family_;
  std::vector<Model> models_;
  std::vector<double> outcome_values_;
};

// ln p(datum | model). Throws DomainError if the datum kind does not fit the family.
[[nodiscard]] double log_likelihood(const ModelParams& params, const Datum& datum);

// Sum of per-datum log likelihoods.
[[nodiscard]] double batch_log_likelihood(const ModelParams& params, const DataBatch& batch);

// Per-model moments of a future datum. For binomial rates these are the
// moments of the proportion r/n in `future_trials` items.
[[nodiscard]] MomentPair model_moments(const ModelParams& params, const ModelSpace& space,
                                       std::int64_t future_trials = 1);

// p(theta | x) proportional to p(x | theta) p(theta). Throws ImpossibleDataError when every
// model with nonzero prior assigns the batch zero likelihood.
[[nodiscard]] ModelSpace posterior(const ModelSpace& space, const DataBatch& observed);

// p(x) = sum_theta p(x | theta) p(theta) for each outcome.
[[nodiscard]] PredictiveDistribution prior_predictive(const ModelSpace& space,
                                                      const std::vector<Datum>& outcomes);

// p(x_new | x_old) = sum_theta p(x_new | theta) p(theta | x_old).
[[nodiscard]] PredictiveDistribution posterior_predictive(const ModelSpace& space,
                                                          const DataBatch& observed,
                                                          const std::vector<Datum>& outcomes);

// Same quantity via the joint ratio
//   sum_theta p(x_new, x_old | theta) p(theta) / sum_theta p(x_old | theta) p(theta),
// without forming the posterior. Kept as an independent route for cross-checks.
[[nodiscard]] PredictiveDistribution posterior_predictive_joint(
    const ModelSpace& space, const DataBatch& observed, const std::vector<Datum>& outcomes);

// Most probable model a posteriori; ties go to the earliest model and are flagged.
[[nodiscard]] MapSelection map_model(const ModelSpace& space, const DataBatch& observed);

// Plug-in prediction with the MAP model alone.
[[nodiscard]] PredictiveDistribution abductive_predictive(const ModelSpace& space,
                                                          const DataBatch& observed,
                                                          const std::vector<Datum>& outcomes);

// Mean and variance of a future datum, split into E[V(x|theta)] and V[E(x|theta)].
[[nodiscard]] MomentPair predictive_moments(const ModelSpace& space, const DataBatch& observed,
                                            std::int64_t future_trials = 1);

// Excess kurtosis of the posterior predictive of a normal-grid space,
// from the per-model normal moments. Zero for a single model.
[[nodiscard]] double predictive_excess_kurtosis(const ModelSpace& space,
                                                const DataBatch& observed);

// ---- families -------------------------------------------------------------

enum class GridPrior {
  uniform,
  // Normal grids: weight proportional to 1 / variance.
  inverse_variance,
  // Binomial grids: weight proportional to p^-1 (1-p)^-1.
  reference,
};

// `size` midpoints (i + 1/2) / size on (0, 1).
[[nodiscard]] ModelSpace binomial_grid_space(std::size_t size, GridPrior prior);

// Midpoint grid weighted by the Beta(alpha, beta) posterior shape of `prior`.
[[nodiscard]] ModelSpace binomial_grid_space(std::size_t size, const binomial::PriorSample& prior);

// Count{r, n} for r = 0..n.
[[nodiscard]] std::vector<Datum> count_outcomes(std::int64_t n);

struct GridSizes {
  std::size_t means = 2;
  std::size_t variances = 2;
};

// Product grid over (mean, variance), endpoints inclusive. An axis of size 1
// must have a point range (lo == hi); larger axes need lo < hi.
[[nodiscard]] ModelSpace normal_grid_space(Interval mean_range, Interval variance_range,
                                           GridSizes sizes, GridPrior prior);

// As normal_grid_space, crossed with a list of outlier probabilities.
[[nodiscard]] ModelSpace outlier_mixture_grid_space(Interval mean_range, Interval variance_range,
                                                    GridSizes sizes,
                                                    std::span<const double> outlier_probs,
                                                    Interval outlier_support, GridPrior prior);

[[nodiscard]] double normal_log_density(double x, const NormalParams& params);

// ln[(1 - q) N(x; mean, variance) + q U(x; lo, hi)].
[[nodiscard]] double mixture_outlier_log_likelihood(double datum, const MixtureParams& params);

}  // namespace transduct::engine
