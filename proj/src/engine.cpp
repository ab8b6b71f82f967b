#include "transduct/engine.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "transduct/errors.hpp"
#include "transduct/numerics.hpp"

namespace transduct::engine {

using numerics::kLogZero;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

// Grid coordinates for model ids, without the round-off tail of the arithmetic.
std::string label(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return {buf, res.ptr};
}

bool matches(Family family, const ModelParams& params) {
  switch (family) {
    case Family::binomial_p_grid:
      return std::holds_alternative<BinomialRate>(params);
    case Family::normal_grid:
      return std::holds_alternative<NormalParams>(params);
    case Family::normal_outlier_mixture_grid:
      return std::holds_alternative<MixtureParams>(params);
    case Family::tabulated_discrete:
      return std::holds_alternative<TabulatedParams>(params);
  }
  return false;
}

void validate_normal(const NormalParams& p) {
  if (!std::isfinite(p.mean) || !(p.variance > 0.0) || !std::isfinite(p.variance)) {
    throw DomainError("normal model needs a finite mean and a positive finite variance");
  }
}

void validate_mixture(const MixtureParams& p) {
  validate_normal(p.normal);
  if (!(p.outlier_prob >= 0.0 && p.outlier_prob < 1.0)) {
    throw DomainError("outlier probability must lie in [0, 1), got " + shortest(p.outlier_prob));
  }
  if (!(p.outlier_support.lo < p.outlier_support.hi) || !std::isfinite(p.outlier_support.lo) ||
      !std::isfinite(p.outlier_support.hi)) {
    throw DomainError("outlier support needs finite lo < hi");
  }
}

void validate_params(const ModelParams& params) {
  std::visit(overloaded{
                 [](const BinomialRate& b) {
                   if (!(b.p > 0.0 && b.p < 1.0)) {
                     throw DomainError("binomial rate must lie in (0, 1), got " + shortest(b.p));
                   }
                 },
                 [](const NormalParams& n) { validate_normal(n); },
                 [](const MixtureParams& m) { validate_mixture(m); },
                 [](const TabulatedParams& t) {
                   if (t.log_probs.empty()) throw DomainError("tabulated model has no outcomes");
                   for (double lp : t.log_probs) {
                     if (std::isnan(lp) || lp > 0.0) {
                       throw DomainError("tabulated log probability must be <= 0");
                     }
                   }
                   if (std::fabs(std::exp(numerics::log_sum_exp(t.log_probs)) - 1.0) > 1e-9) {
                     throw DomainError("tabulated probabilities must sum to 1");
                   }
                 },
             },
             params);
}

std::vector<double> posterior_log_weights(const ModelSpace& space, const DataBatch& observed) {
  std::vector<double> weights;
  weights.reserve(space.size());
  for (const auto& model : space.models()) {
    weights.push_back(model.log_prior == kLogZero
                          ? kLogZero
                          : model.log_prior + batch_log_likelihood(model.params, observed));
  }
  if (numerics::log_sum_exp(weights) == kLogZero) {
    throw ImpossibleDataError("observed data has zero likelihood under every model");
  }
  return weights;
}

// sum_theta exp(weight_theta) p(x | theta) per outcome, in log scale, with
// the weights assumed normalized.
std::vector<double> mix(const ModelSpace& space, std::span<const double> log_weights,
                        const std::vector<Datum>& outcomes) {
  std::vector<double> result;
  result.reserve(outcomes.size());
  std::vector<double> terms(space.size());
  for (const auto& x : outcomes) {
    for (std::size_t i = 0; i < space.size(); ++i) {
      terms[i] = log_weights[i] == kLogZero
                     ? kLogZero
                     : log_weights[i] + log_likelihood(space[i].params, x);
    }
    result.push_back(numerics::log_sum_exp(terms));
  }
  return result;
}

std::vector<double> axis(Interval range, std::size_t size, const char* name) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    throw DomainError(std::string(name) + " range must be finite");
  }
  if (size == 1) {
    if (range.lo != range.hi) {
      throw DomainError(std::string(name) + " axis of size 1 needs lo == hi");
    }
    return {range.lo};
  }
  if (size < 2 || !(range.lo < range.hi)) {
    throw DomainError(std::string(name) + " axis needs size >= 2 and lo < hi");
  }
  std::vector<double> points(size);
  const double step = (range.hi - range.lo) / static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) points[i] = range.lo + step * static_cast<double>(i);
  points.back() = range.hi;
  return points;
}

double variance_prior(GridPrior prior, double variance) {
  switch (prior) {
    case GridPrior::uniform:
      return 0.0;
    case GridPrior::inverse_variance:
      return -std::log(variance);
    case GridPrior::reference:
      break;
  }
  throw DomainError("normal grids support uniform or inverse-variance priors");
}

struct WeightedMoments {
  std::vector<double> weights;
  std::vector<MomentPair> per_model;
};

WeightedMoments weighted_moments(const ModelSpace& space, const DataBatch& observed,
                                 std::int64_t future_trials) {
  const auto post = posterior(space, observed);
  WeightedMoments out;
  for (const auto& model : post.models()) {
    out.weights.push_back(std::exp(model.log_prior));
    out.per_model.push_back(model_moments(model.params, space, future_trials));
  }
  return out;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::binomial_p_grid:
      return "binomial-p-grid";
    case Family::normal_grid:
      return "normal-grid";
    case Family::normal_outlier_mixture_grid:
      return "normal-outlier-mixture-grid";
    case Family::tabulated_discrete:
      return "tabulated-discrete";
  }
  return "unknown";
}

ModelSpace::ModelSpace(Family family, std::vector<Model> models, std::vector<double> outcome_values)
    : family_(family), models_(std::move(models)), outcome_values_(std::move(outcome_values)) {
  if (models_.empty()) throw DomainError("ModelSpace: no models");
  std::vector<double> priors;
  priors.reserve(models_.size());
  for (const auto& m : models_) {
    if (!matches(family_, m.params)) {
      throw DomainError("ModelSpace: model '" + m.id + "' is not of family " + to_string(family_));
    }
    validate_params(m.params);
    priors.push_back(m.log_prior);
  }
  if (family_ == Family::tabulated_discrete) {
    const auto width = std::get<TabulatedParams>(models_.front().params).log_probs.size();
    for (const auto& m : models_) {
      if (std::get<TabulatedParams>(m.params).log_probs.size() != width) {
        throw DomainError("ModelSpace: tabulated models disagree on the outcome count");
      }
    }
    if (!outcome_values_.empty() && outcome_values_.size() != width) {
      throw DomainError("ModelSpace: outcome_values length does not match the tables");
    }
  }
  const double total = numerics::log_sum_exp(priors);
  if (total == kLogZero) throw DomainError("ModelSpace: every prior weight is zero");
  for (auto& m : models_) {
    if (m.log_prior != kLogZero) m.log_prior -= total;
  }
}

std::vector<double> ModelSpace::log_weights() const {
  std::vector<double> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(m.log_prior);
  return out;
}

ModelSpace ModelSpace::reweighted(std::span<const double> log_weights) const {
  if (log_weights.size() != models_.size()) {
    throw DomainError("ModelSpace::reweighted: weight count mismatch");
  }
  auto models = models_;
  for (std::size_t i = 0; i < models.size(); ++i) models[i].log_prior = log_weights[i];
  return {family_, std::move(models), outcome_values_};
}

double log_likelihood(const ModelParams& params, const Datum& datum) {
  return std::visit(
      overloaded{
          [](const BinomialRate& b, const Count& c) {
            return binomial::binomial_log_pmf(c.r, {c.n, b.p});
          },
          [](const NormalParams& n, double x) { return normal_log_density(x, n); },
          [](const MixtureParams& m, double x) { return mixture_outlier_log_likelihood(x, m); },
          [](const TabulatedParams& t, const Symbol& s) {
            if (s.index >= t.log_probs.size()) {
              throw DomainError("symbol #" + std::to_string(s.index) + " outside the table");
            }
            return t.log_probs[s.index];
          },
          [](const auto&, const auto&) -> double {
            throw DomainError("datum kind does not fit the model family");
          },
      },
      params, datum);
}

double batch_log_likelihood(const ModelParams& params, const DataBatch& batch) {
  double total = 0.0;
  for (const auto& d : batch) {
    total += log_likelihood(params, d);
    if (total == kLogZero) break;
  }
  return total;
}

MomentPair model_moments(const ModelParams& params, const ModelSpace& space,
                         std::int64_t future_trials) {
  return std::visit(
      overloaded{
          [&](const BinomialRate& b) {
            if (future_trials < 1) throw DomainError("future_trials must be >= 1");
            return MomentPair::from_split(b.p,
                                          b.p * (1.0 - b.p) / static_cast<double>(future_trials),
                                          0.0);
          },
          [](const NormalParams& n) { return MomentPair::from_split(n.mean, n.variance, 0.0); },
          [](const MixtureParams& m) {
            const double q = m.outlier_prob;
            const double centre = 0.5 * (m.outlier_support.lo + m.outlier_support.hi);
            const double width = m.outlier_support.hi - m.outlier_support.lo;
            const double mean = (1.0 - q) * m.normal.mean + q * centre;
            const double gap = m.normal.mean - centre;
            const double variance =
                (1.0 - q) * m.normal.variance + q * width * width / 12.0 + q * (1.0 - q) * gap * gap;
            return MomentPair::from_split(mean, variance, 0.0);
          },
          [&](const TabulatedParams& t) {
            const auto& values = space.outcome_values();
            if (values.size() != t.log_probs.size()) {
              throw DomainError("tabulated moments need outcome_values");
            }
            numerics::CompensatedSum mean;
            for (std::size_t k = 0; k < values.size(); ++k) {
              mean.add(std::exp(t.log_probs[k]) * values[k]);
            }
            numerics::CompensatedSum var;
            for (std::size_t k = 0; k < values.size(); ++k) {
              const double d = values[k] - mean.value();
              var.add(std::exp(t.log_probs[k]) * d * d);
            }
            return MomentPair::from_split(mean.value(), var.value(), 0.0);
          },
      },
      params);
}

ModelSpace posterior(const ModelSpace& space, const DataBatch& observed) {
  return space.reweighted(posterior_log_weights(space, observed));
}

PredictiveDistribution prior_predictive(const ModelSpace& space,
                                        const std::vector<Datum>& outcomes) {
  return {outcomes, mix(space, space.log_weights(), outcomes), PredictiveKind::prior_predictive};
}

PredictiveDistribution posterior_predictive(const ModelSpace& space, const DataBatch& observed,
                                            const std::vector<Datum>& outcomes) {
  const auto weights =
      observed.empty() ? space.log_weights() : posterior(space, observed).log_weights();
  return {outcomes, mix(space, weights, outcomes), PredictiveKind::posterior_predictive};
}

PredictiveDistribution posterior_predictive_joint(const ModelSpace& space,
                                                  const DataBatch& observed,
                                                  const std::vector<Datum>& outcomes) {
  const auto old_terms = posterior_log_weights(space, observed);
  const double evidence = numerics::log_sum_exp(old_terms);
  std::vector<double> log_probs;
  log_probs.reserve(outcomes.size());
  std::vector<double> joint(space.size());
  for (const auto& x : outcomes) {
    for (std::size_t i = 0; i < space.size(); ++i) {
      joint[i] = old_terms[i] == kLogZero ? kLogZero
                                          : old_terms[i] + log_likelihood(space[i].params, x);
    }
    log_probs.push_back(numerics::log_sum_exp(joint) - evidence);
  }
  return {outcomes, std::move(log_probs), PredictiveKind::posterior_predictive};
}

MapSelection map_model(const ModelSpace& space, const DataBatch& observed) {
  const auto weights = posterior_log_weights(space, observed);
  std::size_t best = 0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > weights[best]) best = i;
  }
  bool tie = false;
  for (std::size_t i = best + 1; i < weights.size(); ++i) {
    if (weights[i] == weights[best]) tie = true;
  }
  return {best, space[best].id, tie};
}

PredictiveDistribution abductive_predictive(const ModelSpace& space, const DataBatch& observed,
                                            const std::vector<Datum>& outcomes) {
  auto best = map_model(space, observed);
  std::vector<double> log_probs;
  log_probs.reserve(outcomes.size());
  for (const auto& x : outcomes) log_probs.push_back(log_likelihood(space[best.index].params, x));
  return {outcomes, std::move(log_probs), PredictiveKind::abductive, std::move(best)};
}

MomentPair predictive_moments(const ModelSpace& space, const DataBatch& observed,
                              std::int64_t future_trials) {
  const auto wm = weighted_moments(space, observed, future_trials);
  numerics::CompensatedSum mean;
  numerics::CompensatedSum within;
  for (std::size_t i = 0; i < wm.weights.size(); ++i) {
    mean.add(wm.weights[i] * wm.per_model[i].mean);
    within.add(wm.weights[i] * wm.per_model[i].variance);
  }
  numerics::CompensatedSum between;
  for (std::size_t i = 0; i < wm.weights.size(); ++i) {
    const double d = wm.per_model[i].mean - mean.value();
    between.add(wm.weights[i] * d * d);
  }
  return MomentPair::from_split(mean.value(), within.value(), between.value());
}

double predictive_excess_kurtosis(const ModelSpace& space, const DataBatch& observed) {
  if (space.family() != Family::normal_grid) {
    throw DomainError("predictive_excess_kurtosis needs a normal-grid space");
  }
  const auto moments = predictive_moments(space, observed);
  const auto wm = weighted_moments(space, observed, 1);
  // Fourth central moment of a normal mixture:
  //   sum w [d^4 + 6 d^2 s^2 + 3 s^4], d = mu - mean, s^2 = sigma^2
  numerics::CompensatedSum fourth;
  for (std::size_t i = 0; i < wm.weights.size(); ++i) {
    const double d = wm.per_model[i].mean - moments.mean;
    const double v = wm.per_model[i].variance;
    fourth.add(wm.weights[i] * (d * d * d * d + 6.0 * d * d * v + 3.0 * v * v));
  }
  return fourth.value() / (moments.variance * moments.variance) - 3.0;
}

ModelSpace binomial_grid_space(std::size_t size, GridPrior prior) {
  if (size < 2) throw DomainError("binomial grid needs at least 2 points");
  if (prior == GridPrior::inverse_variance) {
    throw DomainError("binomial grids support uniform or reference priors");
  }
  std::vector<Model> models;
  models.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(size);
    const double w = prior == GridPrior::reference ? -std::log(p) - std::log1p(-p) : 0.0;
    models.push_back({"p=" + label(p), BinomialRate{p}, w});
  }
  return {Family::binomial_p_grid, std::move(models)};
}

ModelSpace binomial_grid_space(std::size_t size, const binomial::PriorSample& prior) {
  if (size < 2) throw DomainError("binomial grid needs at least 2 points");
  const double a = prior.alpha();
  const double b = prior.beta();
  std::vector<Model> models;
  models.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(size);
    const double w = (a - 1.0) * std::log(p) + (b - 1.0) * std::log1p(-p);
    models.push_back({"p=" + label(p), BinomialRate{p}, w});
  }
  return {Family::binomial_p_grid, std::move(models)};
}

std::vector<Datum> count_outcomes(std::int64_t n) {
  if (n < 1) throw DomainError("count_outcomes: n must be >= 1");
  std::vector<Datum> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t r = 0; r <= n; ++r) out.emplace_back(Count{r, n});
  return out;
}

ModelSpace normal_grid_space(Interval mean_range, Interval variance_range, GridSizes sizes,
                             GridPrior prior) {
  if (!(variance_range.lo > 0.0)) throw DomainError("variance range must be strictly positive");
  const auto means = axis(mean_range, sizes.means, "mean");
  const auto variances = axis(variance_range, sizes.variances, "variance");
  std::vector<Model> models;
  models.reserve(means.size() * variances.size());
  for (double mu : means) {
    for (double var : variances) {
      models.push_back({"mean=" + label(mu) + ",var=" + label(var), NormalParams{mu, var},
                        variance_prior(prior, var)});
    }
  }
  return {Family::normal_grid, std::move(models)};
}

ModelSpace outlier_mixture_grid_space(Interval mean_range, Interval variance_range,
                                      GridSizes sizes, std::span<const double> outlier_probs,
                                      Interval outlier_support, GridPrior prior) {
  if (!(variance_range.lo > 0.0)) throw DomainError("variance range must be strictly positive");
  if (outlier_probs.empty()) throw DomainError("outlier grid needs at least one probability");
  const auto means = axis(mean_range, sizes.means, "mean");
  const auto variances = axis(variance_range, sizes.variances, "variance");
  std::vector<Model> models;
  models.reserve(means.size() * variances.size() * outlier_probs.size());
  for (double mu : means) {
    for (double var : variances) {
      for (double q : outlier_probs) {
        models.push_back({"mean=" + label(mu) + ",var=" + label(var) + ",q=" + label(q),
                          MixtureParams{{mu, var}, q, outlier_support},
                          variance_prior(prior, var)});
      }
    }
  }
  return {Family::normal_outlier_mixture_grid, std::move(models)};
}

double normal_log_density(double x, const NormalParams& params) {
  validate_normal(params);
  const double d = x - params.mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * params.variance) + d * d / params.variance);
}

double mixture_outlier_log_likelihood(double datum, const MixtureParams& params) {
  validate_mixture(params);
  const double q = params.outlier_prob;
  if (q == 0.0) return normal_log_density(datum, params.normal);
  const double normal_term = std::log1p(-q) + normal_log_density(datum, params.normal);
  const auto& s = params.outlier_support;
  if (datum < s.lo || datum > s.hi) return normal_term;
  return numerics::log_add(normal_term, std::log(q) - std::log(s.hi - s.lo));
}

}  // namespace transduct::engine
