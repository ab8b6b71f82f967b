#include "transduct/runner.hpp"

#include <cmath>

#include "transduct/cotter.hpp"
#include "transduct/numerics.hpp"

namespace transduct::runner {

using report::Cell;
using report::Table;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t label_index(const std::vector<std::string>& labels, const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw scenario::ScenarioError(scenario::ScenarioError::Code::invalid_value, "/parameters/observed",
                                "unknown outcome '" + label + "'");
}

DataBatch real_batch(const std::vector<double>& values) {
  return {values.begin(), values.end()};
}

GridReport summarize_grid(const engine::ModelSpace& space, const DataBatch& observed) {
  GridReport out;
  out.models = space.size();
  out.observations = observed.size();
  out.transductive = engine::predictive_moments(space, observed);
  out.map = engine::map_model(space, observed);
  out.abductive = engine::model_moments(space[out.map.index].params, space);
  return out;
}

std::vector<Cell> moment_row(const std::string& method, const MomentPair& m) {
  return {method, m.mean, m.variance, m.within_model_variance, m.between_model_variance};
}

std::vector<Table> discrete_tables(const scenario::DiscreteParams& params) {
  const auto r = run_discrete(params);
  Table models{"models", {"model", "prior", "posterior"}, {}, {}};
  for (std::size_t i = 0; i < r.prior_space.size(); ++i) {
    models.rows.push_back({r.prior_space[i].id, std::exp(r.prior_space[i].log_prior),
                           std::exp(r.posterior_space[i].log_prior)});
  }
  Table predictive{"predictive", {"outcome", "prior_predictive", "transductive", "abductive"}, {}, {}};
  for (std::size_t k = 0; k < params.outcomes.size(); ++k) {
    predictive.rows.push_back({params.outcomes[k], r.prior_predictive.probability(k),
                               r.transductive.probability(k), r.abductive.probability(k)});
  }
  const auto& map = *r.abductive.map();
  Table summary{"summary", {"quantity", "value"}, {}, {}};
  summary.rows.push_back({std::string("map_model"), map.model_id});
  summary.rows.push_back({std::string("map_tie"), std::string(map.tie ? "yes" : "no")});
  summary.rows.push_back({std::string("total_variation"), r.total_variation});
  std::vector<Table> tables{std::move(models), std::move(predictive), std::move(summary)};
  if (r.transductive_moments) {
    Table moments{"moments",
                  {"method", "mean", "variance", "within_model_variance", "between_model_variance"},
                  {},
                  {}};
    moments.rows.push_back(moment_row("transductive", *r.transductive_moments));
    moments.rows.push_back(moment_row("abductive", *r.abductive_moments));
    tables.push_back(std::move(moments));
  }
  return tables;
}

std::vector<Table> grid_tables(const GridReport& r) {
  Table moments{"moments",
                {"method", "mean", "variance", "within_model_variance", "between_model_variance"},
                {},
                {}};
  moments.rows.push_back(moment_row("transductive", r.transductive));
  moments.rows.push_back(moment_row("abductive", r.abductive));
  Table summary{"summary", {"quantity", "value"}, {}, {}};
  summary.rows.push_back({std::string("models"), static_cast<std::int64_t>(r.models)});
  summary.rows.push_back({std::string("observations"), static_cast<std::int64_t>(r.observations)});
  summary.rows.push_back({std::string("map_model"), r.map.model_id});
  summary.rows.push_back({std::string("map_tie"), std::string(r.map.tie ? "yes" : "no")});
  if (r.excess_kurtosis) summary.rows.push_back({std::string("excess_kurtosis"), *r.excess_kurtosis});
  std::vector<Table> tables{std::move(moments), std::move(summary)};
  if (!r.outlier_posterior.empty()) {
    Table outliers{"outlier_posterior", {"outlier_prob", "posterior"}, {}, {}};
    for (const auto& [q, mass] : r.outlier_posterior) outliers.rows.push_back({q, mass});
    tables.push_back(std::move(outliers));
  }
  return tables;
}

std::vector<Table> cotter_tables(const std::string& name, const scenario::CotterParams& params) {
  std::vector<Table> tables{cotter::to_table(cotter::run_cotter_pin(params), name)};
  if (params.pseudo_count > 0.0) {
    Table settings{"settings", {"setting", "value"}, {}, {}};
    settings.rows.push_back({std::string("pseudo_count"), params.pseudo_count});
    tables.push_back(std::move(settings));
  }
  return tables;
}

}  // namespace

engine::ModelSpace discrete_space(const scenario::DiscreteParams& params) {
  std::vector<engine::Model> models;
  models.reserve(params.models.size());
  for (const auto& m : params.models) {
    engine::TabulatedParams table;
    for (double p : m.likelihood) table.log_probs.push_back(std::log(p));
    models.push_back({m.id, std::move(table), std::log(m.prior)});
  }
  return {engine::Family::tabulated_discrete, std::move(models), params.values.value_or(std::vector<double>{})};
}

DiscreteReport run_discrete(const scenario::DiscreteParams& params) {
  auto space = discrete_space(params);
  DataBatch observed;
  for (const auto& label : params.observed) observed.emplace_back(Symbol{label_index(params.outcomes, label)});
  std::vector<Datum> outcomes;
  for (std::size_t k = 0; k < params.outcomes.size(); ++k) outcomes.emplace_back(Symbol{k});

  auto post = engine::posterior(space, observed);
  auto prior_pred = engine::prior_predictive(space, outcomes);
  auto transductive = engine::posterior_predictive(space, observed, outcomes);
  auto abductive = engine::abductive_predictive(space, observed, outcomes);
  const double tv = total_variation_distance(transductive, abductive);
  std::optional<MomentPair> t_moments;
  std::optional<MomentPair> a_moments;
  if (params.values) {
    t_moments = engine::predictive_moments(space, observed);
    a_moments = engine::model_moments(space[abductive.map()->index].params, space);
  }
  return {std::move(space), std::move(post), std::move(prior_pred), std::move(transductive),
          std::move(abductive), tv, t_moments, a_moments};
}

GridReport run_normal_grid(const scenario::NormalGridParams& params) {
  const auto space = engine::normal_grid_space(
      params.mean_range, params.variance_range,
      {static_cast<std::size_t>(params.mean_points), static_cast<std::size_t>(params.variance_points)},
      params.prior);
  const auto observed = real_batch(params.observed);
  auto out = summarize_grid(space, observed);
  out.excess_kurtosis = engine::predictive_excess_kurtosis(space, observed);
  return out;
}

GridReport run_outlier_mixture(const scenario::MixtureGridParams& params) {
  const auto& g = params.grid;
  const auto space = engine::outlier_mixture_grid_space(
      g.mean_range, g.variance_range,
      {static_cast<std::size_t>(g.mean_points), static_cast<std::size_t>(g.variance_points)},
      params.outlier_probs, params.outlier_support, g.prior);
  const auto observed = real_batch(g.observed);
  auto out = summarize_grid(space, observed);
  // Models cycle through outlier_probs fastest.
  const auto post = engine::posterior(space, observed);
  const std::size_t nq = params.outlier_probs.size();
  std::vector<numerics::CompensatedSum> mass(nq);
  for (std::size_t i = 0; i < post.size(); ++i) mass[i % nq].add(std::exp(post[i].log_prior));
  for (std::size_t k = 0; k < nq; ++k) out.outlier_posterior.emplace_back(params.outlier_probs[k], mass[k].value());
  return out;
}

std::vector<Table> scenario_tables(const scenario::ScenarioSpec& spec) {
  return std::visit(
      overloaded{
          [&](const scenario::CotterParams& p) { return cotter_tables(spec.name, p); },
          [](const scenario::DiscreteParams& p) { return discrete_tables(p); },
          [](const scenario::NormalGridParams& p) { return grid_tables(run_normal_grid(p)); },
          [](const scenario::MixtureGridParams& p) { return grid_tables(run_outlier_mixture(p)); },
      },
      spec.parameters);
}

std::string run_scenario(const scenario::ScenarioSpec& spec) {
  const auto tables = scenario_tables(spec);
  return report::render(tables, spec.output.format, spec.output.precision);
}

}  // namespace transduct::runner
