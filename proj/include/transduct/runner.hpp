#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transduct/engine.hpp"
#include "transduct/report.hpp"
#include "transduct/scenario.hpp"

namespace transduct::runner {

struct DiscreteReport {
  engine::ModelSpace prior_space;
  engine::ModelSpace posterior_space;
  PredictiveDistribution prior_predictive;
  PredictiveDistribution transductive;
  PredictiveDistribution abductive;
  double total_variation = 0.0;  // between transductive and abductive
  std::optional<MomentPair> transductive_moments;  // only with outcome values
  std::optional<MomentPair> abductive_moments;
};

[[nodiscard]] engine::ModelSpace discrete_space(const scenario::DiscreteParams& params);
[[nodiscard]] DiscreteReport run_discrete(const scenario::DiscreteParams& params);

struct GridReport {
  std::size_t models = 0;
  std::size_t observations = 0;
  MomentPair transductive;
  MomentPair abductive;  // moments of the MAP model alone
  MapSelection map;
  std::optional<double> excess_kurtosis;                   // normal grids
  std::vector<std::pair<double, double>> outlier_posterior;  // (q, posterior mass), mixtures
};

[[nodiscard]] GridReport run_normal_grid(const scenario::NormalGridParams& params);
[[nodiscard]] GridReport run_outlier_mixture(const scenario::MixtureGridParams& params);

[[nodiscard]] std::vector<report::Table> scenario_tables(const scenario::ScenarioSpec& spec);

// Rendered in spec.output's format and precision.
[[nodiscard]] std::string run_scenario(const scenario::ScenarioSpec& spec);

}  // namespace transduct::runner
