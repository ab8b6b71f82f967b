#pragma once

// Declarative prediction experiments, read from strict JSON.
//
//   {
//     "name": "...",
//     "kind": "cotter-pin" | "discrete-models" | "normal-grid" | "outlier-mixture",
//     "parameters": { ...kind specific... },
//     "output": { "format": "csv" | "markdown" | "json", "precision": 4 }   // optional
//   }
//
// Unknown fields anywhere are rejected with their JSON-pointer path.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "transduct/engine.hpp"

namespace transduct::scenario {

class ScenarioError : public std::runtime_error {
 public:
  enum class Code { syntax, unknown_kind, missing_field, unknown_field, invalid_value };

  ScenarioError(Code code, std::string path, const std::string& message);

  [[nodiscard]] Code code() const noexcept { return code_; }
  // JSON pointer of the offending element, or "byte N" for syntax errors.
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  Code code_;
  std::string path_;
};

enum class ScenarioKind { cotter_pin, discrete_models, normal_grid, outlier_mixture };
enum class OutputFormat { csv, markdown, json };

std::string to_string(ScenarioKind kind);
std::string to_string(OutputFormat format);
// Throws ScenarioError(invalid_value) for anything but csv/markdown/json.
OutputFormat parse_format(std::string_view text, const std::string& path = "/output/format");

struct OutputSpec {
  OutputFormat format = OutputFormat::markdown;
  int precision = 4;  // significant digits, 1..17
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct CotterParams {
  std::vector<std::int64_t> n0;
  double ratio = 0.06;
  std::int64_t n = 100;
  std::int64_t threshold = 10;
  double pseudo_count = 0.0;
  friend bool operator==(const CotterParams&, const CotterParams&) = default;
};

struct DiscreteModelSpec {
  std::string id;
  double prior = 1.0;               // unnormalized weight
  std::vector<double> likelihood;   // pmf over the outcome labels
  friend bool operator==(const DiscreteModelSpec&, const DiscreteModelSpec&) = default;
};

struct DiscreteParams {
  std::vector<std::string> outcomes;
  std::vector<DiscreteModelSpec> models;
  std::vector<std::string> observed;
  std::optional<std::vector<double>> values;  // numeric outcome values, enables moments
  friend bool operator==(const DiscreteParams&, const DiscreteParams&) = default;
};

struct NormalGridParams {
  engine::Interval mean_range;
  engine::Interval variance_range;
  std::int64_t mean_points = 2;
  std::int64_t variance_points = 2;
  engine::GridPrior prior = engine::GridPrior::uniform;
  std::vector<double> observed;
  friend bool operator==(const NormalGridParams&, const NormalGridParams&) = default;
};

struct MixtureGridParams {
  NormalGridParams grid;
  std::vector<double> outlier_probs;
  engine::Interval outlier_support;
  friend bool operator==(const MixtureGridParams&, const MixtureGridParams&) = default;
};

using ScenarioParameters =
    std::variant<CotterParams, DiscreteParams, NormalGridParams, MixtureGridParams>;

struct ScenarioSpec {
  std::string name;
  ScenarioParameters parameters;
  OutputSpec output;

  [[nodiscard]] ScenarioKind kind() const noexcept {
    return static_cast<ScenarioKind>(parameters.index());
  }
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Parses and fully validates a scenario document; defaults are filled in.
[[nodiscard]] ScenarioSpec parse_scenario(std::string_view text);

// Canonical document: every field present, defaults explicit, keys sorted.
[[nodiscard]] nlohmann::json serialize(const ScenarioSpec& spec);

// Validation shared with the CLI flags path. Throws ScenarioError(invalid_value).
void validate(const CotterParams& params, const std::string& path = "/parameters");

}  // namespace transduct::scenario
