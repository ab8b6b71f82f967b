#include "transduct/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <algorithm>

namespace transduct::scenario {

using json = nlohmann::json;
using Code = ScenarioError::Code;

ScenarioError::ScenarioError(Code code, std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), code_(code), path_(std::move(path)) {}

namespace {

constexpr double kLikelihoodSumTolerance = 1e-9;

std::string pointer_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string at(const std::string& path, std::string_view key) {
  return path + "/" + pointer_token(key);
}

std::string at(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
  throw ScenarioError(Code::invalid_value, path, message);
}

// Object cursor that remembers which keys were consumed, so leftovers can be
// reported as unknown fields.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) invalid(path_.empty() ? "/" : path_, "expected an object");
  }

  const json& required(std::string_view key) {
    const json* found = optional(key);
    if (found == nullptr) {
      throw ScenarioError(Code::missing_field, at(path_, key), "missing required field");
    }
    return *found;
  }

  const json* optional(std::string_view key) {
    const auto it = node_.find(std::string(key));
    if (it == node_.end()) return nullptr;
    seen_.insert(std::string(key));
    return &*it;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) {
        throw ScenarioError(Code::unknown_field, at(path_, key), "unknown field");
      }
    }
  }

  [[nodiscard]] std::string path(std::string_view key) const { return at(path_, key); }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) invalid(path, "expected a string");
  return node.get<std::string>();
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) invalid(path, "expected a number");
  const double value = node.get<double>();
  if (!std::isfinite(value)) invalid(path, "expected a finite number");
  return value;
}

std::int64_t as_integer(const json& node, const std::string& path) {
  if (!node.is_number_integer()) invalid(path, "expected an integer");
  if (node.is_number_unsigned() && node.get<std::uint64_t>() > INT64_MAX) {
    invalid(path, "integer out of range");
  }
  return node.get<std::int64_t>();
}

const json& as_array(const json& node, const std::string& path) {
  if (!node.is_array()) invalid(path, "expected an array");
  return node;
}

std::vector<double> number_list(const json& node, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(node, path).size(); ++i) {
    out.push_back(as_number(node[i], at(path, i)));
  }
  return out;
}

engine::Interval interval(const json& node, const std::string& path) {
  const auto values = number_list(node, path);
  if (values.size() != 2) invalid(path, "expected [lo, hi]");
  if (values[0] > values[1]) invalid(path, "lo must not exceed hi");
  return {values[0], values[1]};
}

engine::GridPrior grid_prior(const json& node, const std::string& path) {
  const auto text = as_string(node, path);
  if (text == "uniform") return engine::GridPrior::uniform;
  if (text == "inverse-variance") return engine::GridPrior::inverse_variance;
  invalid(path, "prior must be \"uniform\" or \"inverse-variance\"");
}

std::string to_string(engine::GridPrior prior) {
  return prior == engine::GridPrior::inverse_variance ? "inverse-variance" : "uniform";
}

CotterParams read_cotter(Reader& r, const std::string& path) {
  CotterParams p;
  const auto& n0 = as_array(r.required("n0"), r.path("n0"));
  for (std::size_t i = 0; i < n0.size(); ++i) p.n0.push_back(as_integer(n0[i], at(r.path("n0"), i)));
  p.ratio = as_number(r.required("ratio"), r.path("ratio"));
  p.n = as_integer(r.required("n"), r.path("n"));
  p.threshold = as_integer(r.required("threshold"), r.path("threshold"));
  if (const auto* pc = r.optional("pseudo_count")) p.pseudo_count = as_number(*pc, r.path("pseudo_count"));
  validate(p, path);
  return p;
}

DiscreteParams read_discrete(Reader& r) {
  DiscreteParams p;
  const auto outcomes_path = r.path("outcomes");
  const auto& outcomes = as_array(r.required("outcomes"), outcomes_path);
  if (outcomes.empty()) invalid(outcomes_path, "need at least one outcome");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto label = as_string(outcomes[i], at(outcomes_path, i));
    if (!labels.insert(label).second) invalid(at(outcomes_path, i), "duplicate outcome '" + label + "'");
    p.outcomes.push_back(std::move(label));
  }

  const auto models_path = r.path("models");
  const auto& models = as_array(r.required("models"), models_path);
  if (models.empty()) invalid(models_path, "need at least one model");
  std::set<std::string> ids;
  double total_prior = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto mpath = at(models_path, i);
    Reader m(models[i], mpath);
    DiscreteModelSpec spec;
    spec.id = as_string(m.required("id"), m.path("id"));
    if (spec.id.empty()) invalid(m.path("id"), "model id must not be empty");
    if (!ids.insert(spec.id).second) invalid(m.path("id"), "duplicate model id '" + spec.id + "'");
    spec.prior = as_number(m.required("prior"), m.path("prior"));
    if (spec.prior < 0.0) invalid(m.path("prior"), "prior weight must be nonnegative");
    total_prior += spec.prior;
    spec.likelihood = number_list(m.required("likelihood"), m.path("likelihood"));
    if (spec.likelihood.size() != p.outcomes.size()) {
      invalid(m.path("likelihood"), "expected one probability per outcome");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.likelihood.size(); ++k) {
      const double v = spec.likelihood[k];
      if (v < 0.0 || v > 1.0) invalid(at(m.path("likelihood"), k), "probability outside [0, 1]");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kLikelihoodSumTolerance) {
      invalid(m.path("likelihood"), "probabilities must sum to 1");
    }
    m.finish();
    p.models.push_back(std::move(spec));
  }
  if (!(total_prior > 0.0)) invalid(models_path, "at least one model needs a positive prior");

  if (const auto* observed = r.optional("observed")) {
    const auto opath = r.path("observed");
    for (std::size_t i = 0; i < as_array(*observed, opath).size(); ++i) {
      auto label = as_string((*observed)[i], at(opath, i));
      if (!labels.contains(label)) invalid(at(opath, i), "unknown outcome '" + label + "'");
      p.observed.push_back(std::move(label));
    }
  }
  if (const auto* values = r.optional("values")) {
    p.values = number_list(*values, r.path("values"));
    if (p.values->size() != p.outcomes.size()) {
      invalid(r.path("values"), "expected one value per outcome");
    }
  }
  return p;
}

void check_axis(engine::Interval range, std::int64_t points, const std::string& range_path,
                const std::string& points_path) {
  if (points < 1) invalid(points_path, "grid size must be >= 1");
  if (points == 1 && range.lo != range.hi) invalid(points_path, "a single grid point needs lo == hi");
  if (points >= 2 && !(range.lo < range.hi)) invalid(range_path, "a grid axis needs lo < hi");
}

NormalGridParams read_normal_grid(Reader& r) {
  NormalGridParams p;
  p.mean_range = interval(r.required("mean_range"), r.path("mean_range"));
  p.variance_range = interval(r.required("variance_range"), r.path("variance_range"));
  if (!(p.variance_range.lo > 0.0)) invalid(r.path("variance_range"), "variances must be positive");
  const auto grid_path = r.path("grid");
  const auto& grid = as_array(r.required("grid"), grid_path);
  if (grid.size() != 2) invalid(grid_path, "expected [mean_points, variance_points]");
  p.mean_points = as_integer(grid[0], at(grid_path, 0));
  p.variance_points = as_integer(grid[1], at(grid_path, 1));
  check_axis(p.mean_range, p.mean_points, r.path("mean_range"), at(grid_path, 0));
  check_axis(p.variance_range, p.variance_points, r.path("variance_range"), at(grid_path, 1));
  if (const auto* prior = r.optional("prior")) p.prior = grid_prior(*prior, r.path("prior"));
  if (const auto* observed = r.optional("observed")) {
    p.observed = number_list(*observed, r.path("observed"));
  }
  return p;
}

MixtureGridParams read_mixture(Reader& r) {
  MixtureGridParams p;
  p.grid = read_normal_grid(r);
  p.outlier_probs = number_list(r.required("outlier_probs"), r.path("outlier_probs"));
  if (p.outlier_probs.empty()) invalid(r.path("outlier_probs"), "need at least one value");
  for (std::size_t i = 0; i < p.outlier_probs.size(); ++i) {
    const double q = p.outlier_probs[i];
    if (!(q >= 0.0 && q < 1.0)) invalid(at(r.path("outlier_probs"), i), "must lie in [0, 1)");
  }
  p.outlier_support = interval(r.required("outlier_support"), r.path("outlier_support"));
  if (!(p.outlier_support.lo < p.outlier_support.hi)) {
    invalid(r.path("outlier_support"), "needs lo < hi");
  }
  return p;
}

json interval_json(engine::Interval i) { return json::array({i.lo, i.hi}); }

json grid_json(const NormalGridParams& p) {
  return {
      {"mean_range", interval_json(p.mean_range)},
      {"variance_range", interval_json(p.variance_range)},
      {"grid", json::array({p.mean_points, p.variance_points})},
      {"prior", to_string(p.prior)},
      {"observed", p.observed},
  };
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::cotter_pin:
      return "cotter-pin";
    case ScenarioKind::discrete_models:
      return "discrete-models";
    case ScenarioKind::normal_grid:
      return "normal-grid";
    case ScenarioKind::outlier_mixture:
      return "outlier-mixture";
  }
  return "unknown";
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::markdown:
      return "markdown";
    case OutputFormat::json:
      return "json";
  }
  return "unknown";
}

OutputFormat parse_format(std::string_view text, const std::string& path) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "markdown") return OutputFormat::markdown;
  if (text == "json") return OutputFormat::json;
  invalid(path, "format must be csv, markdown or json");
}

void validate(const CotterParams& p, const std::string& path) {
  if (!(p.ratio > 0.0 && p.ratio < 1.0)) invalid(at(path, "ratio"), "ratio must lie in (0, 1)");
  if (p.n < 1) invalid(at(path, "n"), "n must be >= 1");
  if (p.threshold < 0 || p.threshold >= p.n) {
    invalid(at(path, "threshold"), "threshold must satisfy 0 <= threshold < n");
  }
  if (!(p.pseudo_count >= 0.0) || !std::isfinite(p.pseudo_count)) {
    invalid(at(path, "pseudo_count"), "pseudo-count must be finite and nonnegative");
  }
  for (std::size_t i = 0; i < p.n0.size(); ++i) {
    const auto n0 = p.n0[i];
    const auto where = at(at(path, "n0"), i);
    if (n0 < 1) invalid(where, "prior sample size must be >= 1, got " + std::to_string(n0));
    const double r0 = p.ratio * static_cast<double>(n0);
    if (std::fabs(r0 - std::round(r0)) > 1e-9 * std::max(1.0, r0)) {
      std::ostringstream msg;
      msg << "n0=" << n0 << " gives a non-integral defect count " << r0 << " at ratio "
          << p.ratio;
      invalid(where, msg.str());
    }
  }
}

ScenarioSpec parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(Code::syntax, "byte " + std::to_string(e.byte), e.what());
  }
  Reader top(doc, "");
  ScenarioSpec spec;
  spec.name = as_string(top.required("name"), "/name");
  const auto kind = as_string(top.required("kind"), "/kind");
  const auto& params_node = top.required("parameters");
  Reader params(params_node, "/parameters");
  if (kind == "cotter-pin") {
    spec.parameters = read_cotter(params, "/parameters");
  } else if (kind == "discrete-models") {
    spec.parameters = read_discrete(params);
  } else if (kind == "normal-grid") {
    spec.parameters = read_normal_grid(params);
  } else if (kind == "outlier-mixture") {
    spec.parameters = read_mixture(params);
  } else {
    throw ScenarioError(Code::unknown_kind, "/kind", "unknown scenario kind '" + kind + "'");
  }
  params.finish();

  if (const auto* output = top.optional("output")) {
    Reader out(*output, "/output");
    if (const auto* f = out.optional("format")) {
      spec.output.format = parse_format(as_string(*f, "/output/format"));
    }
    if (const auto* p = out.optional("precision")) {
      const auto digits = as_integer(*p, "/output/precision");
      if (digits < 1 || digits > 17) invalid("/output/precision", "precision must be in 1..17");
      spec.output.precision = static_cast<int>(digits);
    }
    out.finish();
  }
  top.finish();
  return spec;
}

json serialize(const ScenarioSpec& spec) {
  json params = std::visit(
      overloaded{
          [](const CotterParams& p) -> json {
            return {{"n0", p.n0},
                    {"ratio", p.ratio},
                    {"n", p.n},
                    {"threshold", p.threshold},
                    {"pseudo_count", p.pseudo_count}};
          },
          [](const DiscreteParams& p) -> json {
            json models = json::array();
            for (const auto& m : p.models) {
              models.push_back({{"id", m.id}, {"prior", m.prior}, {"likelihood", m.likelihood}});
            }
            json out = {{"outcomes", p.outcomes}, {"models", models}, {"observed", p.observed}};
            if (p.values) out["values"] = *p.values;
            return out;
          },
          [](const NormalGridParams& p) -> json { return grid_json(p); },
          [](const MixtureGridParams& p) -> json {
            json out = grid_json(p.grid);
            out["outlier_probs"] = p.outlier_probs;
            out["outlier_support"] = interval_json(p.outlier_support);
            return out;
          },
      },
      spec.parameters);
  return {
      {"name", spec.name},
      {"kind", to_string(spec.kind())},
      {"parameters", std::move(params)},
      {"output", {{"format", to_string(spec.output.format)}, {"precision", spec.output.precision}}},
  };
}

}  // namespace transduct::scenario
