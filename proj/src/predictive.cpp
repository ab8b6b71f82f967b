#include "transduct/predictive.hpp"

#include <cmath>
#include <sstream>

#include "transduct/errors.hpp"
#include "transduct/numerics.hpp"

namespace transduct {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

std::string to_string(const Datum& d) {
  return std::visit(
      overloaded{
          [](const Count& c) { return std::to_string(c.r) + "/" + std::to_string(c.n); },
          [](double x) {
            std::ostringstream os;
            os.precision(17);
            os << x;
            return os.str();
          },
          [](const Symbol& s) { return "#" + std::to_string(s.index); },
      },
      d);
}

std::string to_string(PredictiveKind kind) {
  switch (kind) {
    case PredictiveKind::prior_predictive:
      return "prior-predictive";
    case PredictiveKind::posterior_predictive:
      return "posterior-predictive";
    case PredictiveKind::abductive:
      return "abductive";
  }
  return "unknown";
}

PredictiveDistribution::PredictiveDistribution(std::vector<Datum> outcomes,
                                               std::vector<double> log_probs,
                                               PredictiveKind kind,
                                               std::optional<MapSelection> map)
    : outcomes_(std::move(outcomes)),
      log_probs_(std::move(log_probs)),
      kind_(kind),
      map_(std::move(map)) {
  if (outcomes_.size() != log_probs_.size()) {
    throw DomainError("PredictiveDistribution: outcome/probability length mismatch");
  }
  for (double lp : log_probs_) {
    if (std::isnan(lp)) throw DomainError("PredictiveDistribution: NaN log probability");
  }
}

double PredictiveDistribution::probability(std::size_t i) const {
  return std::exp(log_probs_.at(i));
}

double PredictiveDistribution::total_mass() const {
  numerics::CompensatedSum sum;
  for (double lp : log_probs_) sum.add(std::exp(lp));
  return sum.value();
}

double total_variation_distance(const PredictiveDistribution& a, const PredictiveDistribution& b) {
  if (a.outcomes() != b.outcomes()) {
    throw DomainError("total_variation_distance: distributions cover different outcomes");
  }
  numerics::CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum.add(std::fabs(a.probability(i) - b.probability(i)));
  }
  return 0.5 * sum.value();
}

}  // namespace transduct
