#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace transduct {

// r successes (defects) in n trials.
struct Count {
  std::int64_t r = 0;
  std::int64_t n = 0;
  friend auto operator<=>(const Count&, const Count&) = default;
};

// Index into a tabulated outcome alphabet.
struct Symbol {
  std::size_t index = 0;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// One observation. Real-valued data are plain doubles.
using Datum = std::variant<Count, double, Symbol>;
using DataBatch = std::vector<Datum>;

std::string to_string(const Datum& d);

// Mean and variance of a prediction with the law-of-total-variance split:
// variance = within_model_variance + between_model_variance.
struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
  double within_model_variance = 0.0;
  double between_model_variance = 0.0;

  [[nodiscard]] static MomentPair from_split(double mean, double within, double between) {
    return {mean, within + between, within, between};
  }
};

enum class PredictiveKind { prior_predictive, posterior_predictive, abductive };

std::string to_string(PredictiveKind kind);

// Which model the abductive route committed to.
struct MapSelection {
  std::size_t index = 0;
  std::string model_id;
  // Another model shares the maximal posterior weight; the earliest one was taken.
  bool tie = false;
};

// Log-probability over an explicit outcome list. Immutable once built.
class PredictiveDistribution {
 public:
  PredictiveDistribution(std::vector<Datum> outcomes, std::vector<double> log_probs,
                         PredictiveKind kind, std::optional<MapSelection> map = std::nullopt);

  [[nodiscard]] const std::vector<Datum>& outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] const std::vector<double>& log_probs() const noexcept { return log_probs_; }
  [[nodiscard]] PredictiveKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::optional<MapSelection>& map() const noexcept { return map_; }

  [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }
  [[nodiscard]] double probability(std::size_t i) const;
  // Compensated sum of all probabilities; 1 for an exhaustive discrete outcome list.
  [[nodiscard]] double total_mass() const;

 private:
  std::vector<Datum> outcomes_;
  std::vector<double> log_probs_;
  PredictiveKind kind_;
  std::optional<MapSelection> map_;
};

// Half the L1 distance between two distributions over the same outcome list.
// Throws DomainError when the outcome lists differ.
[[nodiscard]] double total_variation_distance(const PredictiveDistribution& a,
                                              const PredictiveDistribution& b);

}  // namespace transduct
