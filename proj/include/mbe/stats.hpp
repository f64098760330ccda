#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mbe::stats {

inline constexpr double kSignificanceLevel = 0.05;

struct McNemarResult {
  std::uint64_t b = 0;        // model biased, random not
  std::uint64_t c = 0;        // random biased, model not
  std::uint64_t both = 0;
  std::uint64_t neither = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
  bool continuity_correction = false;

  std::uint64_t total() const { return b + c + both + neither; }
};

// Chi-square (1 dof) McNemar test on the discordant counts. Without
// discordant pairs the statistic is 0 and p is 1.
McNemarResult mcnemar_from_table(std::uint64_t b, std::uint64_t c, std::uint64_t both,
                                 std::uint64_t neither, bool continuity_correction = false);

// The random method's prediction for comparison `index`: a fair coin derived
// from hash(seed, index), so tallies do not depend on evaluation order.
bool random_coin(std::uint64_t seed, std::uint64_t index);

class McNemarAccumulator {
 public:
  explicit McNemarAccumulator(std::uint64_t seed) : seed_(seed) {}

  void add(std::uint64_t index, bool model_biased);
  void merge(const McNemarAccumulator& other);
  McNemarResult result(bool continuity_correction = false) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t b_ = 0, c_ = 0, both_ = 0, neither_ = 0;
};

// Indicators are compared with random coins indexed by position.
McNemarResult mcnemar_vs_random(std::span<const std::uint8_t> indicators, std::uint64_t seed,
                                bool continuity_correction = false);

struct Correlations {
  double spearman_rho = 0.0;
  double pearson_r = 0.0;
  double pearson_p = 1.0;  // two-sided
};

// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> xs);
double pearson(std::span<const double> xs, std::span<const double> ys);
// Two-sided p-value for a Pearson r over n samples, t-test with n-2 dof.
double pearson_p_value(double r, std::size_t n);
Correlations correlations(std::span<const double> xs, std::span<const double> ys);

// Fraction of indices where a_i and b_i fall on the same side of 50. An exact
// 50 only agrees with another exact 50.
double direction_agreement(std::span<const double> a, std::span<const double> b);

struct DiffStats {
  double signed_mean = 0.0;  // mean(candidate - reference)
  double abs_mean = 0.0;
};
DiffStats diff_stats(std::span<const double> reference, std::span<const double> candidate);

}  // namespace mbe::stats
