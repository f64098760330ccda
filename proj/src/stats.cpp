#include "mbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "mbe/error.hpp"
#include "mbe/hash.hpp"

namespace mbe::stats {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DataError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw DataError(std::string(what) + ": non-finite input");
  }
}

int side_of_50(double score) { return score > 50.0 ? 1 : score < 50.0 ? -1 : 0; }

}  // namespace

McNemarResult mcnemar_from_table(std::uint64_t b, std::uint64_t c, std::uint64_t both,
                                 std::uint64_t neither, bool continuity_correction) {
  McNemarResult r{b, c, both, neither, 0.0, 1.0, false, continuity_correction};
  const auto discordant = b + c;
  if (discordant == 0) return r;
  double diff = std::abs(static_cast<double>(b) - static_cast<double>(c));
  if (continuity_correction) diff = std::max(diff - 1.0, 0.0);
  r.statistic = diff * diff / static_cast<double>(discordant);
  // Chi-square survival function with one degree of freedom.
  r.p_value = std::clamp(std::erfc(std::sqrt(r.statistic / 2.0)), 0.0, 1.0);
  r.significant = r.p_value < kSignificanceLevel;
  return r;
}

bool random_coin(std::uint64_t seed, std::uint64_t index) {
  return (hash::combine(seed, index) >> 63) != 0;
}

void McNemarAccumulator::add(std::uint64_t index, bool model_biased) {
  const bool random_biased = random_coin(seed_, index);
  if (model_biased && random_biased) {
    ++both_;
  } else if (model_biased) {
    ++b_;
  } else if (random_biased) {
    ++c_;
  } else {
    ++neither_;
  }
}

void McNemarAccumulator::merge(const McNemarAccumulator& other) {
  if (other.seed_ != seed_) throw DataError("cannot merge McNemar tallies with different seeds");
  b_ += other.b_;
  c_ += other.c_;
  both_ += other.both_;
  neither_ += other.neither_;
}

McNemarResult McNemarAccumulator::result(bool continuity_correction) const {
  return mcnemar_from_table(b_, c_, both_, neither_, continuity_correction);
}

McNemarResult mcnemar_vs_random(std::span<const std::uint8_t> indicators, std::uint64_t seed,
                                bool continuity_correction) {
  if (indicators.empty()) throw DataError("McNemar test needs at least one indicator");
  McNemarAccumulator acc(seed);
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    if (indicators[i] > 1) throw DataError("indicator values must be 0 or 1");
    acc.add(i, indicators[i] != 0);
  }
  return acc.result(continuity_correction);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs.size(), ys.size(), "pearson");
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined: zero variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw DataError("pearson p-value needs n >= 3");
  if (std::abs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  const boost::math::students_t dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0,
                    1.0);
}

Correlations correlations(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs.size(), ys.size(), "correlations");
  if (xs.size() < 3) throw DataError("correlations need at least 3 samples");
  require_finite(xs, "correlations");
  require_finite(ys, "correlations");
  Correlations c;
  c.pearson_r = pearson(xs, ys);
  c.pearson_p = pearson_p_value(c.pearson_r, xs.size());
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  c.spearman_rho = pearson(rx, ry);
  return c;
}

double direction_agreement(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "direction_agreement");
  if (a.empty()) throw DataError("direction_agreement needs at least one score");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += side_of_50(a[i]) == side_of_50(b[i]) ? 1 : 0;
  }
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

DiffStats diff_stats(std::span<const double> reference, std::span<const double> candidate) {
  require_same_length(reference.size(), candidate.size(), "diff_stats");
  if (reference.empty()) throw DataError("diff_stats needs at least one score");
  DiffStats d;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double diff = candidate[i] - reference[i];
    d.signed_mean += diff;
    d.abs_mean += std::abs(diff);
  }
  const auto n = static_cast<double>(reference.size());
  d.signed_mean /= n;
  d.abs_mean /= n;
  return d;
}

}  // namespace mbe::stats
