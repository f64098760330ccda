#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mbe/error.hpp"
#include "mbe/stats.hpp"

using namespace mbe::stats;

namespace {

// Survival function values for chi-square with one degree of freedom,
// computed independently and frozen here.
constexpr double kChi2Sf5 = 0.025347318677468325;
constexpr double kChi2Sf4_05 = 0.04417134490844271;

const std::vector<double> kHt = {52.1, 48.3, 55.0, 50.7, 47.2, 53.9, 49.5, 56.4, 51.2, 46.8, 54.3};
const std::vector<double> kMbe = {53.4, 47.1, 56.2, 49.6, 49.0, 52.8, 50.4, 55.7, 49.3, 47.5, 50.6};

}  // namespace

TEST_CASE("mcnemar_from_table") {
  const auto r = mcnemar_from_table(15, 5, 40, 40);
  CHECK(r.statistic == 5.0);
  CHECK(r.p_value == doctest::Approx(kChi2Sf5).epsilon(1e-12));
  CHECK(r.significant);
  CHECK(r.total() == 100);

  const auto even = mcnemar_from_table(10, 10, 3, 3);
  CHECK(even.statistic == 0.0);
  CHECK(even.p_value == doctest::Approx(1.0));
  CHECK_FALSE(even.significant);

  const auto none = mcnemar_from_table(0, 0, 7, 9);
  CHECK(none.statistic == 0.0);
  CHECK(none.p_value == 1.0);
  CHECK_FALSE(none.significant);

  const auto cc = mcnemar_from_table(15, 5, 0, 0, true);
  CHECK(cc.statistic == doctest::Approx(4.05));
  CHECK(cc.p_value == doctest::Approx(kChi2Sf4_05).epsilon(1e-12));
  CHECK(cc.significant);

  const auto cc_small = mcnemar_from_table(6, 2, 0, 0, true);
  CHECK(cc_small.statistic == doctest::Approx(1.125));
  CHECK_FALSE(cc_small.significant);
  CHECK(cc.continuity_correction);
}

TEST_CASE("mcnemar depends only on the discordant counts") {
  for (std::uint64_t b = 0; b < 12; ++b) {
    for (std::uint64_t c = 0; c < 12; ++c) {
      const auto x = mcnemar_from_table(b, c, 0, 0);
      const auto y = mcnemar_from_table(b, c, 50, 3);
      const auto swapped = mcnemar_from_table(c, b, 3, 50);
      CHECK(x.statistic == y.statistic);
      CHECK(x.p_value == y.p_value);
      CHECK(x.statistic == swapped.statistic);
      CHECK(x.p_value >= 0.0);
      CHECK(x.p_value <= 1.0);
    }
  }
}

TEST_CASE("mcnemar_vs_random") {
  std::vector<std::uint8_t> ind(400);
  std::mt19937_64 rng(5);
  for (auto& v : ind) v = static_cast<std::uint8_t>(rng() & 1);
  const auto r = mcnemar_vs_random(ind, 17);
  CHECK(r.total() == ind.size());

  std::uint64_t b = 0, c = 0, both = 0, neither = 0;
  for (std::size_t k = 0; k < ind.size(); ++k) {
    const bool coin = random_coin(17, k);
    if (ind[k] && !coin) ++b;
    else if (!ind[k] && coin) ++c;
    else if (ind[k]) ++both;
    else ++neither;
  }
  CHECK(r.b == b);
  CHECK(r.c == c);
  CHECK(r.both == both);
  CHECK(r.neither == neither);
  CHECK(mcnemar_vs_random(ind, 17).p_value == r.p_value);

  // Indicators that always favour one side against a fair coin.
  const std::vector<std::uint8_t> all(400, 1);
  CHECK(mcnemar_vs_random(all, 17).significant);

  CHECK_THROWS_AS(mcnemar_vs_random(std::span<const std::uint8_t>{}, 1), mbe::DataError);
}

TEST_CASE("McNemarAccumulator merge matches a single pass") {
  McNemarAccumulator whole(9), left(9), right(9);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const bool biased = (k * 7919) % 3 == 0;
    whole.add(k, biased);
    (k < 400 ? left : right).add(k, biased);
  }
  left.merge(right);
  const auto a = whole.result();
  const auto b = left.result();
  CHECK(a.b == b.b);
  CHECK(a.c == b.c);
  CHECK(a.both == b.both);
  CHECK(a.neither == b.neither);
  McNemarAccumulator other(10);
  CHECK_THROWS_AS(left.merge(other), mbe::DataError);
}

TEST_CASE("random_coin is roughly fair") {
  int heads = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) heads += random_coin(3, k);
  CHECK(heads > 4800);
  CHECK(heads < 5200);
}

TEST_CASE("correlations against frozen values") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 1, 4, 3, 7};
  const auto c = correlations(x, y);
  CHECK(c.pearson_r == doctest::Approx(0.824163383692134).epsilon(1e-12));
  CHECK(c.pearson_p == doctest::Approx(0.08613863131395952).epsilon(1e-9));
  CHECK(c.spearman_rho == doctest::Approx(0.8).epsilon(1e-12));

  const std::vector<double> tx = {1, 2, 2, 3, 4, 4, 4, 5};
  const std::vector<double> ty = {3, 1, 2, 2, 5, 4, 6, 7};
  CHECK(average_ranks(tx) == std::vector<double>{1, 2.5, 2.5, 4, 6, 6, 6, 8});
  const auto t = correlations(tx, ty);
  CHECK(t.pearson_r == doctest::Approx(0.8069088329508469).epsilon(1e-12));
  CHECK(t.pearson_p == doctest::Approx(0.015492321462031727).epsilon(1e-9));
  CHECK(t.spearman_rho == doctest::Approx(0.8088885876886688).epsilon(1e-12));
}

TEST_CASE("eleven-model fixture is significant") {
  const auto c = correlations(kHt, kMbe);
  CHECK(c.pearson_r == doctest::Approx(0.8616078834202123).epsilon(1e-12));
  CHECK(c.pearson_p == doctest::Approx(0.0006517220306172811).epsilon(1e-9));
  CHECK(c.pearson_p < 0.05);
  CHECK(c.pearson_r > 0.602068777446492);
  CHECK(c.spearman_rho == doctest::Approx(0.8909090909090911).epsilon(1e-12));
  // At the critical r the two-sided p is exactly alpha.
  CHECK(pearson_p_value(0.602068777446492, 11) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("correlation properties") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(50.0, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> a(12), b(12);
    for (auto& v : a) v = nd(rng);
    for (auto& v : b) v = nd(rng);
    const auto c = correlations(a, b);
    CHECK(std::abs(c.pearson_r) <= 1.0);
    CHECK(std::abs(c.spearman_rho) <= 1.0);
    CHECK(c.pearson_p >= 0.0);
    CHECK(c.pearson_p <= 1.0);

    // Spearman is unchanged by a strictly increasing transform.
    std::vector<double> mono(a.size()), affine(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      mono[i] = std::exp(a[i] / 10.0);
      affine[i] = 3.0 * a[i] - 7.0;
    }
    CHECK(correlations(mono, b).spearman_rho == doctest::Approx(c.spearman_rho).epsilon(1e-12));
    CHECK(correlations(affine, b).pearson_r == doctest::Approx(c.pearson_r).epsilon(1e-12));
    CHECK(correlations(b, a).pearson_r == doctest::Approx(c.pearson_r).epsilon(1e-12));
  }
  CHECK(pearson_p_value(1.0, 5) == 0.0);
}

TEST_CASE("correlation errors") {
  const std::vector<double> flat = {50, 50, 50, 50};
  const std::vector<double> v4 = {1, 2, 3, 4};
  CHECK_THROWS_AS(correlations(flat, v4), mbe::DataError);
  const std::vector<double> two = {1, 2};
  CHECK_THROWS_AS(correlations(two, two), mbe::DataError);
  const std::vector<double> v3 = {1, 2, 3};
  CHECK_THROWS_AS(correlations(v3, v4), mbe::DataError);
  const std::vector<double> nan = {1, 2, std::nan("")};
  CHECK_THROWS_AS(correlations(nan, v3), mbe::DataError);
}

TEST_CASE("direction_agreement") {
  const std::vector<double> a = {54.69, 48.0};
  const std::vector<double> b = {52.0, 49.0};
  CHECK(direction_agreement(a, b) == 1.0);
  const std::vector<double> c = {50.0};
  const std::vector<double> d = {51.0};
  CHECK(direction_agreement(c, d) == 0.0);
  CHECK(direction_agreement(c, c) == 1.0);
  const std::vector<double> e = {49.0};
  CHECK(direction_agreement(c, e) == 0.0);

  CHECK(direction_agreement(kHt, kMbe) == doctest::Approx(8.0 / 11.0));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(40.0, 60.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(9), y(9);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const double f = direction_agreement(x, y);
    CHECK(f == direction_agreement(y, x));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(direction_agreement(a, one), mbe::DataError);
}

TEST_CASE("diff_stats") {
  const std::vector<double> ja_ht = {52.67};
  const std::vector<double> ja_mbe = {54.89};
  CHECK(diff_stats(ja_ht, ja_mbe).signed_mean == doctest::Approx(2.22));
  const std::vector<double> ru_ht = {46.95};
  const std::vector<double> ru_mbe = {46.05};
  const auto d = diff_stats(ru_ht, ru_mbe);
  CHECK(d.signed_mean == doctest::Approx(-0.90));
  CHECK(d.abs_mean == doctest::Approx(0.90));

  const auto same = diff_stats(kHt, kHt);
  CHECK(same.signed_mean == 0.0);
  CHECK(same.abs_mean == 0.0);

  const auto fwd = diff_stats(kHt, kMbe);
  const auto back = diff_stats(kMbe, kHt);
  CHECK(fwd.signed_mean == doctest::Approx(-back.signed_mean));
  CHECK(fwd.abs_mean == doctest::Approx(back.abs_mean));
  CHECK(fwd.abs_mean >= std::abs(fwd.signed_mean));
}
