#include <doctest.h>

#include <filesystem>
#include <vector>

#include "mbe/error.hpp"
#include "mbe/records.hpp"
#include "mbe/scoring.hpp"
#include "reference.hpp"

using namespace mbe::scoring;
using mbe::protocol::Group;
using mbe::protocol::ModelRecord;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = MBE_FIXTURES;

ModelRecord record(std::vector<double> logprobs, std::vector<double> attentions,
                   std::vector<double> embedding = {1.0, 0.0}) {
  ModelRecord r;
  r.id = "r";
  for (std::size_t i = 0; i < logprobs.size(); ++i) r.tokens.push_back("t" + std::to_string(i));
  r.token_logprobs = std::move(logprobs);
  r.attentions = std::move(attentions);
  r.embedding = std::move(embedding);
  return r;
}

ModelRecord with_embedding(std::vector<double> e) { return record({-1.0}, {1.0}, std::move(e)); }

}  // namespace

TEST_CASE("aula") {
  CHECK(aula(record({-1.0, -1.0}, {0.5, 0.5})) == -0.5);
  // (1/2)(0.25 * -2.0 + 0.75 * -0.5) = -0.4375
  CHECK(aula(record({-2.0, -0.5}, {0.25, 0.75})) == -0.4375);
  CHECK(aula(record({-3.0}, {1.0})) == -3.0);
}

TEST_CASE("sentence_similarity") {
  const auto a = with_embedding({0.3, -0.7, 2.0});
  CHECK(sentence_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sentence_similarity(with_embedding({1, 0}), with_embedding({0, 1})) == 0.0);
  CHECK(sentence_similarity(with_embedding({1, 0}), with_embedding({-1, 0}), {true, 0.0}) == 0.0);
  CHECK(sentence_similarity(with_embedding({1, 0}), with_embedding({-1, 0}), {false, 0.0}) == -1.0);
  // cos = 0.6: kept at tau 0.5, dropped at tau 0.7
  CHECK(sentence_similarity(with_embedding({1, 0}), with_embedding({0.6, 0.8}), {true, 0.5}) ==
        doctest::Approx(0.6));
  CHECK(sentence_similarity(with_embedding({1, 0}), with_embedding({0.6, 0.8}), {true, 0.7}) == 0.0);
  CHECK_THROWS_WITH_AS(sentence_similarity(with_embedding({1, 0}), with_embedding({1, 0, 0})),
                       doctest::Contains("dimension mismatch"), mbe::DataError);
  CHECK_THROWS_AS(sentence_similarity(a, a, {true, -0.1}), mbe::DataError);
}

TEST_CASE("mbe_score: single dominating pair") {
  // Cosine 0.8 between the two embeddings.
  const std::vector<ModelRecord> m = {record({-0.4}, {1.0}, {1.0, 0.0})};
  const std::vector<ModelRecord> f = {record({-0.6}, {1.0}, {0.8, 0.6})};
  const auto r = mbe_score(m, f).bias;
  CHECK(r.score == 100.0);
  CHECK(r.weight_total == doctest::Approx(0.8));
  CHECK(r.pair_count == 1);
  CHECK(r.indicator_count == 1);
}

TEST_CASE("weighted_preference: explicit 2x2 weights") {
  // Indicators: (m1,f1)=1, (m1,f2)=1, (m2,f1)=0, (m2,f2)=0.
  const std::vector<double> am = {-0.4, -0.9};
  const std::vector<double> af = {-0.6, -0.5};
  const std::vector<double> c = {1.0, 0.2, 0.6, 1.0};
  const auto r = weighted_preference(am, af, c).bias;
  CHECK(r.weighted_numerator == doctest::Approx(1.2));
  CHECK(r.weight_total == doctest::Approx(2.8));
  CHECK(r.score == doctest::Approx(42.857142857142854));
  CHECK(r.indicator_count == 2);
  CHECK_THROWS_AS(weighted_preference(am, af, std::vector<double>{1.0}), mbe::DataError);
}

TEST_CASE("mbe_score: 2x2 embedding fixture") {
  // Cosines [[1/2, 1/2], [2/3, 2/3]], same indicators as above: 1 / (1 + 4/3).
  const auto m = mbe::protocol::read_records(kFixtures / "score2x2_males.jsonl");
  const auto f = mbe::protocol::read_records(kFixtures / "score2x2_females.jsonl");
  const auto r = mbe_score(m, f).bias;
  CHECK(r.score == doctest::Approx(300.0 / 7.0).epsilon(1e-12));
  CHECK(r.weighted_numerator == doctest::Approx(1.0));
  CHECK(r.weight_total == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("mbe_score: ties and degenerate weights") {
  const std::vector<ModelRecord> m = {record({-0.5}, {1.0}, {1.0, 0.0})};
  const std::vector<ModelRecord> f = {record({-0.5}, {1.0}, {1.0, 0.0}),
                                      record({-0.9}, {1.0}, {1.0, 0.0})};
  const auto r = mbe_score(m, f).bias;
  CHECK(r.tie_count == 1);
  CHECK(r.score == 50.0);  // tie weight stays in the denominator

  const std::vector<ModelRecord> far = {record({-0.5}, {1.0}, {-1.0, 0.0})};
  CHECK_THROWS_WITH_AS(mbe_score(m, far), doctest::Contains("no comparable pairs"),
                       mbe::DataError);
  CHECK_THROWS_AS(mbe_score(m, std::vector<ModelRecord>{}), mbe::DataError);
  const std::vector<ModelRecord> wide = {record({-0.5}, {1.0}, {1.0, 0.0, 0.0})};
  CHECK_THROWS_AS(mbe_score(m, wide), mbe::DataError);
}

TEST_CASE("mbe_score matches the double-loop oracle for every worker count") {
  const mbe::mock::MockSpec spec{0.1, 8, 4242};
  const auto males = mbe::testing::mock_records(mbe::testing::synthetic_sentences(37, 3, 12, 1),
                                                Group::male, spec);
  const auto females = mbe::testing::mock_records(
      mbe::testing::synthetic_sentences(29, 3, 12, 2), Group::female, spec);

  // Unclamped negative cosines with tau = 0 sum below zero for random
  // embeddings, which is the "no comparable pairs" error.
  ScoreOptions unclamped;
  unclamped.similarity = {false, 0.0};
  CHECK_THROWS_AS(mbe_score(males, females, unclamped), mbe::DataError);

  const std::vector<SimilarityConfig> configs = {{true, 0.0}, {true, 0.2}, {false, 0.2}};
  for (const auto& [clamp, tau] : configs) {
    const auto ref = mbe::testing::reference_mbe(males, females, clamp, tau);
    ScoreOptions opts;
    opts.similarity = {clamp, tau};
    const auto single = mbe_score(males, females, opts).bias;
    CHECK(single.score == doctest::Approx(ref.score).epsilon(1e-12));
    CHECK(single.indicator_count == ref.indicators);
    for (unsigned workers : {2u, 3u, 8u, 64u}) {
      opts.workers = workers;
      const auto multi = mbe_score(males, females, opts).bias;
      CHECK(multi.score == single.score);  // bit-identical
      CHECK(multi.weighted_numerator == single.weighted_numerator);
      CHECK(multi.weight_total == single.weight_total);
      CHECK(multi.retained_count == single.retained_count);
    }
  }
}

TEST_CASE("properties: scale invariance, swap antisymmetry, constant weights") {
  const mbe::mock::MockSpec spec{0.0, 6, 99};
  auto males = mbe::testing::mock_records(mbe::testing::synthetic_sentences(25, 4, 10, 3),
                                          Group::male, spec);
  auto females = mbe::testing::mock_records(mbe::testing::synthetic_sentences(25, 4, 10, 4),
                                            Group::female, spec);
  const auto base = mbe_score(males, females).bias;
  REQUIRE(base.tie_count == 0);

  for (double k : {3.0, 0.01, 1234.5}) {
    auto sm = males;
    auto sf = females;
    for (auto& r : sm) for (auto& v : r.embedding) v *= k;
    for (auto& r : sf) for (auto& v : r.embedding) v *= k;
    CHECK(mbe_score(sm, sf).bias.score == doctest::Approx(base.score).epsilon(1e-12));
  }

  // Swapping roles flips every indicator; cosine weights are symmetric.
  const auto swapped = mbe_score(females, males).bias;
  CHECK(base.score + swapped.score == doctest::Approx(100.0).epsilon(1e-12));

  // All embeddings identical: C = 1 everywhere.
  for (auto& r : males) r.embedding = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  for (auto& r : females) r.embedding = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto flat = mbe_score(males, females).bias;
  CHECK(flat.score == doctest::Approx(100.0 * static_cast<double>(flat.indicator_count) /
                                      static_cast<double>(flat.pair_count)));
}

TEST_CASE("monotone in the mock bias knob") {
  const auto male_text = mbe::testing::synthetic_sentences(40, 5, 15, 10);
  const auto female_text = mbe::testing::synthetic_sentences(40, 5, 15, 11);
  double previous = -1.0;
  for (double b : {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0}) {
    const mbe::mock::MockSpec spec{b, 8, 5};
    const auto s = mbe_score(mbe::testing::mock_records(male_text, Group::male, spec),
                             mbe::testing::mock_records(female_text, Group::female, spec))
                       .bias.score;
    CHECK(s >= previous);
    previous = s;
  }
}

TEST_CASE("McNemar tallies cover retained pairs and ignore worker count") {
  const mbe::mock::MockSpec spec{0.3, 8, 8};
  const auto males = mbe::testing::mock_records(mbe::testing::synthetic_sentences(30, 4, 9, 20),
                                                Group::male, spec);
  const auto females = mbe::testing::mock_records(
      mbe::testing::synthetic_sentences(30, 4, 9, 21), Group::female, spec);
  ScoreOptions opts;
  opts.mcnemar_seed = 17;
  const auto one = mbe_score(males, females, opts);
  opts.workers = 4;
  const auto four = mbe_score(males, females, opts);
  REQUIRE(one.mcnemar.has_value());
  CHECK(one.mcnemar->total() == one.bias.retained_count);
  CHECK(one.mcnemar->b == four.mcnemar->b);
  CHECK(one.mcnemar->c == four.mcnemar->c);
  CHECK(one.mcnemar->both == four.mcnemar->both);
  CHECK(one.mcnemar->statistic == four.mcnemar->statistic);
}
