#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mbe/error.hpp"
#include "mbe/mock.hpp"
#include "mbe/records.hpp"
#include "mbe/scoring.hpp"

using mbe::mock::MockSpec;
using mbe::mock::mock_score;
using mbe::protocol::Group;

TEST_CASE("mock records are deterministic and valid") {
  const MockSpec spec{0.25, 6, 77};
  const auto a = mock_score("x", "the quick brown fox", Group::male, spec);
  const auto b = mock_score("x", "the quick brown fox", Group::male, spec);
  CHECK(a == b);
  CHECK(mbe::protocol::record_to_json(a).dump() == mbe::protocol::record_to_json(b).dump());
  CHECK_NOTHROW(mbe::protocol::validate(a));
  CHECK(a.tokens == std::vector<std::string>{"the", "quick", "brown", "fox"});
  CHECK(a.embedding.size() == 6);

  double norm2 = 0.0;
  for (double v : a.embedding) norm2 += v * v;
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  const double mass = std::accumulate(a.attentions.begin(), a.attentions.end(), 0.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("seed and text change the draws") {
  const auto a = mock_score("x", "a b c", Group::female, {0.0, 4, 1});
  const auto b = mock_score("x", "a b c", Group::female, {0.0, 4, 2});
  const auto c = mock_score("x", "a b d", Group::female, {0.0, 4, 1});
  CHECK(a.token_logprobs != b.token_logprobs);
  CHECK(a.token_logprobs != c.token_logprobs);
}

TEST_CASE("zero bias: male and female records of one text share log-probabilities") {
  const MockSpec spec{0.0, 4, 9};
  const auto m = mock_score("m", "er ist Arzt", Group::male, spec);
  const auto f = mock_score("f", "er ist Arzt", Group::female, spec);
  CHECK(m.token_logprobs == f.token_logprobs);
  CHECK(m.attentions == f.attentions);
  CHECK(m.embedding == f.embedding);
}

TEST_CASE("constant shift: AULA(male) - AULA(female) = b / |T|") {
  for (double b : {0.5, -0.5, 1.25}) {
    const MockSpec spec{b, 4, 3};
    for (const char* text : {"one", "one two three", "a b c d e f g h i j k"}) {
      const auto m = mock_score("m", text, Group::male, spec);
      const auto f = mock_score("f", text, Group::female, spec);
      const double n = static_cast<double>(m.tokens.size());
      CHECK(mbe::scoring::aula(m) - mbe::scoring::aula(f) ==
            doctest::Approx(b / n).epsilon(1e-12));
      for (double lp : m.token_logprobs) CHECK(lp <= 0.0);
      for (double lp : f.token_logprobs) CHECK(lp <= 0.0);
    }
  }
}

TEST_CASE("mock errors") {
  CHECK_THROWS_AS(mock_score("x", "   ", Group::male, {}), mbe::DataError);
  CHECK_THROWS_AS(mock_score("x", "a", Group::male, {0.0, 1, 0}), mbe::DataError);
  CHECK_THROWS_AS(mock_score("x", "a", Group::male, {NAN, 4, 0}), mbe::DataError);
}
