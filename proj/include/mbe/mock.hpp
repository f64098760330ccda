#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mbe/records.hpp"

// Deterministic stand-in for a masked language model. Everything is derived
// from SplitMix64 hashes of (seed, text, position), so records are
// reproducible without any model runtime.
namespace mbe::mock {

struct MockSpec {
  double bias_strength = 0.0;  // added to male-group token log-probabilities
  int embed_dim = 16;
  std::uint64_t seed = 0;
};

void validate(const MockSpec& spec);

// Tokens are the whitespace split of `text`. For token i a value u_i in (0, 3]
// is drawn and the log-probability is -u_i - max(b, 0), plus b for the male
// group. Male records therefore sit exactly b above female records of the
// same text while every log-probability stays <= 0.
protocol::ModelRecord mock_score(std::string id, std::string_view text,
                                 std::optional<protocol::Group> group,
                                 const MockSpec& spec);

}  // namespace mbe::mock
