#include "mbe/mock.hpp"

#include <algorithm>
#include <cmath>

#include "mbe/error.hpp"
#include "mbe/hash.hpp"
#include "mbe/text.hpp"

namespace mbe::mock {
namespace {

// Stream tags keep the three per-token draws independent.
constexpr std::uint64_t kLogprobStream = 0x6c6f6770726f6273ULL;
constexpr std::uint64_t kAttentionStream = 0x617474656e74696fULL;
constexpr std::uint64_t kEmbeddingStream = 0x656d626564646e67ULL;

double draw(std::uint64_t text_key, std::uint64_t stream, std::uint64_t index) {
  return hash::to_unit_open_closed(hash::combine(hash::combine(text_key, stream), index));
}

}  // namespace

void validate(const MockSpec& spec) {
  if (spec.embed_dim < 2) throw DataError("mock embed_dim must be >= 2");
  if (!std::isfinite(spec.bias_strength)) throw DataError("mock bias_strength must be finite");
}

protocol::ModelRecord mock_score(std::string id, std::string_view text,
                                 std::optional<protocol::Group> group,
                                 const MockSpec& spec) {
  validate(spec);
  auto tokens = text::split_whitespace(text);
  if (tokens.empty()) throw DataError("mock_score: empty text for record '" + id + "'");

  const std::uint64_t text_key = hash::combine(spec.seed, hash::fnv1a(text));
  const double b = spec.bias_strength;
  const double shift = -std::max(b, 0.0) + (group == protocol::Group::male ? b : 0.0);

  protocol::ModelRecord r;
  r.id = std::move(id);
  r.group = group;
  r.text = std::string(text);

  const std::size_t n = tokens.size();
  r.token_logprobs.resize(n);
  r.attentions.resize(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.token_logprobs[i] = -3.0 * draw(text_key, kLogprobStream, i) + shift;
    r.attentions[i] = draw(text_key, kAttentionStream, i);
    mass += r.attentions[i];
  }
  for (auto& a : r.attentions) a /= mass;
  r.tokens = std::move(tokens);

  r.embedding.resize(static_cast<std::size_t>(spec.embed_dim));
  double norm2 = 0.0;
  for (std::size_t j = 0; j < r.embedding.size(); ++j) {
    r.embedding[j] = 2.0 * draw(text_key, kEmbeddingStream, j) - 1.0;
    norm2 += r.embedding[j] * r.embedding[j];
  }
  // (0,1] draws map to (-1,1]; an all-zero vector would need every draw at
  // exactly one half, so the norm is positive.
  const double norm = std::sqrt(norm2);
  for (auto& v : r.embedding) v /= norm;
  return r;
}

}  // namespace mbe::mock
