#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mbe/records.hpp"
#include "mbe/stats.hpp"

namespace mbe::scoring {

// Attention-weighted all-unmasked likelihood:
//   (1/|T|) * sum_i attention_i * logprob_i
double aula(const protocol::ModelRecord& record);

struct SimilarityConfig {
  bool clamp_negative = true;  // negative cosines become weight 0
  double threshold = 0.0;      // when > 0, cosines below it become weight 0
};

void validate(const SimilarityConfig& config);

double cosine(std::span<const double> a, std::span<const double> b);

double sentence_similarity(const protocol::ModelRecord& a, const protocol::ModelRecord& b,
                           const SimilarityConfig& config = {});

struct BiasResult {
  double score = 0.0;  // 100 * weighted_numerator / weight_total
  double weighted_numerator = 0.0;
  double weight_total = 0.0;
  std::uint64_t pair_count = 0;       // |males| * |females|
  std::uint64_t indicator_count = 0;  // pairs with A(male) > A(female)
  std::uint64_t tie_count = 0;        // pairs with A(male) == A(female)
  std::uint64_t retained_count = 0;   // pairs with nonzero weight
};

struct ScoreOptions {
  SimilarityConfig similarity;
  unsigned workers = 1;
  // When set, every retained pair's indicator is tallied against a random
  // coin for the McNemar test. Pair (i, j) uses coin index i * |females| + j.
  std::optional<std::uint64_t> mcnemar_seed;
  bool continuity_correction = false;
};

struct ScoreOutcome {
  BiasResult bias;
  std::optional<stats::McNemarResult> mcnemar;
};

// Similarity-weighted share of male-over-female preferences across all
// male x female pairs. Rows are split across workers; row sums are combined in
// row order so the result is bit-identical for any worker count. Throws
// DataError when no pair carries positive weight.
ScoreOutcome mbe_score(std::span<const protocol::ModelRecord> males,
                       std::span<const protocol::ModelRecord> females,
                       const ScoreOptions& options = {});

// The same reduction over precomputed AULA values and an explicit row-major
// |males| x |females| weight matrix, used as given (no clamping).
ScoreOutcome weighted_preference(std::span<const double> male_aula,
                                 std::span<const double> female_aula,
                                 std::span<const double> weights,
                                 const ScoreOptions& options = {});

}  // namespace mbe::scoring
