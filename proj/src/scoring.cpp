#include "mbe/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "mbe/error.hpp"

namespace mbe::scoring {
namespace {

using protocol::ModelRecord;

double apply_config(double c, const SimilarityConfig& config) {
  if (config.clamp_negative && c < 0.0) return 0.0;
  if (config.threshold > 0.0 && c < config.threshold) return 0.0;
  return c;
}

struct Prepared {
  std::vector<double> aula;
  std::vector<double> unit;  // row-major, unit-length embeddings
};

Prepared prepare(std::span<const ModelRecord> records, std::size_t dim, const char* side) {
  Prepared p;
  p.aula.reserve(records.size());
  p.unit.reserve(records.size() * dim);
  for (const auto& r : records) {
    if (r.embedding.size() != dim) {
      throw DataError(std::string(side) + " record '" + r.id + "' has embedding dimension " +
                      std::to_string(r.embedding.size()) + ", expected " +
                      std::to_string(dim));
    }
    p.aula.push_back(aula(r));
    double norm2 = 0.0;
    for (double v : r.embedding) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) throw DataError("record '" + r.id + "' has a zero embedding");
    for (double v : r.embedding) p.unit.push_back(v / norm);
  }
  return p;
}

struct RowTotals {
  double numerator = 0.0;
  double weight = 0.0;
};

struct WorkerTally {
  std::uint64_t indicators = 0;
  std::uint64_t ties = 0;
  std::uint64_t retained = 0;
  std::optional<stats::McNemarAccumulator> mcnemar;
};

// Shared reduction. `weight(i, j)` yields C for male row i and female column
// j. Each row is summed in column order into its own slot; rows are combined
// afterwards in row order.
template <typename WeightFn>
ScoreOutcome reduce_pairs(std::span<const double> male_aula, std::span<const double> female_aula,
                    const WeightFn& weight, const ScoreOptions& options) {
  const std::size_t nm = male_aula.size();
  const std::size_t nf = female_aula.size();
  const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(options.workers, 1, nm));

  std::vector<RowTotals> rows(nm);
  std::vector<WorkerTally> tallies(workers);
  if (options.mcnemar_seed) {
    for (auto& t : tallies) t.mcnemar.emplace(*options.mcnemar_seed);
  }

  auto score_rows = [&](std::size_t begin, std::size_t end, WorkerTally& tally) {
    for (std::size_t i = begin; i < end; ++i) {
      const double am = male_aula[i];
      RowTotals totals;
      for (std::size_t j = 0; j < nf; ++j) {
        const double w = weight(i, j);
        const double af = female_aula[j];
        const bool preferred = am > af;
        tally.indicators += preferred ? 1 : 0;
        tally.ties += am == af ? 1 : 0;
        if (w != 0.0) {
          ++tally.retained;
          totals.weight += w;
          if (preferred) totals.numerator += w;
          if (tally.mcnemar) tally.mcnemar->add(i * nf + j, preferred);
        }
      }
      rows[i] = totals;
    }
  };

  if (workers == 1) {
    score_rows(0, nm, tallies[0]);
  } else {
    const std::size_t chunk = (nm + workers - 1) / workers;
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(nm, w * chunk);
      const std::size_t end = std::min(nm, begin + chunk);
      threads.emplace_back([&, begin, end, w] { score_rows(begin, end, tallies[w]); });
    }
  }

  ScoreOutcome out;
  auto& bias = out.bias;
  bias.pair_count = static_cast<std::uint64_t>(nm) * nf;
  for (const auto& row : rows) {
    bias.weighted_numerator += row.numerator;
    bias.weight_total += row.weight;
  }
  for (const auto& t : tallies) {
    bias.indicator_count += t.indicators;
    bias.tie_count += t.ties;
    bias.retained_count += t.retained;
  }
  if (!(bias.weight_total > 0.0)) {
    throw DataError("no comparable pairs: total similarity weight is " +
                    std::to_string(bias.weight_total));
  }
  bias.score = 100.0 * bias.weighted_numerator / bias.weight_total;

  if (options.mcnemar_seed) {
    stats::McNemarAccumulator merged(*options.mcnemar_seed);
    for (const auto& t : tallies) merged.merge(*t.mcnemar);
    out.mcnemar = merged.result(options.continuity_correction);
  }
  return out;
}

}  // namespace

double aula(const ModelRecord& r) {
  if (r.tokens.empty() || r.token_logprobs.size() != r.tokens.size() ||
      r.attentions.size() != r.tokens.size()) {
    throw DataError("record '" + r.id + "': per-token lists are empty or misaligned");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) sum += r.attentions[i] * r.token_logprobs[i];
  return sum / static_cast<double>(r.tokens.size());
}

void validate(const SimilarityConfig& config) {
  if (!std::isfinite(config.threshold) || config.threshold < 0.0) {
    throw DataError("similarity threshold must be finite and >= 0");
  }
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DataError("embedding dimension mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) throw DataError("cosine of a zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double sentence_similarity(const ModelRecord& a, const ModelRecord& b,
                           const SimilarityConfig& config) {
  validate(config);
  return apply_config(cosine(a.embedding, b.embedding), config);
}

ScoreOutcome mbe_score(std::span<const ModelRecord> males, std::span<const ModelRecord> females,
                       const ScoreOptions& options) {
  if (males.empty() || females.empty()) {
    throw DataError("mbe_score needs non-empty male and female record sets");
  }
  validate(options.similarity);
  const std::size_t dim = males.front().embedding.size();
  const auto pm = prepare(males, dim, "male");
  const auto pf = prepare(females, dim, "female");

  const auto weight = [&](std::size_t i, std::size_t j) {
    const double* m = pm.unit.data() + i * dim;
    const double* f = pf.unit.data() + j * dim;
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += m[k] * f[k];
    return apply_config(std::clamp(dot, -1.0, 1.0), options.similarity);
  };
  return reduce_pairs(pm.aula, pf.aula, weight, options);
}

ScoreOutcome weighted_preference(std::span<const double> male_aula,
                                 std::span<const double> female_aula,
                                 std::span<const double> weights, const ScoreOptions& options) {
  if (male_aula.empty() || female_aula.empty()) {
    throw DataError("weighted_preference needs non-empty male and female sets");
  }
  if (weights.size() != male_aula.size() * female_aula.size()) {
    throw DataError("weight matrix has " + std::to_string(weights.size()) + " entries, expected " +
                    std::to_string(male_aula.size() * female_aula.size()));
  }
  const std::size_t nf = female_aula.size();
  const auto weight = [&](std::size_t i, std::size_t j) { return weights[i * nf + j]; };
  return reduce_pairs(male_aula, female_aula, weight, options);
}

}  // namespace mbe::scoring
