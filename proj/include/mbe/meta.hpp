#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbe/stats.hpp"

// Meta-evaluation: compares each method's per-model bias scores against a
// reference method (e.g. human-annotated pairs).
namespace mbe::meta {

struct ScoreRow {
  std::string model_id;
  std::string method;
  double bias_score = 0.0;
};

// TSV rows model_id<TAB>method<TAB>bias_score. An optional header line whose
// first column is "model_id" is skipped, as are blank and '#' lines.
std::vector<ScoreRow> read_score_table(const std::filesystem::path& path);

struct ModelDiff {
  std::string model_id;
  double reference = 0.0;
  double candidate = 0.0;
  double diff = 0.0;  // candidate - reference
};

struct MetaReport {
  std::string method;
  std::vector<ModelDiff> models;
  double direction_agreement = 0.0;
  stats::DiffStats diff;
  // Absent when fewer than three models or either side has zero variance.
  std::optional<stats::Correlations> correlations;
  std::string correlation_note;
};

// One report per non-reference method, in order of first appearance. Only
// models scored by both the reference and the method are compared.
std::vector<MetaReport> compare_methods(const std::vector<ScoreRow>& rows,
                                        const std::string& reference_method);

nlohmann::json to_json(const MetaReport& report);

}  // namespace mbe::meta
