#include "mbe/meta.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mbe/error.hpp"
#include "mbe/io.hpp"
#include "mbe/text.hpp"

namespace mbe::meta {

std::vector<ScoreRow> read_score_table(const std::filesystem::path& path) {
  std::vector<ScoreRow> rows;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto trimmed = text::trim(lines[i]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(i + 1);
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 3) throw DataError(where + ": expected model_id<TAB>method<TAB>bias_score");
    if (rows.empty() && text::trim(cols[0]) == "model_id") continue;
    ScoreRow row{text::trim(cols[0]), text::trim(cols[1]), 0.0};
    const auto value = text::trim(cols[2]);
    try {
      std::size_t used = 0;
      row.bias_score = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw DataError(where + ": bad bias score '" + value + "'");
    }
    if (!std::isfinite(row.bias_score)) throw DataError(where + ": non-finite bias score");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": no score rows");
  return rows;
}

std::vector<MetaReport> compare_methods(const std::vector<ScoreRow>& rows,
                                        const std::string& reference_method) {
  std::map<std::string, double> reference;
  std::vector<std::string> methods;
  std::map<std::string, std::vector<const ScoreRow*>> by_method;
  for (const auto& row : rows) {
    if (row.method == reference_method) {
      if (!reference.emplace(row.model_id, row.bias_score).second) {
        throw DataError("duplicate reference score for model '" + row.model_id + "'");
      }
      continue;
    }
    if (!by_method.count(row.method)) methods.push_back(row.method);
    by_method[row.method].push_back(&row);
  }
  if (reference.empty()) throw DataError("no rows for reference method '" + reference_method + "'");

  std::vector<MetaReport> reports;
  for (const auto& method : methods) {
    MetaReport report;
    report.method = method;
    std::vector<double> ref, cand;
    for (const auto* row : by_method[method]) {
      const auto it = reference.find(row->model_id);
      if (it == reference.end()) continue;
      report.models.push_back(
          {row->model_id, it->second, row->bias_score, row->bias_score - it->second});
      ref.push_back(it->second);
      cand.push_back(row->bias_score);
    }
    if (report.models.empty()) {
      throw DataError("method '" + method + "' shares no models with '" + reference_method + "'");
    }
    report.diff = stats::diff_stats(ref, cand);
    report.direction_agreement = stats::direction_agreement(ref, cand);
    if (ref.size() < 3) {
      report.correlation_note = "fewer than 3 models";
    } else {
      try {
        report.correlations = stats::correlations(ref, cand);
      } catch (const DataError& e) {
        report.correlation_note = e.what();
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

nlohmann::json to_json(const MetaReport& report) {
  using nlohmann::json;
  json models = json::array();
  for (const auto& m : report.models) {
    models.push_back({{"model_id", m.model_id},
                      {"reference", m.reference},
                      {"candidate", m.candidate},
                      {"diff", m.diff}});
  }
  json j = {{"method", report.method},
            {"n", report.models.size()},
            {"models", models},
            {"direction_agreement", report.direction_agreement},
            {"diff_signed_mean", report.diff.signed_mean},
            {"diff_abs_mean", report.diff.abs_mean}};
  if (report.correlations) {
    j["spearman_rho"] = report.correlations->spearman_rho;
    j["pearson_r"] = report.correlations->pearson_r;
    j["pearson_p"] = report.correlations->pearson_p;
  } else {
    j["spearman_rho"] = nullptr;
    j["pearson_r"] = nullptr;
    j["pearson_p"] = nullptr;
    j["correlation_note"] = report.correlation_note;
  }
  return j;
}

}  // namespace mbe::meta
