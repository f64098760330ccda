#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Model-record exchange format. A record carries everything the scoring core
// needs from a model run over one sentence; the model itself stays opaque.
namespace mbe::protocol {

enum class Group { female, male, stereo, anti };

std::string_view to_string(Group g);
Group parse_group(std::string_view s);

inline constexpr double kAttentionMassTolerance = 1e-4;

struct ModelRecord {
  std::string id;
  std::optional<Group> group;
  std::string text;
  std::vector<std::string> tokens;     // special tokens excluded
  std::vector<double> token_logprobs;  // natural log, each <= 0
  std::vector<double> attentions;      // nonnegative, sums to 1
  std::vector<double> embedding;

  bool operator==(const ModelRecord&) const = default;
};

// Throws DataError naming the record when any invariant fails.
void validate(const ModelRecord& record);

ModelRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const ModelRecord& record);

// JSON-lines, one record per line. Blank lines are skipped. Every record is
// validated, and all records must share one embedding dimension.
std::vector<ModelRecord> parse_records(std::istream& in, std::string_view source);
std::vector<ModelRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, std::span<const ModelRecord> records);

struct RecordPair {
  std::string pair_id;
  ModelRecord stereo;
  ModelRecord anti;
};

// JSON-lines with keys pair_id, stereo, anti.
std::vector<RecordPair> parse_pairfile(std::istream& in, std::string_view source);
std::vector<RecordPair> validate_pairfile(const std::filesystem::path& path);
void write_pairfile(const std::filesystem::path& path, std::span<const RecordPair> pairs);

}  // namespace mbe::protocol
