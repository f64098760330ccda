#include "mbe/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mbe/error.hpp"
#include "mbe/io.hpp"

namespace mbe::protocol {
namespace {

using nlohmann::json;

std::string format_mass(double mass) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", mass);
  if (std::string_view(buf) == "1.00") std::snprintf(buf, sizeof buf, "%.6f", mass);
  return buf;
}

[[noreturn]] void fail(const ModelRecord& r, const std::string& what) {
  throw DataError("record '" + r.id + "': " + what);
}

template <typename T>
std::vector<T> get_array(const json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array()) throw DataError(std::string("field '") + key + "' is not an array");
  return v.get<std::vector<T>>();
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

template <typename Fn>
void for_each_json_line(std::istream& in, std::string_view source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where(source, line_no) + "malformed JSON: " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const DataError& e) {
      throw DataError(where(source, line_no) + e.what());
    } catch (const json::exception& e) {
      throw DataError(where(source, line_no) + e.what());
    }
  }
}

void check_dimension(std::optional<std::size_t>& dim, const ModelRecord& r) {
  if (!dim) {
    dim = r.embedding.size();
  } else if (*dim != r.embedding.size()) {
    fail(r, "embedding dimension " + std::to_string(r.embedding.size()) +
                " differs from file dimension " + std::to_string(*dim));
  }
}

}  // namespace

std::string_view to_string(Group g) {
  switch (g) {
    case Group::female: return "female";
    case Group::male: return "male";
    case Group::stereo: return "stereo";
    case Group::anti: return "anti";
  }
  return "?";
}

Group parse_group(std::string_view s) {
  if (s == "female") return Group::female;
  if (s == "male") return Group::male;
  if (s == "stereo") return Group::stereo;
  if (s == "anti") return Group::anti;
  throw DataError("unknown group '" + std::string(s) + "'");
}

void validate(const ModelRecord& r) {
  if (r.id.empty()) throw DataError("record with empty id");
  if (r.tokens.empty()) fail(r, "no tokens");
  const auto n = r.tokens.size();
  if (r.token_logprobs.size() != n || r.attentions.size() != n) {
    fail(r, "per-token lengths differ (tokens " + std::to_string(n) + ", token_logprobs " +
                std::to_string(r.token_logprobs.size()) + ", attentions " +
                std::to_string(r.attentions.size()) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = r.token_logprobs[i];
    if (!std::isfinite(lp) || lp > 0.0) {
      fail(r, "token_logprobs[" + std::to_string(i) + "] = " + std::to_string(lp) +
                  " is not a finite value <= 0");
    }
    const double a = r.attentions[i];
    if (!std::isfinite(a) || a < 0.0) {
      fail(r, "attentions[" + std::to_string(i) + "] is negative or not finite");
    }
  }
  const double mass = std::accumulate(r.attentions.begin(), r.attentions.end(), 0.0);
  if (std::abs(mass - 1.0) > kAttentionMassTolerance) {
    fail(r, "attention mass " + format_mass(mass) + " outside tolerance");
  }
  if (r.embedding.empty()) fail(r, "empty embedding");
  bool nonzero = false;
  for (double v : r.embedding) {
    if (!std::isfinite(v)) fail(r, "embedding has a non-finite value");
    nonzero = nonzero || v != 0.0;
  }
  if (!nonzero) fail(r, "embedding is the zero vector");
}

ModelRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  ModelRecord r;
  if (!j.contains("id") || !j["id"].is_string()) throw DataError("missing string field 'id'");
  r.id = j["id"].get<std::string>();
  if (j.contains("group") && !j["group"].is_null()) {
    r.group = parse_group(j["group"].get<std::string>());
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    throw DataError("record '" + r.id + "': missing string field 'text'");
  }
  r.text = j["text"].get<std::string>();
  try {
    r.tokens = get_array<std::string>(j, "tokens");
    r.token_logprobs = get_array<double>(j, "token_logprobs");
    r.attentions = get_array<double>(j, "attentions");
    r.embedding = get_array<double>(j, "embedding");
  } catch (const DataError& e) {
    throw DataError("record '" + r.id + "': " + e.what());
  } catch (const json::exception& e) {
    throw DataError("record '" + r.id + "': " + e.what());
  }
  return r;
}

json record_to_json(const ModelRecord& r) {
  return json{
      {"id", r.id},
      {"group", r.group ? json(std::string(to_string(*r.group))) : json(nullptr)},
      {"text", r.text},
      {"tokens", r.tokens},
      {"token_logprobs", r.token_logprobs},
      {"attentions", r.attentions},
      {"embedding", r.embedding},
  };
}

std::vector<ModelRecord> parse_records(std::istream& in, std::string_view source) {
  std::vector<ModelRecord> records;
  std::optional<std::size_t> dim;
  for_each_json_line(in, source, [&](const json& j, std::size_t) {
    auto r = record_from_json(j);
    validate(r);
    check_dimension(dim, r);
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<ModelRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_records(in, path.string());
}

void write_records(const std::filesystem::path& path, std::span<const ModelRecord> records) {
  std::ostringstream out;
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
  io::write_atomic(path, out.str());
}

std::vector<RecordPair> parse_pairfile(std::istream& in, std::string_view source) {
  std::vector<RecordPair> pairs;
  std::optional<std::size_t> dim;
  for_each_json_line(in, source, [&](const json& j, std::size_t line_no) {
    if (!j.is_object()) throw DataError("pair line is not a JSON object");
    RecordPair p;
    p.pair_id = j.contains("pair_id") && j["pair_id"].is_string()
                    ? j["pair_id"].get<std::string>()
                    : "pair-" + std::to_string(line_no);
    for (const char* member : {"stereo", "anti"}) {
      if (!j.contains(member) || j[member].is_null()) {
        throw DataError("pair '" + p.pair_id + "' is missing member '" + member + "'");
      }
    }
    p.stereo = record_from_json(j["stereo"]);
    p.anti = record_from_json(j["anti"]);
    validate(p.stereo);
    validate(p.anti);
    check_dimension(dim, p.stereo);
    check_dimension(dim, p.anti);
    pairs.push_back(std::move(p));
  });
  if (pairs.empty()) throw DataError(std::string(source) + ": no pairs");
  return pairs;
}

std::vector<RecordPair> validate_pairfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_pairfile(in, path.string());
}

void write_pairfile(const std::filesystem::path& path, std::span<const RecordPair> pairs) {
  std::ostringstream out;
  for (const auto& p : pairs) {
    out << json{{"pair_id", p.pair_id},
                {"stereo", record_to_json(p.stereo)},
                {"anti", record_to_json(p.anti)}}
               .dump()
        << '\n';
  }
  io::write_atomic(path, out.str());
}

}  // namespace mbe::protocol
