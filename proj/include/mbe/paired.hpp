#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbe/records.hpp"

// Paired-context evaluation: the identical-context bias score, the shuffled
// (Shf) baseline and template-generated sentence pairs.
namespace mbe::paired {

struct PairedResult {
  double score = 0.0;  // 100 * indicator_count / pair_count
  std::uint64_t pair_count = 0;
  std::uint64_t indicator_count = 0;  // A(stereo) > A(anti)
  std::uint64_t tie_count = 0;
};

PairedResult paired_bias_score(std::span<const protocol::RecordPair> pairs);

// Per-pair outcomes in input order, for significance testing.
std::vector<std::uint8_t> pair_indicators(std::span<const protocol::RecordPair> pairs);

// Pairs male i with female perm(i) for a seeded uniform permutation. Males
// fill the stereo slot.
std::vector<protocol::RecordPair> shuffle_pairs(std::span<const protocol::ModelRecord> males,
                                                std::span<const protocol::ModelRecord> females,
                                                std::uint64_t seed);

inline constexpr std::string_view kGenderSlot = "[Gender]";
inline constexpr std::string_view kOccupationSlot = "[Occupation]";

struct TemplateSpec {
  std::vector<std::string> templates;
  std::vector<std::pair<std::string, std::string>> gender_pairs;  // (male, female)
  std::vector<std::string> occupations;
};

void validate(const TemplateSpec& spec);

// Reads templates.txt, gender_pairs.tsv (male<TAB>female) and occupations.txt
// from `dir`.
TemplateSpec load_template_spec(const std::filesystem::path& dir);

struct TemplatePair {
  std::string male;
  std::string female;

  bool operator==(const TemplatePair&) const = default;
};

// Full product templates x gender_pairs x occupations, template-major.
std::vector<TemplatePair> generate_templates(const TemplateSpec& spec);

// Seeded uniform sample of `count` items, original order kept.
std::vector<TemplatePair> sample_templates(const std::vector<TemplatePair>& pairs,
                                           std::size_t count, std::uint64_t seed);

}  // namespace mbe::paired
