#include "mbe/paired.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <random>

#include "mbe/error.hpp"
#include "mbe/io.hpp"
#include "mbe/scoring.hpp"
#include "mbe/text.hpp"

namespace mbe::paired {
namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string fill_slots(const std::string& tmpl, std::string_view gender, std::string_view occupation) {
  std::string out = tmpl;
  out.replace(out.find(kGenderSlot), kGenderSlot.size(), gender);
  out.replace(out.find(kOccupationSlot), kOccupationSlot.size(), occupation);
  return out;
}

}  // namespace

std::vector<std::uint8_t> pair_indicators(std::span<const protocol::RecordPair> pairs) {
  std::vector<std::uint8_t> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back(scoring::aula(p.stereo) > scoring::aula(p.anti) ? 1 : 0);
  }
  return out;
}

PairedResult paired_bias_score(std::span<const protocol::RecordPair> pairs) {
  if (pairs.empty()) throw DataError("paired_bias_score needs at least one pair");
  PairedResult r;
  r.pair_count = pairs.size();
  for (const auto& p : pairs) {
    const double s = scoring::aula(p.stereo);
    const double a = scoring::aula(p.anti);
    r.indicator_count += s > a ? 1 : 0;
    r.tie_count += s == a ? 1 : 0;
  }
  r.score = 100.0 * static_cast<double>(r.indicator_count) / static_cast<double>(r.pair_count);
  return r;
}

std::vector<protocol::RecordPair> shuffle_pairs(std::span<const protocol::ModelRecord> males,
                                                std::span<const protocol::ModelRecord> females,
                                                std::uint64_t seed) {
  if (males.empty() || females.empty()) throw DataError("shuffle_pairs needs non-empty sets");
  if (males.size() != females.size()) {
    throw DataError("shuffle_pairs: length mismatch (" + std::to_string(males.size()) +
                    " males, " + std::to_string(females.size()) + " females); balance first");
  }
  std::vector<std::size_t> perm(females.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<protocol::RecordPair> out;
  out.reserve(males.size());
  for (std::size_t i = 0; i < males.size(); ++i) {
    out.push_back({"shf-" + std::to_string(i), males[i], females[perm[i]]});
  }
  return out;
}

void validate(const TemplateSpec& spec) {
  if (spec.templates.empty() || spec.gender_pairs.empty() || spec.occupations.empty()) {
    throw DataError("template spec needs templates, gender pairs and occupations");
  }
  for (const auto& t : spec.templates) {
    for (auto slot : {kGenderSlot, kOccupationSlot}) {
      const auto n = count_occurrences(t, slot);
      if (n != 1) {
        throw DataError("template '" + t + "' must contain " + std::string(slot) +
                        " exactly once (found " + std::to_string(n) + ")");
      }
    }
  }
}

TemplateSpec load_template_spec(const std::filesystem::path& dir) {
  TemplateSpec spec;
  spec.templates = io::read_list_file(dir / "templates.txt");
  spec.occupations = io::read_list_file(dir / "occupations.txt");
  const auto pairs_path = dir / "gender_pairs.tsv";
  for (const auto& line : io::read_list_file(pairs_path)) {
    const auto cols = io::split(line, '\t');
    if (cols.size() != 2) {
      throw DataError(pairs_path.string() + ": expected male<TAB>female, got '" + line + "'");
    }
    spec.gender_pairs.emplace_back(text::trim(cols[0]), text::trim(cols[1]));
  }
  validate(spec);
  return spec;
}

std::vector<TemplatePair> generate_templates(const TemplateSpec& spec) {
  validate(spec);
  std::vector<TemplatePair> out;
  out.reserve(spec.templates.size() * spec.gender_pairs.size() * spec.occupations.size());
  for (const auto& t : spec.templates) {
    for (const auto& [male, female] : spec.gender_pairs) {
      for (const auto& occupation : spec.occupations) {
        out.push_back({fill_slots(t, male, occupation), fill_slots(t, female, occupation)});
      }
    }
  }
  return out;
}

std::vector<TemplatePair> sample_templates(const std::vector<TemplatePair>& pairs,
                                           std::size_t count, std::uint64_t seed) {
  if (count > pairs.size()) {
    throw DataError("cannot sample " + std::to_string(count) + " of " +
                    std::to_string(pairs.size()) + " template pairs");
  }
  std::vector<TemplatePair> out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::sample(pairs.begin(), pairs.end(), std::back_inserter(out), count, rng);
  return out;
}

}  // namespace mbe::paired
