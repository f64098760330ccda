#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Parallel corpus ingestion, gendered-sentence extraction, balancing, name
// substitution and the gender-preservation audit.
namespace mbe::corpus {

struct SentencePair {
  std::string english;
  std::string target;

  bool operator==(const SentencePair&) const = default;
};

struct ParallelCorpus {
  std::string language_tag;
  std::vector<SentencePair> pairs;
};

struct LoadReport {
  std::size_t lines_read = 0;
  // 1-based line numbers dropped because one side was empty after trimming.
  std::vector<std::size_t> dropped_lines;
};

struct LoadedCorpus {
  ParallelCorpus corpus;
  LoadReport report;
};

enum class CorpusFormat { moses_two_files, tsv };

// Two-file form: sources = {english_file, target_file}. TSV form: a single
// file with exactly one tab per line (english<TAB>target).
LoadedCorpus load_parallel(const std::vector<std::filesystem::path>& sources,
                           CorpusFormat format, std::string language_tag);

struct WordList {
  std::string name;
  std::set<std::string> words;
};

// Entries are case-folded; an empty list or an entry with inner whitespace
// is rejected.
WordList make_word_list(std::string name, const std::vector<std::string>& entries);
WordList load_word_list(const std::filesystem::path& path, std::string name = {});
WordList merge_word_lists(const WordList& a, const WordList& b);

struct Provenance {
  std::string corpus_id;
  std::string female_list;
  std::string male_list;
  std::optional<std::uint64_t> balance_seed;
};

struct GenderedSubsets {
  std::vector<SentencePair> female;
  std::vector<SentencePair> male;
  Provenance provenance;
};

enum class Assignment { female, male, both, neither };

// Per-pair classification of the English side; index-aligned with the corpus.
std::vector<Assignment> classify(const ParallelCorpus& corpus, const WordList& female,
                                 const WordList& male);

GenderedSubsets extract_gendered(const ParallelCorpus& corpus, const WordList& female,
                                 const WordList& male, std::string corpus_id = {});

// Samples the larger side uniformly without replacement down to the smaller
// side's size. Relative order of the kept sentences is preserved.
GenderedSubsets downsample_balance(const GenderedSubsets& subsets, std::uint64_t seed);

enum class NameGender { female, male };

struct NameMap {
  struct Entry {
    NameGender gender;
    std::vector<std::string> replacements;
  };
  std::map<std::string, Entry> names;
};

// Rows: gender<TAB>source_name<TAB>replacement_name. Gender is "female"/"f"
// or "male"/"m".
NameMap load_name_map(const std::filesystem::path& path);
void add_name(NameMap& map, NameGender gender, const std::string& source,
              const std::string& replacement);

// Replaces whole-word occurrences of mapped names. An occurrence is whole-word
// when the neighbouring characters do not continue it: they are absent,
// non-alphanumeric, or alphanumerics of a different script (so a katakana name
// followed by a hiragana particle is a match).
std::vector<std::string> substitute_names(const std::vector<std::string>& sentences,
                                          const NameMap& name_map, std::uint64_t seed);

enum class MatchMode { word_boundary, substring };

struct PreservationReport {
  std::size_t female_preserved = 0;
  std::size_t female_total = 0;
  std::size_t male_preserved = 0;
  std::size_t male_total = 0;

  double female_fraction() const {
    return static_cast<double>(female_preserved) / static_cast<double>(female_total);
  }
  double male_fraction() const {
    return static_cast<double>(male_preserved) / static_cast<double>(male_total);
  }
};

bool contains_term(std::string_view sentence, const WordList& terms, MatchMode mode);

PreservationReport gender_preservation_rate(const GenderedSubsets& subsets,
                                            const WordList& target_female_terms,
                                            const WordList& target_male_terms,
                                            MatchMode mode);

// TSV with header "group\tenglish\ttarget" and a JSON sidecar at
// `<path>.meta.json` holding the provenance.
void write_subsets(const std::filesystem::path& path, const GenderedSubsets& subsets);
GenderedSubsets read_subsets(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace mbe::corpus
