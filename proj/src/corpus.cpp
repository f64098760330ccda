#include "mbe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <json.hpp>

#include "mbe/error.hpp"
#include "mbe/io.hpp"
#include "mbe/text.hpp"

namespace mbe::corpus {
namespace {

using nlohmann::json;

void add_pair(LoadedCorpus& loaded, std::size_t line_no, std::string_view english,
              std::string_view target) {
  auto e = text::trim(english);
  auto t = text::trim(target);
  if (e.empty() || t.empty()) {
    loaded.report.dropped_lines.push_back(line_no);
    return;
  }
  loaded.corpus.pairs.push_back({std::move(e), std::move(t)});
}

bool any_word_in(const std::vector<std::string>& words, const WordList& list) {
  return std::any_of(words.begin(), words.end(),
                     [&](const std::string& w) { return list.words.count(w) > 0; });
}

// Script of a code point, with Common/Inherited reported as-is.
UScriptCode script_of(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  const auto code = uscript_getScript(c, &status);
  return U_FAILURE(status) ? USCRIPT_INVALID_CODE : code;
}

// True when `a` and `b` sit inside one word: both alphanumeric and of the
// same concrete script.
bool continues_word(UChar32 a, UChar32 b) {
  if (a < 0 || b < 0) return false;
  if (!u_isalnum(a) || !u_isalnum(b)) return false;
  const auto sa = script_of(a);
  const auto sb = script_of(b);
  if (sa == USCRIPT_COMMON || sa == USCRIPT_INHERITED) return false;
  return sa == sb;
}

UChar32 first_code_point(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  UChar32 c;
  U8_NEXT(bytes, i, static_cast<int32_t>(s.size()), c);
  return c;
}

UChar32 last_code_point(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = static_cast<int32_t>(s.size());
  UChar32 c;
  U8_PREV(bytes, 0, i, c);
  return c;
}

bool is_whole_word(std::string_view sentence, std::size_t begin, std::size_t end) {
  const auto name = sentence.substr(begin, end - begin);
  if (begin > 0 &&
      continues_word(last_code_point(sentence.substr(0, begin)), first_code_point(name))) {
    return false;
  }
  if (end < sentence.size() &&
      continues_word(last_code_point(name), first_code_point(sentence.substr(end)))) {
    return false;
  }
  return true;
}

std::size_t utf8_sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

NameGender parse_gender(std::string_view g, const std::string& where) {
  const auto folded = text::fold_case(g);
  if (folded == "female" || folded == "f") return NameGender::female;
  if (folded == "male" || folded == "m") return NameGender::male;
  throw DataError(where + ": unknown gender '" + std::string(g) + "'");
}

}  // namespace

LoadedCorpus load_parallel(const std::vector<std::filesystem::path>& sources,
                           CorpusFormat format, std::string language_tag) {
  LoadedCorpus loaded;
  loaded.corpus.language_tag = std::move(language_tag);

  if (format == CorpusFormat::moses_two_files) {
    if (sources.size() != 2) {
      throw DataError("two-file corpus needs exactly two paths (english, target)");
    }
    const auto english = io::read_lines(sources[0]);
    const auto target = io::read_lines(sources[1]);
    if (english.size() != target.size()) {
      throw DataError("alignment mismatch: " + sources[0].string() + " has " +
                      std::to_string(english.size()) + " lines, " + sources[1].string() +
                      " has " + std::to_string(target.size()));
    }
    loaded.report.lines_read = english.size();
    for (std::size_t i = 0; i < english.size(); ++i) {
      add_pair(loaded, i + 1, english[i], target[i]);
    }
  } else {
    if (sources.size() != 1) throw DataError("TSV corpus needs exactly one path");
    const auto lines = io::read_lines(sources[0]);
    loaded.report.lines_read = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto cols = io::split(lines[i], '\t');
      if (cols.size() != 2) {
        throw DataError(sources[0].string() + ":" + std::to_string(i + 1) +
                        ": expected exactly one tab, found " +
                        std::to_string(cols.size() - 1));
      }
      add_pair(loaded, i + 1, cols[0], cols[1]);
    }
  }
  return loaded;
}

WordList make_word_list(std::string name, const std::vector<std::string>& entries) {
  WordList list{std::move(name), {}};
  for (const auto& raw : entries) {
    auto entry = text::trim(raw);
    if (entry.empty()) continue;
    if (text::contains_whitespace(entry)) {
      throw DataError("word list '" + list.name + "': entry '" + entry +
                      "' contains whitespace");
    }
    list.words.insert(text::fold_case(entry));
  }
  if (list.words.empty()) throw DataError("word list '" + list.name + "' is empty");
  return list;
}

WordList load_word_list(const std::filesystem::path& path, std::string name) {
  if (name.empty()) name = path.stem().string();
  return make_word_list(std::move(name), io::read_list_file(path));
}

WordList merge_word_lists(const WordList& a, const WordList& b) {
  WordList merged{a.name + "+" + b.name, a.words};
  merged.words.insert(b.words.begin(), b.words.end());
  return merged;
}

std::vector<Assignment> classify(const ParallelCorpus& corpus, const WordList& female,
                                 const WordList& male) {
  std::vector<std::string> overlap;
  std::set_intersection(female.words.begin(), female.words.end(), male.words.begin(),
                        male.words.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw DataError("word lists '" + female.name + "' and '" + male.name +
                    "' overlap on '" + overlap.front() + "' (" +
                    std::to_string(overlap.size()) + " shared)");
  }
  if (corpus.pairs.empty()) throw DataError("empty corpus");

  std::vector<Assignment> out;
  out.reserve(corpus.pairs.size());
  for (const auto& pair : corpus.pairs) {
    const auto words = text::words(pair.english);
    const bool f = any_word_in(words, female);
    const bool m = any_word_in(words, male);
    out.push_back(f && m ? Assignment::both
                  : f    ? Assignment::female
                  : m    ? Assignment::male
                         : Assignment::neither);
  }
  return out;
}

GenderedSubsets extract_gendered(const ParallelCorpus& corpus, const WordList& female,
                                 const WordList& male, std::string corpus_id) {
  const auto assignment = classify(corpus, female, male);
  GenderedSubsets out;
  out.provenance = {std::move(corpus_id), female.name, male.name, std::nullopt};
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == Assignment::female) out.female.push_back(corpus.pairs[i]);
    if (assignment[i] == Assignment::male) out.male.push_back(corpus.pairs[i]);
  }
  return out;
}

GenderedSubsets downsample_balance(const GenderedSubsets& subsets, std::uint64_t seed) {
  if (subsets.female.empty() || subsets.male.empty()) {
    throw DataError("cannot balance: " +
                    std::string(subsets.female.empty() ? "female" : "male") +
                    " subset is empty");
  }
  GenderedSubsets out;
  out.provenance = subsets.provenance;
  out.provenance.balance_seed = seed;

  const bool female_larger = subsets.female.size() > subsets.male.size();
  const auto& larger = female_larger ? subsets.female : subsets.male;
  const auto& smaller = female_larger ? subsets.male : subsets.female;

  std::mt19937_64 rng(seed);
  std::vector<SentencePair> kept;
  kept.reserve(smaller.size());
  std::sample(larger.begin(), larger.end(), std::back_inserter(kept), smaller.size(), rng);

  out.female = female_larger ? std::move(kept) : subsets.female;
  out.male = female_larger ? subsets.male : std::move(kept);
  return out;
}

void add_name(NameMap& map, NameGender gender, const std::string& source,
              const std::string& replacement) {
  if (source.empty() || replacement.empty()) {
    throw DataError("name map: empty source or replacement name");
  }
  auto [it, inserted] = map.names.try_emplace(source, NameMap::Entry{gender, {}});
  if (!inserted && it->second.gender != gender) {
    throw DataError("name map: '" + source + "' listed under both genders");
  }
  it->second.replacements.push_back(replacement);
}

NameMap load_name_map(const std::filesystem::path& path) {
  NameMap map;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto trimmed = text::trim(lines[i]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(i + 1);
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 3) throw DataError(where + ": expected 3 tab-separated columns");
    add_name(map, parse_gender(text::trim(cols[0]), where), text::trim(cols[1]),
             text::trim(cols[2]));
  }
  if (map.names.empty()) throw DataError(path.string() + ": name map is empty");
  return map;
}

std::vector<std::string> substitute_names(const std::vector<std::string>& sentences,
                                          const NameMap& name_map, std::uint64_t seed) {
  // Longest source names first so "Ann" never shadows "Anna".
  std::vector<const std::pair<const std::string, NameMap::Entry>*> by_length;
  for (const auto& entry : name_map.names) {
    if (entry.first.empty() || entry.second.replacements.empty()) {
      throw DataError("name map: empty source name or replacement list");
    }
    by_length.push_back(&entry);
  }
  std::stable_sort(by_length.begin(), by_length.end(), [](auto* a, auto* b) {
    return a->first.size() > b->first.size();
  });

  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    std::string result;
    std::size_t pos = 0;
    while (pos < sentence.size()) {
      const NameMap::Entry* hit = nullptr;
      std::size_t hit_len = 0;
      for (const auto* entry : by_length) {
        const auto& name = entry->first;
        if (sentence.compare(pos, name.size(), name) == 0 &&
            is_whole_word(sentence, pos, pos + name.size())) {
          hit = &entry->second;
          hit_len = name.size();
          break;
        }
      }
      if (hit) {
        std::uniform_int_distribution<std::size_t> pick(0, hit->replacements.size() - 1);
        result += hit->replacements[pick(rng)];
        pos += hit_len;
      } else {
        const auto len = std::min(utf8_sequence_length(static_cast<unsigned char>(sentence[pos])),
                                  sentence.size() - pos);
        result.append(sentence, pos, len);
        pos += len;
      }
    }
    out.push_back(std::move(result));
  }
  return out;
}

bool contains_term(std::string_view sentence, const WordList& terms, MatchMode mode) {
  if (mode == MatchMode::word_boundary) {
    const auto words = text::words(sentence);
    return any_word_in(words, terms);
  }
  const auto folded = text::fold_case(sentence);
  return std::any_of(terms.words.begin(), terms.words.end(), [&](const std::string& t) {
    return folded.find(t) != std::string::npos;
  });
}

PreservationReport gender_preservation_rate(const GenderedSubsets& subsets,
                                            const WordList& target_female_terms,
                                            const WordList& target_male_terms,
                                            MatchMode mode) {
  if (subsets.female.empty() || subsets.male.empty()) {
    throw DataError("preservation audit needs non-empty female and male subsets");
  }
  if (target_female_terms.words.empty() || target_male_terms.words.empty()) {
    throw DataError("preservation audit needs non-empty target term lists");
  }
  PreservationReport report;
  report.female_total = subsets.female.size();
  report.male_total = subsets.male.size();
  for (const auto& p : subsets.female) {
    report.female_preserved += contains_term(p.target, target_female_terms, mode) ? 1 : 0;
  }
  for (const auto& p : subsets.male) {
    report.male_preserved += contains_term(p.target, target_male_terms, mode) ? 1 : 0;
  }
  return report;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta.json";
  return p;
}

void write_subsets(const std::filesystem::path& path, const GenderedSubsets& subsets) {
  std::ostringstream tsv;
  tsv << "group\tenglish\ttarget\n";
  auto emit = [&](std::string_view group, const std::vector<SentencePair>& rows) {
    for (const auto& p : rows) {
      if (p.english.find_first_of("\t\n") != std::string::npos ||
          p.target.find_first_of("\t\n") != std::string::npos) {
        throw DataError("sentence contains a tab or newline; cannot write TSV: " +
                        p.english);
      }
      tsv << group << '\t' << p.english << '\t' << p.target << '\n';
    }
  };
  emit("female", subsets.female);
  emit("male", subsets.male);

  json meta = {
      {"schema_version", 1},
      {"corpus_id", subsets.provenance.corpus_id},
      {"female_list", subsets.provenance.female_list},
      {"male_list", subsets.provenance.male_list},
      {"balance_seed", subsets.provenance.balance_seed
                           ? json(*subsets.provenance.balance_seed)
                           : json(nullptr)},
      {"female_count", subsets.female.size()},
      {"male_count", subsets.male.size()},
  };
  io::write_atomic(path, tsv.str());
  io::write_atomic(sidecar_path(path), meta.dump(2) + "\n");
}

GenderedSubsets read_subsets(const std::filesystem::path& path) {
  const auto lines = io::read_lines(path);
  if (lines.empty() || lines.front() != "group\tenglish\ttarget") {
    throw DataError(path.string() + ": missing header 'group\\tenglish\\ttarget'");
  }
  GenderedSubsets out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto where = path.string() + ":" + std::to_string(i + 1);
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 3) throw DataError(where + ": expected 3 columns");
    SentencePair pair{cols[1], cols[2]};
    if (cols[0] == "female") {
      out.female.push_back(std::move(pair));
    } else if (cols[0] == "male") {
      out.male.push_back(std::move(pair));
    } else {
      throw DataError(where + ": unknown group '" + cols[0] + "'");
    }
  }

  const auto meta_path = sidecar_path(path);
  if (std::filesystem::exists(meta_path)) {
    try {
      std::ifstream in(meta_path);
      const auto meta = json::parse(in);
      out.provenance.corpus_id = meta.value("corpus_id", "");
      out.provenance.female_list = meta.value("female_list", "");
      out.provenance.male_list = meta.value("male_list", "");
      if (meta.contains("balance_seed") && !meta["balance_seed"].is_null()) {
        out.provenance.balance_seed = meta["balance_seed"].get<std::uint64_t>();
      }
    } catch (const json::exception& e) {
      throw DataError(meta_path.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace mbe::corpus
