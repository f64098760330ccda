#include "mbe/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbe/corpus.hpp"
#include "mbe/error.hpp"
#include "mbe/io.hpp"
#include "mbe/meta.hpp"
#include "mbe/mock.hpp"
#include "mbe/paired.hpp"
#include "mbe/records.hpp"
#include "mbe/scoring.hpp"
#include "mbe/stats.hpp"

namespace mbe::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json envelope(std::string_view command, json config) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", std::move(config)}};
}

void emit_report(const json& report, const std::string& path, std::ostream& out) {
  const auto text = report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    io::write_atomic(path, text);
  }
}

std::string default_report_path(const std::string& out, const std::string& report) {
  return report.empty() ? out + ".report.json" : report;
}

json bias_json(const scoring::BiasResult& r) {
  return json{{"score", r.score},
              {"weighted_numerator", r.weighted_numerator},
              {"weight_total", r.weight_total},
              {"pair_count", r.pair_count},
              {"indicator_count", r.indicator_count},
              {"tie_count", r.tie_count},
              {"retained_count", r.retained_count}};
}

json mcnemar_json(const stats::McNemarResult& r) {
  return json{{"b", r.b},
              {"c", r.c},
              {"both", r.both},
              {"neither", r.neither},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"significant", r.significant},
              {"alpha", stats::kSignificanceLevel},
              {"continuity_correction", r.continuity_correction}};
}

json paired_json(const paired::PairedResult& r) {
  return json{{"score", r.score},
              {"pair_count", r.pair_count},
              {"indicator_count", r.indicator_count},
              {"tie_count", r.tie_count}};
}

void print_mcnemar(std::ostream& err, const stats::McNemarResult& m) {
  err << "  mcnemar  b=" << m.b << " c=" << m.c << " both=" << m.both
      << " neither=" << m.neither << "  chi2=" << m.statistic << "  p=" << m.p_value
      << (m.significant ? "  (significant)" : "") << "\n";
}

void warn_ties(std::ostream& err, std::uint64_t ties) {
  if (ties > 0) err << "warning: " << ties << " tied comparison(s) counted as not preferred\n";
}

void require_group(const std::vector<protocol::ModelRecord>& records, protocol::Group expected,
                   const std::string& path) {
  for (const auto& r : records) {
    if (r.group && *r.group != expected) {
      throw DataError(path + ": record '" + r.id + "' has group '" +
                      std::string(protocol::to_string(*r.group)) + "', expected '" +
                      std::string(protocol::to_string(expected)) + "'");
    }
  }
}

// Text pair files carry pair_id plus stereo/anti objects that hold at least
// `text`; they are what the template generator emits and a backend consumes.
struct TextPair {
  std::string pair_id;
  std::string stereo_id, stereo_text;
  std::string anti_id, anti_text;
};

std::vector<TextPair> read_text_pairs(const fs::path& path) {
  std::vector<TextPair> pairs;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(i + 1) + ": ";
    try {
      const auto j = json::parse(lines[i]);
      TextPair p;
      p.pair_id = j.value("pair_id", "pair-" + std::to_string(i + 1));
      for (const char* member : {"stereo", "anti"}) {
        if (!j.contains(member) || !j[member].is_object() || !j[member].contains("text")) {
          throw DataError("pair '" + p.pair_id + "' is missing member '" + member + "'");
        }
      }
      p.stereo_text = j["stereo"]["text"].get<std::string>();
      p.anti_text = j["anti"]["text"].get<std::string>();
      p.stereo_id = j["stereo"].value("id", p.pair_id + "-stereo");
      p.anti_id = j["anti"].value("id", p.pair_id + "-anti");
      pairs.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw DataError(where + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  if (pairs.empty()) throw DataError(path.string() + ": no pairs");
  return pairs;
}

std::string text_pairs_jsonl(const std::vector<paired::TemplatePair>& pairs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto id = "tmp-" + std::to_string(i);
    out << json{{"pair_id", id},
                {"stereo", {{"id", id + "-m"}, {"group", "stereo"}, {"text", pairs[i].male}}},
                {"anti", {{"id", id + "-f"}, {"group", "anti"}, {"text", pairs[i].female}}}}
               .dump()
        << '\n';
  }
  return out.str();
}

corpus::MatchMode parse_match_mode(const std::string& s) {
  if (s == "word") return corpus::MatchMode::word_boundary;
  if (s == "substring") return corpus::MatchMode::substring;
  throw UsageError("--matching must be 'word' or 'substring'");
}

struct Options {
  // shared
  std::string out, report;
  std::uint64_t seed = 0;
  std::uint64_t mcnemar_seed = 0;
  bool continuity = false;
  // extract
  std::vector<std::string> corpus_files;
  std::string tsv, lang = "und", corpus_id;
  std::string female, male, female_names, male_names;
  // balance / preservation / mock-score
  std::string subsets;
  std::string female_terms, male_terms, matching = "word";
  std::string out_male, out_female, pairs;
  double bias = 0.0;
  int dim = 16;
  // score / shf
  std::string males, females;
  double tau = 0.0;
  bool no_clamp = false;
  unsigned workers = 1;
  // templates
  std::string template_dir;
  std::size_t sample = 0;
  // substitute-names
  std::string input, name_map;
  // meta
  std::string scores, reference = "HT";
  // mcnemar
  std::string indicators;
  std::vector<std::uint64_t> table;
};

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.corpus_files.empty() == o.tsv.empty()) {
    throw UsageError("extract: give exactly one of --corpus EN,TGT or --tsv FILE");
  }
  std::vector<fs::path> sources;
  corpus::CorpusFormat format = corpus::CorpusFormat::tsv;
  if (!o.corpus_files.empty()) {
    if (o.corpus_files.size() != 2) throw UsageError("--corpus takes two comma-separated paths");
    sources = {o.corpus_files[0], o.corpus_files[1]};
    format = corpus::CorpusFormat::moses_two_files;
  } else {
    sources = {o.tsv};
  }
  const auto loaded = corpus::load_parallel(sources, format, o.lang);

  auto female = corpus::load_word_list(o.female);
  auto male = corpus::load_word_list(o.male);
  if (!o.female_names.empty()) {
    female = corpus::merge_word_lists(female, corpus::load_word_list(o.female_names));
  }
  if (!o.male_names.empty()) {
    male = corpus::merge_word_lists(male, corpus::load_word_list(o.male_names));
  }

  std::string corpus_id = o.corpus_id;
  if (corpus_id.empty()) {
    for (const auto& s : sources) corpus_id += (corpus_id.empty() ? "" : ",") + s.string();
  }
  const auto subsets = corpus::extract_gendered(loaded.corpus, female, male, corpus_id);
  corpus::write_subsets(o.out, subsets);

  json config = {{"corpus", o.corpus_files}, {"tsv", o.tsv},
                 {"lang", o.lang},           {"corpus_id", corpus_id},
                 {"female", o.female},       {"male", o.male},
                 {"female_names", o.female_names}, {"male_names", o.male_names},
                 {"out", o.out}};
  auto report = envelope("extract", config);
  report["load"] = {{"lines_read", loaded.report.lines_read},
                    {"pairs", loaded.corpus.pairs.size()},
                    {"dropped_empty", loaded.report.dropped_lines.size()},
                    {"dropped_lines", loaded.report.dropped_lines}};
  report["result"] = {{"female", subsets.female.size()}, {"male", subsets.male.size()}};
  emit_report(report, default_report_path(o.out, o.report), out);

  err << "extract: " << loaded.corpus.pairs.size() << " pairs ("
      << loaded.report.dropped_lines.size() << " dropped), female " << subsets.female.size()
      << ", male " << subsets.male.size() << "\n";
  return kExitOk;
}

int cmd_balance(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = corpus::read_subsets(o.subsets);
  const auto balanced = corpus::downsample_balance(in, o.seed);
  corpus::write_subsets(o.out, balanced);
  auto report = envelope("balance", {{"subsets", o.subsets}, {"seed", o.seed}, {"out", o.out}});
  report["result"] = {{"female_before", in.female.size()},
                      {"male_before", in.male.size()},
                      {"female", balanced.female.size()},
                      {"male", balanced.male.size()}};
  emit_report(report, default_report_path(o.out, o.report), out);
  err << "balance: " << in.female.size() << "/" << in.male.size() << " -> "
      << balanced.female.size() << "/" << balanced.male.size() << "\n";
  return kExitOk;
}

int cmd_mock_score(const Options& o, std::ostream& out, std::ostream& err) {
  const mock::MockSpec spec{o.bias, o.dim, o.seed};
  mock::validate(spec);
  json config = {{"bias_strength", o.bias}, {"embed_dim", o.dim}, {"seed", o.seed}};
  auto report = envelope("mock-score", config);

  if (!o.subsets.empty()) {
    if (o.out_male.empty() || o.out_female.empty()) {
      throw UsageError("mock-score --subsets needs --out-male and --out-female");
    }
    const auto subsets = corpus::read_subsets(o.subsets);
    std::vector<protocol::ModelRecord> males, females;
    for (std::size_t i = 0; i < subsets.male.size(); ++i) {
      males.push_back(mock::mock_score("m" + std::to_string(i), subsets.male[i].target,
                                       protocol::Group::male, spec));
    }
    for (std::size_t i = 0; i < subsets.female.size(); ++i) {
      females.push_back(mock::mock_score("f" + std::to_string(i), subsets.female[i].target,
                                         protocol::Group::female, spec));
    }
    protocol::write_records(o.out_male, males);
    protocol::write_records(o.out_female, females);
    report["config"]["subsets"] = o.subsets;
    report["config"]["out_male"] = o.out_male;
    report["config"]["out_female"] = o.out_female;
    report["result"] = {{"male_records", males.size()}, {"female_records", females.size()}};
    emit_report(report, default_report_path(o.out_male, o.report), out);
    err << "mock-score: " << males.size() << " male, " << females.size() << " female records\n";
  } else if (!o.pairs.empty()) {
    if (o.out.empty()) throw UsageError("mock-score --pairs needs --out");
    std::vector<protocol::RecordPair> scored;
    for (const auto& p : read_text_pairs(o.pairs)) {
      scored.push_back({p.pair_id,
                        mock::mock_score(p.stereo_id, p.stereo_text, protocol::Group::stereo, spec),
                        mock::mock_score(p.anti_id, p.anti_text, protocol::Group::anti, spec)});
    }
    protocol::write_pairfile(o.out, scored);
    report["config"]["pairs"] = o.pairs;
    report["config"]["out"] = o.out;
    report["result"] = {{"pairs", scored.size()}};
    emit_report(report, default_report_path(o.out, o.report), out);
    err << "mock-score: " << scored.size() << " pairs\n";
  } else {
    throw UsageError("mock-score needs --subsets or --pairs");
  }
  return kExitOk;
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const auto males = protocol::read_records(o.males);
  const auto females = protocol::read_records(o.females);
  require_group(males, protocol::Group::male, o.males);
  require_group(females, protocol::Group::female, o.females);

  scoring::ScoreOptions options;
  options.similarity = {!o.no_clamp, o.tau};
  options.workers = o.workers;
  options.mcnemar_seed = o.mcnemar_seed;
  options.continuity_correction = o.continuity;
  const auto outcome = scoring::mbe_score(males, females, options);

  auto report = envelope("score", {{"males", o.males},
                                   {"females", o.females},
                                   {"tau", o.tau},
                                   {"clamp_negative", !o.no_clamp},
                                   {"workers", o.workers},
                                   {"mcnemar_seed", o.mcnemar_seed},
                                   {"continuity_correction", o.continuity}});
  report["result"] = bias_json(outcome.bias);
  report["mcnemar"] = mcnemar_json(*outcome.mcnemar);
  emit_report(report, o.out, out);

  err << "MBE score " << std::fixed << std::setprecision(2) << outcome.bias.score << "  ("
      << males.size() << " male x " << females.size() << " female, "
      << outcome.bias.retained_count << " retained pairs)\n"
      << std::defaultfloat;
  print_mcnemar(err, *outcome.mcnemar);
  warn_ties(err, outcome.bias.tie_count);
  return kExitOk;
}

int cmd_paired_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto pairs = protocol::validate_pairfile(o.pairs);
  const auto result = paired::paired_bias_score(pairs);
  const auto indicators = paired::pair_indicators(pairs);
  const auto mc = stats::mcnemar_vs_random(indicators, o.mcnemar_seed, o.continuity);

  auto report = envelope("paired-eval", {{"pairs", o.pairs},
                                         {"mcnemar_seed", o.mcnemar_seed},
                                         {"continuity_correction", o.continuity}});
  report["result"] = paired_json(result);
  report["mcnemar"] = mcnemar_json(mc);
  emit_report(report, o.out, out);

  err << "paired bias score " << std::fixed << std::setprecision(2) << result.score << "  ("
      << result.pair_count << " pairs)\n"
      << std::defaultfloat;
  print_mcnemar(err, mc);
  warn_ties(err, result.tie_count);
  return kExitOk;
}

int cmd_shf(const Options& o, std::ostream& out, std::ostream& err) {
  const auto males = protocol::read_records(o.males);
  const auto females = protocol::read_records(o.females);
  const auto pairs = paired::shuffle_pairs(males, females, o.seed);
  const auto result = paired::paired_bias_score(pairs);

  auto report =
      envelope("shf", {{"males", o.males}, {"females", o.females}, {"seed", o.seed}});
  report["result"] = paired_json(result);
  emit_report(report, o.out, out);
  err << "Shf score " << std::fixed << std::setprecision(2) << result.score << "\n"
      << std::defaultfloat;
  warn_ties(err, result.tie_count);
  return kExitOk;
}

int cmd_templates(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = paired::load_template_spec(o.template_dir);
  auto pairs = paired::generate_templates(spec);
  const auto generated = pairs.size();
  if (o.sample > 0) pairs = paired::sample_templates(pairs, o.sample, o.seed);
  io::write_atomic(o.out, text_pairs_jsonl(pairs));

  auto report = envelope("templates", {{"dir", o.template_dir},
                                       {"sample", o.sample},
                                       {"seed", o.seed},
                                       {"out", o.out}});
  report["result"] = {{"templates", spec.templates.size()},
                      {"gender_pairs", spec.gender_pairs.size()},
                      {"occupations", spec.occupations.size()},
                      {"generated", generated},
                      {"written", pairs.size()}};
  emit_report(report, default_report_path(o.out, o.report), out);
  err << "templates: generated " << generated << ", wrote " << pairs.size() << "\n";
  return kExitOk;
}

int cmd_substitute_names(const Options& o, std::ostream& out, std::ostream& err) {
  const auto lines = io::read_lines(o.input);
  const auto map = corpus::load_name_map(o.name_map);
  const auto replaced = corpus::substitute_names(lines, map, o.seed);
  std::size_t changed = 0;
  std::string text;
  for (std::size_t i = 0; i < replaced.size(); ++i) {
    changed += replaced[i] != lines[i] ? 1 : 0;
    text += replaced[i] + "\n";
  }
  io::write_atomic(o.out, text);

  auto report = envelope("substitute-names", {{"input", o.input},
                                              {"name_map", o.name_map},
                                              {"seed", o.seed},
                                              {"out", o.out}});
  report["result"] = {{"sentences", lines.size()}, {"changed", changed}};
  emit_report(report, default_report_path(o.out, o.report), out);
  err << "substitute-names: " << changed << " of " << lines.size() << " sentences changed\n";
  return kExitOk;
}

int cmd_preservation(const Options& o, std::ostream& out, std::ostream& err) {
  const auto mode = parse_match_mode(o.matching);
  const auto subsets = corpus::read_subsets(o.subsets);
  const auto female = corpus::load_word_list(o.female_terms);
  const auto male = corpus::load_word_list(o.male_terms);
  const auto r = corpus::gender_preservation_rate(subsets, female, male, mode);

  auto report = envelope("preservation", {{"subsets", o.subsets},
                                          {"female_terms", o.female_terms},
                                          {"male_terms", o.male_terms},
                                          {"matching", o.matching}});
  report["result"] = {{"female_preserved", r.female_fraction()},
                      {"male_preserved", r.male_fraction()},
                      {"female_counts", {r.female_preserved, r.female_total}},
                      {"male_counts", {r.male_preserved, r.male_total}}};
  emit_report(report, o.out, out);
  err << "preservation: female " << r.female_preserved << "/" << r.female_total << ", male "
      << r.male_preserved << "/" << r.male_total << "\n";
  return kExitOk;
}

int cmd_meta(const Options& o, std::ostream& out, std::ostream& err) {
  const auto rows = meta::read_score_table(o.scores);
  const auto reports = meta::compare_methods(rows, o.reference);

  auto report = envelope("meta", {{"scores", o.scores}, {"reference", o.reference}});
  report["comparisons"] = json::array();
  for (const auto& r : reports) report["comparisons"].push_back(meta::to_json(r));
  emit_report(report, o.out, out);

  err << std::fixed << std::setprecision(2);
  for (const auto& r : reports) {
    err << r.method << " vs " << o.reference << ":\n";
    for (const auto& m : r.models) {
      err << "  " << std::left << std::setw(24) << m.model_id << std::right << std::setw(8)
          << m.candidate << std::setw(8) << std::showpos << m.diff << std::noshowpos << "\n";
    }
    err << "  direction " << r.direction_agreement << "  diff " << std::showpos
        << r.diff.signed_mean << std::noshowpos << " (abs " << r.diff.abs_mean << ")\n";
  }
  err << std::defaultfloat;
  return kExitOk;
}

int cmd_mcnemar(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.indicators.empty() == o.table.empty()) {
    throw UsageError("mcnemar: give exactly one of --indicators FILE or --table b,c,both,neither");
  }
  stats::McNemarResult r;
  if (!o.table.empty()) {
    if (o.table.size() != 4) throw UsageError("--table takes four counts: b,c,both,neither");
    r = stats::mcnemar_from_table(o.table[0], o.table[1], o.table[2], o.table[3], o.continuity);
  } else {
    std::vector<std::uint8_t> values;
    const auto lines = io::read_lines(o.indicators);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      if (lines[i] != "0" && lines[i] != "1") {
        throw DataError(o.indicators + ":" + std::to_string(i + 1) + ": expected 0 or 1");
      }
      values.push_back(lines[i] == "1" ? 1 : 0);
    }
    r = stats::mcnemar_vs_random(values, o.seed, o.continuity);
  }
  auto report = envelope("mcnemar", {{"indicators", o.indicators},
                                     {"table", o.table},
                                     {"seed", o.seed},
                                     {"continuity_correction", o.continuity}});
  report["result"] = mcnemar_json(r);
  emit_report(report, o.out, out);
  print_mcnemar(err, r);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilingual bias evaluation for masked language models", "mbe"};
  app.require_subcommand(1);
  Options o;

  auto* extract = app.add_subcommand("extract", "Extract female/male sentence subsets");
  extract->add_option("--corpus", o.corpus_files, "English and target files")->delimiter(',');
  extract->add_option("--tsv", o.tsv, "Two-column TSV corpus");
  extract->add_option("--lang", o.lang, "Target language tag")->capture_default_str();
  extract->add_option("--corpus-id", o.corpus_id, "Corpus identifier for provenance");
  extract->add_option("--female", o.female, "Female word list")->required();
  extract->add_option("--male", o.male, "Male word list")->required();
  extract->add_option("--female-names", o.female_names, "Female name list merged into --female");
  extract->add_option("--male-names", o.male_names, "Male name list merged into --male");
  extract->add_option("--out", o.out, "Subsets TSV")->required();
  extract->add_option("--report", o.report, "Report JSON (default <out>.report.json)");

  auto* balance = app.add_subcommand("balance", "Downsample the larger subset");
  balance->add_option("--subsets", o.subsets)->required();
  balance->add_option("--seed", o.seed)->required();
  balance->add_option("--out", o.out)->required();
  balance->add_option("--report", o.report);

  auto* mock_cmd = app.add_subcommand("mock-score", "Score sentences with the mock backend");
  mock_cmd->add_option("--subsets", o.subsets, "Subsets TSV to score (target side)");
  mock_cmd->add_option("--out-male", o.out_male);
  mock_cmd->add_option("--out-female", o.out_female);
  mock_cmd->add_option("--pairs", o.pairs, "Text pair JSONL to score");
  mock_cmd->add_option("--out", o.out);
  mock_cmd->add_option("--bias", o.bias, "Added to male log-probabilities")->capture_default_str();
  mock_cmd->add_option("--dim", o.dim, "Embedding dimension")->capture_default_str();
  mock_cmd->add_option("--seed", o.seed)->required();
  mock_cmd->add_option("--report", o.report);

  auto* score = app.add_subcommand("score", "Similarity-weighted MBE bias score");
  score->add_option("--males", o.males)->required();
  score->add_option("--females", o.females)->required();
  score->add_option("--tau", o.tau, "Similarity threshold")->capture_default_str();
  score->add_flag("--no-clamp", o.no_clamp, "Keep negative cosine weights");
  score->add_option("--workers", o.workers)->capture_default_str()->check(CLI::PositiveNumber);
  score->add_option("--mcnemar-seed", o.mcnemar_seed)->capture_default_str();
  score->add_flag("--continuity", o.continuity, "McNemar continuity correction");
  score->add_option("--out", o.out);

  auto* paired_cmd = app.add_subcommand("paired-eval", "Identical-context pair bias score");
  paired_cmd->add_option("--pairs", o.pairs)->required();
  paired_cmd->add_option("--mcnemar-seed", o.mcnemar_seed)->capture_default_str();
  paired_cmd->add_flag("--continuity", o.continuity);
  paired_cmd->add_option("--out", o.out);

  auto* shf = app.add_subcommand("shf", "Shuffled-pairing baseline");
  shf->add_option("--males", o.males)->required();
  shf->add_option("--females", o.females)->required();
  shf->add_option("--seed", o.seed)->required();
  shf->add_option("--out", o.out);

  auto* templates = app.add_subcommand("templates", "Generate template sentence pairs");
  templates->add_option("--dir", o.template_dir,
                        "Directory with templates.txt, gender_pairs.tsv, occupations.txt")
      ->required();
  templates->add_option("--sample", o.sample, "Keep a seeded sample of this many pairs");
  templates->add_option("--seed", o.seed)->capture_default_str();
  templates->add_option("--out", o.out)->required();
  templates->add_option("--report", o.report);

  auto* names = app.add_subcommand("substitute-names", "Replace personal names");
  names->add_option("--input", o.input, "One sentence per line")->required();
  names->add_option("--name-map", o.name_map)->required();
  names->add_option("--seed", o.seed)->required();
  names->add_option("--out", o.out)->required();
  names->add_option("--report", o.report);

  auto* preservation = app.add_subcommand("preservation", "Gender preservation audit");
  preservation->add_option("--subsets", o.subsets)->required();
  preservation->add_option("--female-terms", o.female_terms)->required();
  preservation->add_option("--male-terms", o.male_terms)->required();
  preservation->add_option("--matching", o.matching, "word | substring")->capture_default_str();
  preservation->add_option("--out", o.out);

  auto* meta_cmd = app.add_subcommand("meta", "Compare methods against a reference");
  meta_cmd->add_option("--scores", o.scores, "TSV: model_id, method, bias_score")->required();
  meta_cmd->add_option("--reference", o.reference)->capture_default_str();
  meta_cmd->add_option("--out", o.out);

  auto* mcnemar = app.add_subcommand("mcnemar", "McNemar test against random indicators");
  mcnemar->add_option("--indicators", o.indicators, "One 0/1 per line");
  mcnemar->add_option("--table", o.table, "b,c,both,neither")->delimiter(',');
  mcnemar->add_option("--seed", o.seed)->capture_default_str();
  mcnemar->add_flag("--continuity", o.continuity);
  mcnemar->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) return cmd_extract(o, out, err);
    if (balance->parsed()) return cmd_balance(o, out, err);
    if (mock_cmd->parsed()) return cmd_mock_score(o, out, err);
    if (score->parsed()) return cmd_score(o, out, err);
    if (paired_cmd->parsed()) return cmd_paired_eval(o, out, err);
    if (shf->parsed()) return cmd_shf(o, out, err);
    if (templates->parsed()) return cmd_templates(o, out, err);
    if (names->parsed()) return cmd_substitute_names(o, out, err);
    if (preservation->parsed()) return cmd_preservation(o, out, err);
    if (meta_cmd->parsed()) return cmd_meta(o, out, err);
    if (mcnemar->parsed()) return cmd_mcnemar(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace mbe::cli
