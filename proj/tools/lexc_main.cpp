// lexc: parse, lint, run and audit contracts written in the lexc DSL.

#include "lexc/corpus.hpp"
#include "lexc/evaluator.hpp"
#include "lexc/force_majeure.hpp"
#include "lexc/json_format.hpp"
#include "lexc/linter.hpp"
#include "lexc/parser.hpp"
#include "lexc/printer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lexc;

enum Exit { kOk = 0, kFindings = 1, kInvalid = 2, kEvalFailed = 3, kIoError = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void report_parse_error(const std::string& file, const ParseError& e) {
  std::cerr << file << ":" << e.line() << ":" << e.column() << ": expected " << e.expected() << ", found "
            << e.found() << "\n";
}

void report_structural(const std::string& file, const StructuralError& e) {
  std::cerr << file << ":" << e.span.line << ":" << e.span.column << ": " << to_string(e.kind) << ": " << e.message
            << "\n";
}

struct Options {
  std::string format = "text";
  bool json() const { return format == "json"; }
};

void add_format(CLI::App* cmd, Options& opts) {
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

int cmd_parse(const std::string& file, const Options& opts) {
  auto parsed = parse_and_validate(read_file(file));
  for (const auto& e : parsed.errors) report_structural(file, e);
  if (!parsed.errors.empty()) return kInvalid;
  const std::string text = print_canonical(parsed.ast);
  if (opts.json()) {
    std::cout << nlohmann::json{{"file", file}, {"canonical", text}}.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  return kOk;
}

int cmd_lint(const std::string& file, const Options& opts) {
  auto parsed = parse_and_validate(read_file(file));
  bool fatal = false;
  for (const auto& e : parsed.errors) {
    if (e.kind == StructuralErrorKind::UnresolvedName) continue;  // reported as LEX005
    report_structural(file, e);
    fatal = true;
  }
  if (fatal) return kInvalid;
  const auto findings = lint(parsed.ast);
  for (const auto& note : detect_conflicts(parsed.ast).skipped) std::cerr << "note: " << note << "\n";
  if (opts.json()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& f : findings) out.push_back(to_json(f, file));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& f : findings) {
      std::cout << f.code << " " << file << ":" << f.span.line << ":" << f.span.column << " " << f.message << "\n";
    }
  }
  return findings.empty() ? kOk : kFindings;
}

int cmd_run(const std::string& file, const std::string& scenario_file, int max_passes, const Options& opts) {
  auto parsed = parse_and_validate(read_file(file));
  for (const auto& e : parsed.errors) report_structural(file, e);
  if (!parsed.errors.empty()) return kInvalid;
  Scenario scenario;
  try {
    scenario = parse_scenario(read_file(scenario_file));
  } catch (const ParseError& e) {
    report_parse_error(scenario_file, e);
    return kInvalid;
  }
  try {
    const auto ledger = run(parsed.ast, scenario, RunOptions{max_passes});
    if (opts.json()) {
      std::cout << to_json(ledger).dump(2) << "\n";
    } else {
      std::cout << serialize_ledger(ledger);
    }
  } catch (const EvalError& e) {
    if (opts.json()) {
      std::cerr << to_json(e).dump() << "\n";
    } else {
      std::cerr << format_error(e) << "\n";
    }
    return kEvalFailed;
  }
  return kOk;
}

struct FmArgs {
  std::string catalog;
  std::string event;
  int sim_threshold = 7;
  std::string impact_threshold = "7";
};

fm::FmThresholds thresholds_of(const FmArgs& args) {
  fm::FmThresholds t;
  t.similarity_min = args.sim_threshold;
  if (args.impact_threshold == "off") {
    t.impact_min.reset();
  } else {
    t.impact_min = std::stoi(args.impact_threshold);
  }
  return t;
}

fm::TableScoreProvider load_provider(const std::string& path) {
  try {
    return fm::TableScoreProvider::load(path);
  } catch (const ParseError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

int cmd_fm_classify(const FmArgs& args, const Options& opts) {
  const auto provider = load_provider(args.catalog);
  const auto scores = provider.score(args.event);
  const bool included = fm::classify(scores, thresholds_of(args));
  if (opts.json()) {
    std::cout << nlohmann::json{{"event", scores.name},
                                {"similarity", scores.similarity},
                                {"impact", scores.impact},
                                {"included", included}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << (included ? "included" : "excluded") << "\n";
  }
  return kOk;
}

int cmd_fm_filter(const FmArgs& args, const Options& opts) {
  const auto provider = load_provider(args.catalog);
  const auto included = fm::filter_catalog(provider.to_catalog("catalog"), thresholds_of(args));
  if (opts.json()) {
    std::cout << nlohmann::json(included).dump(2) << "\n";
  } else {
    for (const auto& name : included) std::cout << name << "\n";
  }
  return kOk;
}

int cmd_corpus_run(const std::string& dir, const std::string& report_file, int max_passes, const Options& opts) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir);
  const auto entries = load_corpus(dir);
  std::vector<EntryResult> results;
  for (const auto& entry : entries) {
    results.push_back(run_entry(entry, RunOptions{max_passes}));
    for (const auto& s : results.back().scenarios) {
      if (!s.matches_expected) std::cerr << entry.id << "/" << s.name << ": ledger differs from expected\n";
    }
  }
  const auto report = build_report(entries, results);
  const std::string text = opts.json() ? to_json(report).dump(2) + "\n" : format_report(report);
  std::cout << text;
  if (!report_file.empty()) {
    std::ofstream out(report_file, std::ios::binary);
    if (!out || !(out << text)) throw IoError("cannot write " + report_file);
  }
  return report.all_agree() ? kOk : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contracts as code: parse, lint, run and audit lexc contracts", "lexc"};
  app.require_subcommand(1);
  Options opts;

  std::string file;
  std::string scenario_file;
  int max_passes = kDefaultMaxPasses;
  FmArgs fm_args;
  std::string corpus_dir;
  std::string report_file;

  auto* parse_cmd = app.add_subcommand("parse", "Print the canonical form of a contract");
  parse_cmd->add_option("file", file, "Contract (.lexc)")->required();
  add_format(parse_cmd, opts);

  auto* lint_cmd = app.add_subcommand("lint", "Report drafting ambiguities");
  lint_cmd->add_option("file", file, "Contract (.lexc)")->required();
  add_format(lint_cmd, opts);

  auto* run_cmd = app.add_subcommand("run", "Evaluate a contract against a scenario");
  run_cmd->add_option("file", file, "Contract (.lexc)")->required();
  run_cmd->add_option("--scenario", scenario_file, "Scenario (.scn)")->required();
  run_cmd->add_option("--max-passes", max_passes, "Rectification pass limit")->check(CLI::PositiveNumber);
  add_format(run_cmd, opts);

  auto* fm_cmd = app.add_subcommand("fm", "Force majeure event classification");
  fm_cmd->require_subcommand(1);
  auto add_fm_options = [&](CLI::App* cmd) {
    cmd->add_option("--catalog", fm_args.catalog, "Scored event table (.tsv)")->required();
    cmd->add_option("--sim-threshold", fm_args.sim_threshold, "Minimum similarity")->check(CLI::PositiveNumber);
    cmd->add_option("--impact-threshold", fm_args.impact_threshold, "Minimum impact, or 'off'")
        ->check(CLI::IsMember({"off"}) | CLI::PositiveNumber);
    add_format(cmd, opts);
  };
  auto* classify_cmd = fm_cmd->add_subcommand("classify", "Decide whether one event is covered");
  add_fm_options(classify_cmd);
  classify_cmd->add_option("--event", fm_args.event, "Event name")->required();
  auto* filter_cmd = fm_cmd->add_subcommand("filter", "List covered events");
  add_fm_options(filter_cmd);

  auto* corpus_cmd = app.add_subcommand("corpus", "Case corpus");
  corpus_cmd->require_subcommand(1);
  auto* corpus_run_cmd = corpus_cmd->add_subcommand("run", "Run every entry and print the alignment report");
  corpus_run_cmd->add_option("dir", corpus_dir, "Corpus directory")->required();
  corpus_run_cmd->add_option("--report", report_file, "Also write the report here");
  corpus_run_cmd->add_option("--max-passes", max_passes, "Rectification pass limit")->check(CLI::PositiveNumber);
  add_format(corpus_run_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kInvalid;
  }

  std::string current = file;
  try {
    if (*parse_cmd) return cmd_parse(file, opts);
    if (*lint_cmd) return cmd_lint(file, opts);
    if (*run_cmd) return cmd_run(file, scenario_file, max_passes, opts);
    current = fm_args.catalog;
    if (*classify_cmd) return cmd_fm_classify(fm_args, opts);
    if (*filter_cmd) return cmd_fm_filter(fm_args, opts);
    current = corpus_dir;
    if (*corpus_run_cmd) return cmd_corpus_run(corpus_dir, report_file, max_passes, opts);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError& e) {
    report_parse_error(current, e);
    return kInvalid;
  } catch (const fm::FmError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
