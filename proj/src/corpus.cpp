#include "lexc/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace lexc {

namespace fs = std::filesystem;

std::string_view to_string(Alignment alignment) {
  switch (alignment) {
    case Alignment::Match: return "Match";
    case Alignment::Partial: return "Partial";
    case Alignment::Opposite: return "Opposite";
    case Alignment::LintOnly: return "LintOnly";
  }
  return "?";
}

std::string_view to_string(OppositeCause cause) {
  switch (cause) {
    case OppositeCause::EncodingError: return "EncodingError";
    case OppositeCause::AmbiguousLanguage: return "AmbiguousLanguage";
    case OppositeCause::Either: return "Either";
  }
  return "?";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::Equals: return "equals";
    case Relation::Exists: return "exists";
    case Relation::Absent: return "absent";
  }
  return "?";
}

std::optional<Alignment> parse_alignment(std::string_view text) {
  for (auto a : {Alignment::Match, Alignment::Partial, Alignment::Opposite, Alignment::LintOnly}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<OppositeCause> parse_cause(std::string_view text) {
  for (auto c : {OppositeCause::EncodingError, OppositeCause::AmbiguousLanguage, OppositeCause::Either}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<Relation> parse_relation(std::string_view text) {
  for (auto r : {Relation::Equals, Relation::Exists, Relation::Absent}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t from = 0;
  for (;;) {
    std::size_t tab = line.find('\t', from);
    fields.push_back(line.substr(from, tab == std::string::npos ? std::string::npos : tab - from));
    if (tab == std::string::npos) break;
    from = tab + 1;
  }
  return fields;
}

// Non-blank, non-comment lines with their 1-based numbers.
std::vector<std::pair<int, std::string>> data_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(number, line);
  }
  return out;
}

bool is_scenario_file(const std::string& rel, std::string& stem) {
  if (rel.size() < 5 || rel.compare(rel.size() - 4, 4, ".scn") != 0 || rel.find('/') != std::string::npos) {
    return false;
  }
  stem = rel.substr(0, rel.size() - 4);
  return !stem.empty() && std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void read_meta(CorpusEntry& entry, const std::string& text, const std::string& where) {
  bool have_alignment = false;
  for (const auto& [number, line] : data_lines(text)) {
    const auto fields = split_tabs(line);
    const std::string at = where + ":" + std::to_string(number) + ": ";
    const std::string& key = fields[0];
    if (key == "assert") {
      if (fields.size() != 7) throw ManifestError(at + "assert needs 6 fields");
      Assertion a;
      a.scenario = fields[1];
      a.subject = fields[2];
      auto relation = parse_relation(fields[3]);
      if (!relation) throw ManifestError(at + "unknown relation '" + fields[3] + "'");
      a.relation = *relation;
      a.expected = fields[4];
      if (fields[5] != "yes" && fields[5] != "no") throw ManifestError(at + "evaluable must be yes or no");
      a.evaluable = fields[5] == "yes";
      a.reason = fields[6];
      if (!a.evaluable && a.reason.empty()) throw ManifestError(at + "non-evaluable assertion needs a reason");
      entry.assertions.push_back(std::move(a));
      continue;
    }
    if (fields.size() != 2) throw ManifestError(at + "expected key<TAB>value");
    const std::string& value = fields[1];
    if (key == "id") {
      if (value != entry.id) throw ManifestError(at + "id '" + value + "' does not match directory " + entry.id);
    } else if (key == "title") {
      entry.title = value;
    } else if (key == "citation") {
      entry.citation = value;
    } else if (key == "alignment") {
      auto alignment = parse_alignment(value);
      if (!alignment) throw ManifestError(at + "unknown alignment '" + value + "'");
      entry.expected_alignment = *alignment;
      have_alignment = true;
    } else if (key == "cause") {
      auto cause = parse_cause(value);
      if (!cause) throw ManifestError(at + "unknown cause '" + value + "'");
      entry.opposite_cause = cause;
    } else {
      throw ManifestError(at + "unknown key '" + key + "'");
    }
  }
  if (!have_alignment) throw ManifestError(where + ": missing alignment");
  if (entry.expected_alignment == Alignment::Opposite && !entry.opposite_cause) {
    throw ManifestError(where + ": Opposite entry needs a cause");
  }
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const fs::path& directory) {
  if (!fs::is_directory(directory)) throw ManifestError("not a directory: " + directory.string());
  const fs::path manifest_path = directory / "manifest.tsv";
  auto manifest = read_file(manifest_path);
  if (!manifest) {
    if (fs::is_empty(directory)) return {};
    throw ManifestError("missing manifest.tsv in " + directory.string());
  }

  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> files;
  for (const auto& [number, line] : data_lines(*manifest)) {
    const auto fields = split_tabs(line);
    const std::string at = "manifest.tsv:" + std::to_string(number) + ": ";
    if (fields.size() != 3) throw ManifestError(at + "expected id<TAB>path<TAB>sha256");
    const auto& [id, rel, digest] = std::tie(fields[0], fields[1], fields[2]);
    if (!files.count(id)) ids.push_back(id);
    files[id].push_back(rel);
    auto content = read_file(directory / id / rel);
    if (!content) throw ManifestError(id + ": missing file " + rel);
    if (sha256_hex(*content) != digest) throw ManifestError(id + ": checksum mismatch for " + rel);
  }
  for (const auto& item : fs::directory_iterator(directory)) {
    if (item.is_directory() && !files.count(item.path().filename().string())) {
      throw ManifestError(item.path().filename().string() + ": directory not listed in manifest.tsv");
    }
  }

  std::vector<CorpusEntry> entries;
  for (const auto& id : ids) {
    CorpusEntry entry;
    entry.id = id;
    entry.directory = directory / id;
    const auto& listed = files[id];
    auto has = [&](const std::string& rel) { return std::find(listed.begin(), listed.end(), rel) != listed.end(); };
    if (!has("contract.lexc")) throw ManifestError(id + ": missing file contract.lexc");
    if (!has("meta.tsv")) throw ManifestError(id + ": missing file meta.tsv");

    entry.contract_text = *read_file(entry.directory / "contract.lexc");
    auto parsed = parse_and_validate(entry.contract_text);
    if (!parsed.errors.empty()) {
      const auto& e = parsed.errors.front();
      throw ManifestError(id + ": contract.lexc:" + std::to_string(e.span.line) + ":" +
                          std::to_string(e.span.column) + ": " + e.message);
    }
    entry.ast = std::move(parsed.ast);
    read_meta(entry, *read_file(entry.directory / "meta.tsv"), id + "/meta.tsv");

    std::vector<std::string> stems;
    for (const auto& rel : listed) {
      std::string stem;
      if (is_scenario_file(rel, stem)) stems.push_back(stem);
    }
    std::sort(stems.begin(), stems.end(), [](const std::string& a, const std::string& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const auto& stem : stems) {
      const std::string expected_rel = "expected/" + stem + ".ledger";
      if (!has(expected_rel)) throw ManifestError(id + ": missing file " + expected_rel);
      CorpusScenario scenario;
      scenario.name = stem;
      scenario.scenario = parse_scenario(*read_file(entry.directory / (stem + ".scn")));
      scenario.expected = *read_file(entry.directory / expected_rel);
      entry.scenarios.push_back(std::move(scenario));
    }
    if (entry.expected_alignment == Alignment::LintOnly && !entry.scenarios.empty()) {
      throw ManifestError(id + ": LintOnly entry must not have scenarios");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

bool EntryResult::ledgers_match() const {
  return std::all_of(scenarios.begin(), scenarios.end(), [](const auto& s) { return s.matches_expected; });
}

EntryResult run_entry(const CorpusEntry& entry, const RunOptions& options) {
  EntryResult result;
  result.id = entry.id;
  for (const auto& scenario : entry.scenarios) {
    ScenarioResult sr;
    sr.name = scenario.name;
    try {
      sr.ledger = run(entry.ast, scenario.scenario, options);
      sr.actual = serialize_ledger(*sr.ledger);
    } catch (const EvalError& error) {
      sr.error = error;
      sr.actual = format_error(error) + "\n";
    }
    sr.matches_expected = sr.actual == scenario.expected;
    result.scenarios.push_back(std::move(sr));
  }
  result.findings = lint(entry.ast);
  return result;
}

namespace {

// Rendered values of every ledger entry matching the subject.
std::optional<std::vector<std::string>> subject_values(const std::string& subject, const OutcomeLedger& ledger) {
  std::vector<std::string> values;
  if (subject.rfind("status:", 0) == 0) {
    if (const auto* s = ledger.find_status(subject.substr(7))) values.push_back(serialize_value(s->value));
  } else if (subject.rfind("pay:", 0) == 0) {
    const std::string route = subject.substr(4);
    const auto arrow = route.find('>');
    if (arrow == std::string::npos) return std::nullopt;
    for (const auto& entry : ledger.entries) {
      const auto* p = std::get_if<PaymentEntry>(&entry);
      if (p && p->from == route.substr(0, arrow) && p->to == route.substr(arrow + 1)) {
        values.push_back(serialize_money(p->amount));
      }
    }
  } else if (subject == "terminate") {
    for (const auto& entry : ledger.entries) {
      if (const auto* t = std::get_if<TerminationEntry>(&entry)) values.push_back(t->reason);
    }
  } else if (subject == "notice") {
    for (const auto& entry : ledger.entries) {
      if (const auto* n = std::get_if<NoticeEntry>(&entry)) values.push_back(n->text);
    }
  } else {
    return std::nullopt;
  }
  return values;
}

}  // namespace

AssertionOutcome check_assertion(const Assertion& assertion, const ScenarioResult& result) {
  if (!assertion.evaluable) return AssertionOutcome::Undecided;
  if (!result.ledger) {
    return result.error && result.error->kind() == EvalErrorKind::UnboundInput ? AssertionOutcome::Undecided
                                                                                 : AssertionOutcome::Contradicted;
  }
  auto values = subject_values(assertion.subject, *result.ledger);
  if (!values) return AssertionOutcome::Undecided;
  bool holds = false;
  switch (assertion.relation) {
    case Relation::Exists: holds = !values->empty(); break;
    case Relation::Absent: holds = values->empty(); break;
    case Relation::Equals:
      holds = std::find(values->begin(), values->end(), assertion.expected) != values->end();
      break;
  }
  return holds ? AssertionOutcome::Satisfied : AssertionOutcome::Contradicted;
}

Alignment classify_alignment(const std::vector<ScenarioResult>& actuals, const std::vector<Assertion>& assertions) {
  bool undecided = false;
  for (const auto& assertion : assertions) {
    if (!assertion.evaluable) {
      undecided = true;
      continue;
    }
    for (const auto& actual : actuals) {
      if (assertion.scenario != "*" && assertion.scenario != actual.name) continue;
      switch (check_assertion(assertion, actual)) {
        case AssertionOutcome::Contradicted: return Alignment::Opposite;
        case AssertionOutcome::Undecided: undecided = true; break;
        case AssertionOutcome::Satisfied: break;
      }
    }
  }
  for (const auto& actual : actuals) {
    if (actual.error && actual.error->kind() == EvalErrorKind::UnboundInput) undecided = true;
  }
  return undecided ? Alignment::Partial : Alignment::Match;
}

bool AlignmentReport::all_agree() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.agree && r.ledgers_match; });
}

AlignmentReport build_report(const std::vector<CorpusEntry>& entries, const std::vector<EntryResult>& results,
                             const ReferenceTally& reference) {
  AlignmentReport report;
  for (auto a : {Alignment::Opposite, Alignment::Partial, Alignment::Match, Alignment::LintOnly}) report.tallies[a] = 0;
  for (auto c : {OppositeCause::EncodingError, OppositeCause::AmbiguousLanguage, OppositeCause::Either}) {
    report.causes[c] = 0;
  }

  for (const auto& entry : entries) {
    auto it = std::find_if(results.begin(), results.end(), [&](const EntryResult& r) { return r.id == entry.id; });
    if (it == results.end()) throw std::invalid_argument("no result for corpus entry " + entry.id);
    ReportRow row{entry.id, Alignment::LintOnly, entry.expected_alignment, false, it->ledgers_match()};
    if (entry.expected_alignment == Alignment::LintOnly) {
      const bool absent = std::any_of(it->findings.begin(), it->findings.end(),
                                      [](const Finding& f) { return f.code == "LEX005"; });
      row.computed = absent && entry.scenarios.empty() ? Alignment::LintOnly : Alignment::Partial;
    } else {
      row.computed = classify_alignment(it->scenarios, entry.assertions);
      ++report.total;
      if (row.computed == Alignment::Opposite && entry.opposite_cause) ++report.causes[*entry.opposite_cause];
    }
    row.agree = row.computed == row.expected;
    ++report.tallies[row.computed];
    report.rows.push_back(row);
  }

  if (report.total > 0) {
    const int opposite = report.tallies[Alignment::Opposite];
    const int partial = report.tallies[Alignment::Partial];
    const int match = report.tallies[Alignment::Match];
    const std::string printed = "reference row Opposite=" + std::to_string(reference.opposite) +
                                " Partial=" + std::to_string(reference.partial) +
                                " Match=" + std::to_string(reference.match) +
                                " Total=" + std::to_string(reference.total);
    const int sum = reference.opposite + reference.partial + reference.match;
    if (sum != reference.total) {
      report.notes.push_back("FLAGGED " + printed + ": its columns sum to " + std::to_string(sum) + ", not " +
                             std::to_string(reference.total));
    }
    if (opposite != reference.opposite || partial != reference.partial || match != reference.match ||
        report.total != reference.total) {
      report.notes.push_back("FLAGGED computed Opposite=" + std::to_string(opposite) +
                             " Partial=" + std::to_string(partial) + " Match=" + std::to_string(match) +
                             " Total=" + std::to_string(report.total) + " differs from the " + printed);
    }
  }
  return report;
}

std::string format_report(const AlignmentReport& report) {
  std::string out;
  for (const auto& row : report.rows) {
    out += "ENTRY " + row.id + " computed=" + std::string(to_string(row.computed)) +
           " expected=" + std::string(to_string(row.expected)) + " agree=" + (row.agree ? "yes" : "no") +
           " ledgers=" + (row.ledgers_match ? "ok" : "mismatch") + "\n";
  }
  out += "TALLY";
  for (auto a : {Alignment::Opposite, Alignment::Partial, Alignment::Match, Alignment::LintOnly}) {
    out += " " + std::string(to_string(a)) + "=" + std::to_string(report.tallies.at(a));
  }
  out += " Total=" + std::to_string(report.total) + "\n";
  out += "CAUSES";
  for (const auto& [cause, count] : report.causes) out += " " + std::string(to_string(cause)) + "=" + std::to_string(count);
  out += "\n";
  for (const auto& note : report.notes) out += "NOTE " + note + "\n";
  return out;
}

}  // namespace lexc
