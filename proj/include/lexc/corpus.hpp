#pragma once

#include "lexc/evaluator.hpp"
#include "lexc/linter.hpp"
#include "lexc/parser.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexc {

enum class Alignment { Match, Partial, Opposite, LintOnly };
enum class OppositeCause { EncodingError, AmbiguousLanguage, Either };
enum class Relation { Equals, Exists, Absent };

std::string_view to_string(Alignment alignment);
std::string_view to_string(OppositeCause cause);
std::string_view to_string(Relation relation);
std::optional<Alignment> parse_alignment(std::string_view text);
std::optional<OppositeCause> parse_cause(std::string_view text);
std::optional<Relation> parse_relation(std::string_view text);

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A judgment checked against a ledger. Subjects: `status:NAME`,
// `pay:FROM>TO`, `terminate`, `notice`.
struct Assertion {
  std::string scenario;  // scenario name, or "*" for every scenario
  std::string subject;
  Relation relation = Relation::Equals;
  std::string expected;  // machine rendering, compared as text
  bool evaluable = true;
  std::string reason;
};

struct CorpusScenario {
  std::string name;  // "1", "2", ...
  Scenario scenario;
  std::string expected;  // machine ledger, or a single ERROR line
};

struct CorpusEntry {
  std::string id;
  std::string title;
  std::string citation;
  std::filesystem::path directory;
  std::string contract_text;
  ContractAst ast;
  std::vector<CorpusScenario> scenarios;
  std::vector<Assertion> assertions;
  Alignment expected_alignment = Alignment::Match;
  std::optional<OppositeCause> opposite_cause;
};

std::string sha256_hex(std::string_view data);

// Reads <dir>/manifest.tsv (`id<TAB>relative path<TAB>sha256`) and every
// entry it lists. Throws ManifestError for missing files, checksum
// mismatches, bad metadata or invalid contracts, ParseError for syntax.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& directory);

struct ScenarioResult {
  std::string name;
  std::optional<OutcomeLedger> ledger;
  std::optional<EvalError> error;
  std::string actual;  // machine text, same format as CorpusScenario::expected
  bool matches_expected = false;
};

struct EntryResult {
  std::string id;
  std::vector<ScenarioResult> scenarios;
  std::vector<Finding> findings;
  bool ledgers_match() const;
};

// Evaluation errors are recorded per scenario, never thrown.
EntryResult run_entry(const CorpusEntry& entry, const RunOptions& options = {});

enum class AssertionOutcome { Satisfied, Contradicted, Undecided };

AssertionOutcome check_assertion(const Assertion& assertion, const ScenarioResult& result);

// Contradiction anywhere gives Opposite; otherwise a non-evaluable
// assertion or an UnboundInput scenario gives Partial; otherwise Match.
Alignment classify_alignment(const std::vector<ScenarioResult>& actuals, const std::vector<Assertion>& assertions);

struct ReportRow {
  std::string id;
  Alignment computed;
  Alignment expected;
  bool agree;
  bool ledgers_match;
};

struct AlignmentReport {
  std::vector<ReportRow> rows;
  std::map<Alignment, int> tallies;
  std::map<OppositeCause, int> causes;
  int total = 0;  // entries that were executed (everything but LintOnly)
  std::vector<std::string> notes;

  bool all_agree() const;
};

// Externally reported summary row the computed tallies are checked against.
struct ReferenceTally {
  int opposite = 3;
  int partial = 2;
  int match = 5;
  int total = 11;
};

AlignmentReport build_report(const std::vector<CorpusEntry>& entries, const std::vector<EntryResult>& results,
                             const ReferenceTally& reference = {});

std::string format_report(const AlignmentReport& report);

}  // namespace lexc
