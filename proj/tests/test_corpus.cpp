#include "lexc/corpus.hpp"

#include "lexc/validate.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include <unistd.h>

using namespace lexc;
using lexc::testing::corpus_dir;

namespace fs = std::filesystem;

namespace {

const std::vector<CorpusEntry>& shipped() {
  static const auto entries = load_corpus(corpus_dir());
  return entries;
}

const CorpusEntry& entry(const std::string& id) {
  for (const auto& e : shipped())
    if (e.id == id) return e;
  throw std::runtime_error("no entry " + id);
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("lexc_corpus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Copies one entry and a manifest restricted to it.
void copy_entry(const std::string& id, const fs::path& to) {
  fs::copy(corpus_dir() / id, to / id, fs::copy_options::recursive);
  std::ifstream in(corpus_dir() / "manifest.tsv");
  std::ofstream out(to / "manifest.tsv");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(id + "\t", 0) == 0) out << line << "\n";
}

std::string manifest_error(const fs::path& dir) {
  try {
    load_corpus(dir);
  } catch (const ManifestError& e) {
    return e.what();
  }
  return "";
}

ScenarioResult ledger_result(const std::string& text) {
  ScenarioResult r;
  r.name = "1";
  r.ledger = OutcomeLedger{};
  r.actual = text;
  return r;
}

}  // namespace

TEST(Corpus, LoadsFourteenEntries) {
  const auto& entries = shipped();
  ASSERT_EQ(entries.size(), 14u);
  int lint_only = 0;
  for (const auto& e : entries) {
    if (e.expected_alignment == Alignment::LintOnly) {
      ++lint_only;
      EXPECT_TRUE(e.scenarios.empty()) << e.id;
    } else {
      EXPECT_FALSE(e.scenarios.empty()) << e.id;
    }
    EXPECT_TRUE(validate(e.ast).empty()) << e.id;
  }
  EXPECT_EQ(lint_only, 3);
}

TEST(Corpus, MissingContractNamesId) {
  TempDir tmp;
  copy_entry("monsolar", tmp.path);
  fs::remove(tmp.path / "monsolar" / "contract.lexc");
  const auto message = manifest_error(tmp.path);
  EXPECT_NE(message.find("monsolar"), std::string::npos) << message;
  EXPECT_NE(message.find("contract.lexc"), std::string::npos) << message;
}

TEST(Corpus, EmptyDirectory) {
  TempDir tmp;
  EXPECT_TRUE(load_corpus(tmp.path).empty());
}

TEST(Corpus, ChecksumMismatch) {
  TempDir tmp;
  copy_entry("monsolar", tmp.path);
  EXPECT_EQ(load_corpus(tmp.path).size(), 1u);
  std::ofstream(tmp.path / "monsolar" / "1.scn", std::ios::app) << "\n";
  EXPECT_NE(manifest_error(tmp.path).find("monsolar"), std::string::npos);
}

TEST(Corpus, UnlistedEntry) {
  TempDir tmp;
  copy_entry("monsolar", tmp.path);
  fs::create_directories(tmp.path / "stray");
  EXPECT_NE(manifest_error(tmp.path).find("stray"), std::string::npos);
}

TEST(Corpus, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunEntry, RainySky) {
  auto result = run_entry(entry("rainy-sky"));
  ASSERT_FALSE(result.scenarios.empty());
  EXPECT_NE(result.scenarios[0].actual.find("PAY Bank Buyer GBP 28499690.96"), std::string::npos);
  EXPECT_TRUE(result.ledgers_match());
}

TEST(RunEntry, ArnoldYear1983) {
  auto result = run_entry(entry("arnold-v-britton"));
  bool found = false;
  for (const auto& s : result.scenarios) {
    if (s.name != "10") continue;
    found = true;
    EXPECT_EQ(serialize_money(std::get<Money>(s.ledger->find_status("yearly_charge")->value)), "GBP 143.75");
  }
  EXPECT_TRUE(found);
}

TEST(RunEntry, PrivacyInternationalUnbound) {
  auto result = run_entry(entry("privacy-international"));
  const auto& first = result.scenarios.at(0);
  ASSERT_TRUE(first.error.has_value());
  EXPECT_EQ(first.error->kind(), EvalErrorKind::UnboundInput);
  EXPECT_TRUE(first.matches_expected);
}

TEST(RunEntry, EveryGoldenLedgerMatches) {
  for (const auto& e : shipped()) EXPECT_TRUE(run_entry(e).ledgers_match()) << e.id;
}

TEST(Alignment, CorpusExamples) {
  for (std::string id : {"pimlico", "lloyds", "marley"}) {
    const auto& e = entry(id);
    EXPECT_EQ(classify_alignment(run_entry(e).scenarios, e.assertions), e.expected_alignment) << id;
  }
  EXPECT_EQ(entry("pimlico").expected_alignment, Alignment::Opposite);
  EXPECT_EQ(entry("lloyds").expected_alignment, Alignment::Partial);
  EXPECT_EQ(entry("marley").expected_alignment, Alignment::Match);
}

TEST(Alignment, Rules) {
  auto ok = ledger_result("STATUS s true\n");
  ok.ledger->entries.push_back(StatusEntry{"s", true});
  Assertion holds{"*", "status:s", Relation::Equals, "true", true, ""};
  Assertion fails{"*", "status:s", Relation::Equals, "false", true, ""};
  Assertion open{"*", "status:s", Relation::Equals, "", false, "needs context"};
  EXPECT_EQ(classify_alignment({ok}, {holds}), Alignment::Match);
  EXPECT_EQ(classify_alignment({ok}, {holds, open}), Alignment::Partial);
  EXPECT_EQ(classify_alignment({ok}, {open, fails}), Alignment::Opposite);

  ScenarioResult unbound;
  unbound.name = "2";
  unbound.error = EvalError(EvalErrorKind::UnboundInput, "x");
  EXPECT_EQ(classify_alignment({ok, unbound}, {Assertion{"1", "status:s", Relation::Equals, "true", true, ""}}),
            Alignment::Partial);
}

TEST(Alignment, OrderIndependent) {
  auto ok = ledger_result("STATUS s true\n");
  ok.ledger->entries.push_back(StatusEntry{"s", true});
  ok.ledger->entries.push_back(NoticeEntry{"n"});
  std::vector<Assertion> assertions{
      {"*", "status:s", Relation::Equals, "true", true, ""},
      {"*", "notice", Relation::Exists, "", true, ""},
      {"*", "terminate", Relation::Absent, "", true, ""},
      {"*", "status:s", Relation::Equals, "", false, "context"},
      {"*", "status:t", Relation::Absent, "", true, ""},
      {"*", "status:s", Relation::Equals, "false", true, ""},
  };
  std::mt19937 rng(3);
  for (std::size_t n = 0; n <= assertions.size(); ++n) {
    std::vector<Assertion> subset(assertions.begin(), assertions.begin() + n);
    const auto reference = classify_alignment({ok}, subset);
    for (int i = 0; i < 20; ++i) {
      std::shuffle(subset.begin(), subset.end(), rng);
      EXPECT_EQ(classify_alignment({ok}, subset), reference);
    }
  }
}

TEST(Report, ShippedTallies) {
  std::vector<EntryResult> results;
  for (const auto& e : shipped()) results.push_back(run_entry(e));
  auto report = build_report(shipped(), results);
  EXPECT_TRUE(report.all_agree());
  EXPECT_EQ(report.tallies[Alignment::Opposite], 3);
  EXPECT_EQ(report.tallies[Alignment::Partial], 2);
  EXPECT_EQ(report.tallies[Alignment::Match], 6);
  EXPECT_EQ(report.tallies[Alignment::LintOnly], 3);
  EXPECT_EQ(report.total, 11);
  EXPECT_EQ(report.causes[OppositeCause::EncodingError], 2);
  EXPECT_EQ(report.causes[OppositeCause::Either], 1);
  EXPECT_EQ(report.causes[OppositeCause::AmbiguousLanguage], 0);
  std::vector<std::string> opposite;
  for (const auto& row : report.rows)
    if (row.computed == Alignment::Opposite) opposite.push_back(row.id);
  EXPECT_EQ(opposite, (std::vector<std::string>{"bcci", "pimlico", "uber"}));
  ASSERT_EQ(report.notes.size(), 2u);
  for (const auto& note : report.notes) EXPECT_NE(note.find("FLAGGED"), std::string::npos);
  EXPECT_EQ(format_report(report), format_report(build_report(shipped(), results)));
}

TEST(Report, Empty) {
  auto report = build_report({}, {}, ReferenceTally{0, 0, 0, 0});
  EXPECT_EQ(report.total, 0);
  for (const auto& [alignment, count] : report.tallies) EXPECT_EQ(count, 0);
  for (const auto& [cause, count] : report.causes) EXPECT_EQ(count, 0);
  EXPECT_TRUE(report.rows.empty());
  EXPECT_TRUE(report.notes.empty());
}
