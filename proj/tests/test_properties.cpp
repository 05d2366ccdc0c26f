// Randomized and exhaustive checks of the core invariants. GMP's mpq_class is
// the arithmetic oracle; graph and SAT oracles are written out longhand here.
#include "lexc/corpus.hpp"
#include "lexc/evaluator.hpp"
#include "lexc/linter.hpp"
#include "lexc/parser.hpp"
#include "lexc/printer.hpp"
#include "lexc/validate.hpp"
#include "test_support.hpp"

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <future>
#include <random>
#include <set>
#include <sstream>

using namespace lexc;
using lexc::testing::corpus_dir;
using lexc::testing::fixture;
using lexc::testing::parse_file;
using lexc::testing::read_text;

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> contract_files() {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir()))
    if (entry.is_directory()) files.push_back(entry.path() / "contract.lexc");
  for (const auto& entry : fs::directory_iterator(lexc::testing::source_dir() / "tests" / "fixtures"))
    if (entry.path().extension() == ".lexc") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// Random syntax, not necessarily well typed: the round trip is a property of
// the grammar alone.
class AstGenerator {
 public:
  explicit AstGenerator(unsigned seed) : rng_(seed) {}

  ContractAst contract() {
    ContractAst ast;
    ast.name = text();
    const int parties = pick(0, 3);
    for (int i = 0; i < parties; ++i) ast.parties.push_back({"P" + std::to_string(i), {}});
    const int inputs = pick(0, 4);
    for (int i = 0; i < inputs; ++i)
      ast.inputs.push_back({"in_" + std::to_string(i), static_cast<ValueType>(pick(0, 5)), {}});
    const int definitions = pick(0, 4);
    for (int i = 0; i < definitions; ++i)
      ast.definitions.push_back({"def_" + std::to_string(i), static_cast<ValueType>(pick(0, 5)), expr(4), {}});
    const int catalogs = pick(0, 2);
    for (int i = 0; i < catalogs; ++i) {
      EventCatalogDecl c;
      c.name = "cat_" + std::to_string(i);
      for (int j = pick(0, 3); j > 0; --j) c.listed.push_back(text());
      c.has_wildcard = coin();
      ast.event_catalogs.push_back(c);
    }
    const int clauses = pick(0, 3);
    for (int i = 0; i < clauses; ++i) {
      Clause c;
      c.name = "clause_" + std::to_string(i);
      c.guard = expr(3);
      for (int j = pick(1, 4); j > 0; --j) c.outcomes.push_back(outcome());
      ast.clauses.push_back(c);
    }
    const int rules = pick(0, 2);
    for (int i = 0; i < rules; ++i) {
      RectifyRule r;
      r.target = "rule_" + std::to_string(i);
      r.guard = expr(2);
      for (int j = pick(1, 3); j > 0; --j) r.body.push_back({Assignment{name(), expr(2)}, {}});
      ast.rectify_rules.push_back(r);
    }
    const int constraints = pick(0, 2);
    for (int i = 0; i < constraints; ++i) {
      Constraint c;
      c.description = text();
      if (coin()) c.deadline_days = pick(0, 400);
      if (coin()) c.overridable_by = "Court";
      ast.constraints.push_back(c);
    }
    return ast;
  }

  ExprPtr expr(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(0, 9)) {
      case 0:
      case 1:
        return leaf();
      case 2:
      case 3:
      case 4:
        return make_expr(Binary{static_cast<BinaryOp>(pick(0, 13)), expr(depth - 1), expr(depth - 1)});
      case 5:
        return make_expr(Unary{coin() ? UnaryOp::Not : UnaryOp::Neg, expr(depth - 1)});
      case 6:
        return make_expr(Conditional{expr(depth - 1), expr(depth - 1), expr(depth - 1)});
      case 7:
        return make_expr(DaysBetween{expr(depth - 1), expr(depth - 1)});
      case 8:
        return make_expr(Compound{expr(depth - 1), expr(depth - 1), expr(depth - 1)});
      default:
        return make_expr(InCatalog{expr(depth - 1), "cat_" + std::to_string(pick(0, 1))});
    }
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }

  std::string name() {
    static const char* names[] = {"a", "b", "total", "rate_2", "flag", "x_y"};
    return names[pick(0, 5)];
  }

  std::string text() {
    static const char* texts[] = {"", "Fire", "quote \" inside", "back\\slash", "tab\tand more", "x"};
    return texts[pick(0, 5)];
  }

  Rational decimal() {
    const Integer digits = pick(0, 2000000);
    Integer scale = 1;
    for (int i = pick(0, 4); i > 0; --i) scale *= 10;
    return Rational(digits, scale);
  }

  ExprPtr leaf() {
    switch (pick(0, 7)) {
      case 0:
      case 1:
        return make_expr(NameRef{name()});
      case 2:
        return make_expr(Literal{Number{decimal()}});
      case 3:
        return make_expr(Literal{Money{coin() ? "GBP" : "USD", decimal()}});
      case 4:
        return make_expr(Literal{Percent{decimal() / 100}});
      case 5:
        return make_expr(Literal{Date{std::chrono::year(pick(1900, 2100)) / std::chrono::month(pick(1, 12)) /
                                      std::chrono::day(pick(1, 28))}});
      case 6:
        return make_expr(Literal{coin()});
      default:
        return make_expr(Literal{text()});
    }
  }

  Outcome outcome() {
    Outcome o;
    switch (pick(0, 3)) {
      case 0:
        o.kind = PayOutcome{"P0", "P1", expr(2)};
        break;
      case 1:
        o.kind = Assignment{name(), expr(2)};
        break;
      case 2:
        o.kind = TerminateOutcome{text()};
        break;
      default:
        o.kind = NoticeOutcome{text()};
    }
    return o;
  }

  std::mt19937 rng_;
};

}  // namespace

TEST(RoundTrip, CorpusAndFixtures) {
  for (const auto& file : contract_files()) {
    const auto ast = parse_file(file);
    const auto printed = print_canonical(ast);
    const auto again = parse(printed);
    EXPECT_TRUE(structurally_equal(again, ast)) << file;
    EXPECT_EQ(print_canonical(again), printed) << file;
  }
}

TEST(RoundTrip, GeneratedAsts) {
  AstGenerator gen(20240101);
  for (int i = 0; i < 1000; ++i) {
    const auto ast = gen.contract();
    const auto printed = print_canonical(ast);
    ContractAst again;
    try {
      again = parse(printed);
    } catch (const ParseError& e) {
      FAIL() << "case " << i << ": " << e.what() << "\n" << printed;
    }
    ASSERT_TRUE(structurally_equal(again, ast)) << "case " << i << "\n" << printed << "\n" << print_canonical(again);
    ASSERT_EQ(print_canonical(again), printed) << "case " << i;
  }
}

namespace {

struct ArithCase {
  std::string source;
  mpq_class oracle;
  bool divides_by_zero = false;
};

mpq_class to_mpq(const std::string& decimal) {
  const auto dot = decimal.find('.');
  if (dot == std::string::npos) return mpq_class(mpz_class(decimal));
  const std::string digits = decimal.substr(0, dot) + decimal.substr(dot + 1);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, decimal.size() - dot - 1);
  mpq_class q(mpz_class(digits), scale);
  q.canonicalize();
  return q;
}

ArithCase arith(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> choose(0, 5);
  if (depth == 0 || choose(rng) == 0) {
    std::uniform_int_distribution<long long> whole(0, 999999);
    std::uniform_int_distribution<int> places(0, 4), frac(0, 9999);
    std::string text = std::to_string(whole(rng));
    const int p = places(rng);
    if (p > 0) {
      std::string f = std::to_string(frac(rng));
      f = std::string(4 - std::min<std::size_t>(4, f.size()), '0') + f;
      text += "." + f.substr(0, p);
    }
    if (depth > 0 && choose(rng) == 0) text = "0";
    return {text, to_mpq(text)};
  }
  ArithCase l = arith(rng, depth - 1), r = arith(rng, depth - 1);
  ArithCase out;
  out.divides_by_zero = l.divides_by_zero || r.divides_by_zero;
  static const char ops[] = {'+', '-', '*', '/'};
  const char op = ops[std::uniform_int_distribution<int>(0, 3)(rng)];
  out.source = "(" + l.source + " " + op + " " + r.source + ")";
  switch (op) {
    case '+':
      out.oracle = l.oracle + r.oracle;
      break;
    case '-':
      out.oracle = l.oracle - r.oracle;
      break;
    case '*':
      out.oracle = l.oracle * r.oracle;
      break;
    default:
      if (r.oracle == 0) {
        out.divides_by_zero = true;
      } else {
        out.oracle = l.oracle / r.oracle;
      }
  }
  return out;
}

std::string mpq_text(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Half-up to 2 places, computed with GMP integer division.
std::string mpq_money(const mpq_class& q) {
  const bool negative = q < 0;
  mpq_class magnitude = negative ? mpq_class(-q) : q;
  mpz_class scaled = magnitude.get_num() * 200 + magnitude.get_den();
  mpz_class cents;
  mpz_fdiv_q(cents.get_mpz_t(), scaled.get_mpz_t(), mpz_class(magnitude.get_den() * 2).get_mpz_t());
  std::string digits = cents.get_str();
  if (digits.size() < 3) digits = std::string(3 - digits.size(), '0') + digits;
  std::string out = digits.substr(0, digits.size() - 2) + "." + digits.substr(digits.size() - 2);
  if (negative && cents != 0) out = "-" + out;
  return out;
}

std::string rational_text(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

}  // namespace

TEST(Arithmetic, MatchesGmpOracle) {
  std::mt19937 rng(424242);
  int zero_divisions = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto c = arith(rng, 1 + i % 4);
    const auto ast = parse("contract \"A\" { let v: number = " + c.source + "; }");
    try {
      const auto value = eval_expr(*ast.definitions[0].expr, {});
      ASSERT_FALSE(c.divides_by_zero) << c.source;
      const auto& n = std::get<Number>(value).value;
      ASSERT_EQ(rational_text(n), mpq_text(c.oracle)) << c.source;
      ASSERT_EQ(round_half_up(n, 2), mpq_money(c.oracle)) << c.source;
    } catch (const EvalError& e) {
      ASSERT_TRUE(c.divides_by_zero) << c.source;
      ASSERT_EQ(e.kind(), EvalErrorKind::DivisionByZero);
      ++zero_divisions;
    }
  }
  EXPECT_GT(zero_divisions, 0);
}

TEST(Arithmetic, MoneyProductsMatchGmpOracle) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<long long> amount(0, 100000000), small(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    const long long a = amount(rng), b = small(rng), c = small(rng);
    const auto ast = parse("contract \"A\" { let v: money = GBP " + std::to_string(a) + " * " + std::to_string(b) +
                           "% / " + std::to_string(c) + "; }");
    const auto money = std::get<Money>(eval_expr(*ast.definitions[0].expr, {}));
    const mpq_class oracle = mpq_class(mpz_class(std::to_string(a)) * mpz_class(std::to_string(b)), mpz_class(100) * mpz_class(std::to_string(c)));
    ASSERT_EQ(serialize_money(money), "GBP " + mpq_money(oracle));
  }
}

// Removing any binding from any corpus scenario surfaces as UnboundInput
// naming it; no input is ever defaulted.
TEST(NoSilentDefault, DeletionSweep) {
  int sweeps = 0;
  for (const auto& entry : load_corpus(corpus_dir())) {
    for (const auto& s : entry.scenarios) {
      for (const auto& binding : s.scenario.bindings) {
        try {
          run(entry.ast, s.scenario.without(binding.name));
          ADD_FAILURE() << entry.id << "/" << s.name << " ran without " << binding.name;
        } catch (const EvalError& e) {
          EXPECT_EQ(e.kind(), EvalErrorKind::UnboundInput) << entry.id << "/" << s.name;
          EXPECT_EQ(e.detail(), binding.name) << entry.id << "/" << s.name;
        }
        ++sweeps;
      }
    }
  }
  EXPECT_GT(sweeps, 50);
}

namespace {

// Cyclic components by transitive closure: i and j share a cycle iff each
// reaches the other; i is cyclic iff it reaches itself.
std::set<std::set<std::string>> closure_cycles(const std::vector<std::vector<int>>& edges) {
  const std::size_t n = edges.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (int j : edges[i]) reach[i][j] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::set<std::set<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reach[i][i]) continue;
    std::set<std::string> component;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && reach[j][i]) component.insert("d" + std::to_string(j));
    out.insert(component);
  }
  return out;
}

std::set<std::string> split_members(const std::string& list) {
  std::set<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    out.insert(item);
  }
  return out;
}

}  // namespace

TEST(Cycles, AgreeWithClosureOracle) {
  std::mt19937 rng(5150);
  for (int round = 0; round < 500; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 50)(rng);
    const double density = std::uniform_real_distribution<double>(0.0, 3.0 / n)(rng);
    std::bernoulli_distribution edge(density);
    std::vector<std::vector<int>> edges(n);
    std::string source = "contract \"G\" {\n";
    for (int i = 0; i < n; ++i) {
      source += "  let d" + std::to_string(i) + ": number = 1";
      for (int j = 0; j < n; ++j)
        if (edge(rng)) {
          edges[i].push_back(j);
          source += " + d" + std::to_string(j);
        }
      source += ";\n";
    }
    source += "}\n";
    const auto findings = detect_cycles(parse(source));
    std::set<std::set<std::string>> reported;
    for (const auto& f : findings) {
      const auto colon = f.message.find(": ");
      ASSERT_NE(colon, std::string::npos) << f.message;
      reported.insert(split_members(f.message.substr(colon + 2)));
    }
    const auto oracle = closure_cycles(edges);
    ASSERT_EQ(findings.size(), oracle.size()) << source;
    ASSERT_EQ(reported, oracle) << source;
  }
}

namespace {

ExprPtr random_guard(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> choose(0, 4);
  if (depth == 0 || choose(rng) == 0) {
    const auto& v = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    return make_expr(NameRef{v});
  }
  switch (choose(rng)) {
    case 0:
      return make_expr(Unary{UnaryOp::Not, random_guard(rng, vars, depth - 1)});
    case 1:
    case 2:
      return make_expr(Binary{BinaryOp::And, random_guard(rng, vars, depth - 1), random_guard(rng, vars, depth - 1)});
    default:
      return make_expr(Binary{BinaryOp::Or, random_guard(rng, vars, depth - 1), random_guard(rng, vars, depth - 1)});
  }
}

bool holds(const Expr& guard, const Environment& env) { return std::get<bool>(eval_expr(guard, env)); }

}  // namespace

// Every witness satisfies both guards, and a pair goes unreported only when
// no assignment satisfies both.
TEST(Conflicts, WitnessesReEvaluate) {
  std::mt19937 rng(777);
  int reported = 0, clear = 0;
  for (int round = 0; round < 300; ++round) {
    const int k = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<std::string> vars;
    for (int i = 0; i < k; ++i) vars.push_back("v" + std::to_string(i));
    ContractAst ast;
    ast.name = "C";
    for (const auto& v : vars) ast.inputs.push_back({v, ValueType::Boolean, {}});
    for (int c = 0; c < 2; ++c) {
      Clause clause;
      clause.name = "c" + std::to_string(c);
      clause.guard = random_guard(rng, vars, 3);
      clause.outcomes.push_back({Assignment{"s", make_expr(Literal{c == 0})}, {}});
      ast.clauses.push_back(clause);
    }
    const auto ast2 = parse(print_canonical(ast));
    const auto scan = detect_conflicts(ast2);
    ASSERT_EQ(scan.findings.size(), scan.witnesses.size());
    bool satisfiable = false;
    for (int mask = 0; mask < (1 << k) && !satisfiable; ++mask) {
      Environment env;
      for (int i = 0; i < k; ++i) env.values[vars[i]] = bool(mask >> i & 1);
      satisfiable = holds(*ast2.clauses[0].guard, env) && holds(*ast2.clauses[1].guard, env);
    }
    ASSERT_EQ(scan.findings.size(), satisfiable ? 1u : 0u) << print_canonical(ast2);
    for (const auto& w : scan.witnesses) {
      Environment env;
      for (const auto& [name, value] : w.assignment) env.values[name] = value;
      for (const auto& v : vars)
        if (!env.values.count(v)) env.values[v] = false;
      EXPECT_TRUE(holds(*ast2.clauses[0].guard, env));
      EXPECT_TRUE(holds(*ast2.clauses[1].guard, env));
    }
    (satisfiable ? reported : clear)++;
  }
  EXPECT_GT(reported, 0);
  EXPECT_GT(clear, 0);
}

TEST(Conflicts, CorpusWitnessesReEvaluate) {
  for (const auto& file : contract_files()) {
    const auto ast = parse_file(file);
    const auto scan = detect_conflicts(ast);
    for (const auto& w : scan.witnesses) {
      Scenario scenario;
      for (const auto& [name, value] : w.assignment) scenario.bindings.push_back({name, value});
      Environment env;
      for (const auto& [name, value] : w.assignment) env.values[name] = value;
      for (const auto& c : ast.event_catalogs) env.catalogs[c.name] = c;
      auto order = dependency_graph(ast).topological_order();
      ASSERT_TRUE(order);
      for (const auto& name : *order) {
        const auto* def = ast.find_definition(name);
        if (!def) continue;
        try {
          env.values[name] = eval_expr(*def->expr, env);
        } catch (const EvalError&) {
        }
      }
      auto guard_of = [&](const std::string& clause) -> const Expr& {
        for (const auto& c : ast.clauses)
          if (c.name == clause) return *c.guard;
        throw std::runtime_error("no clause " + clause);
      };
      EXPECT_TRUE(holds(guard_of(w.first_clause), env)) << file;
      EXPECT_TRUE(holds(guard_of(w.second_clause), env)) << file;
    }
  }
}

// A rule LEX003 accepts settles in one pass from every boolean store.
TEST(Rectification, UnflaggedRulesConvergeInOnePass) {
  std::mt19937 rng(31337);
  int unflagged = 0;
  for (int round = 0; round < 400; ++round) {
    const int k = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<std::string> vars;
    for (int i = 0; i < k; ++i) vars.push_back("s" + std::to_string(i));
    ContractAst ast;
    ast.name = "R";
    Clause seed;
    seed.name = "seed";
    seed.guard = make_expr(Literal{true});
    for (const auto& v : vars) seed.outcomes.push_back({Assignment{v, make_expr(Literal{true})}, {}});
    ast.clauses.push_back(seed);
    RectifyRule rule;
    rule.target = "r";
    rule.guard = random_guard(rng, vars, 3);
    for (const auto& v : vars)
      if (std::bernoulli_distribution(0.7)(rng))
        rule.body.push_back({Assignment{v, make_expr(Literal{std::bernoulli_distribution(0.5)(rng)})}, {}});
    if (rule.body.empty()) rule.body.push_back({Assignment{vars[0], make_expr(Literal{false})}, {}});
    ast.rectify_rules.push_back(rule);
    const auto parsed = parse(print_canonical(ast));
    if (!detect_unbounded_rectification(parsed).empty()) continue;
    ++unflagged;
    for (int mask = 0; mask < (1 << k); ++mask) {
      StatusStore store;
      for (int i = 0; i < k; ++i) store[vars[i]] = bool(mask >> i & 1);
      const auto result = apply_rectification(store, parsed.rectify_rules);
      ASSERT_EQ(result.passes, 1) << print_canonical(parsed);
    }
  }
  EXPECT_GT(unflagged, 20);
}

TEST(Determinism, ParallelCorpusRunsAgree) {
  const auto entries = load_corpus(corpus_dir());
  std::vector<std::string> sequential;
  for (const auto& e : entries) {
    std::string out;
    for (const auto& s : run_entry(e).scenarios) out += s.actual;
    sequential.push_back(out);
  }
  for (int repeat = 0; repeat < 3; ++repeat) {
    std::vector<std::future<std::string>> futures;
    for (const auto& e : entries)
      futures.push_back(std::async(std::launch::async, [&e] {
        std::string out;
        for (const auto& s : run_entry(e).scenarios) out += s.actual;
        return out;
      }));
    for (std::size_t i = 0; i < entries.size(); ++i) EXPECT_EQ(futures[i].get(), sequential[i]) << entries[i].id;
  }
}

// A defect seeded on line L is reported on line L.
TEST(Diagnostics, SeededDefectLine) {
  std::mt19937 rng(8);
  for (const auto& file : contract_files()) {
    const auto text = read_text(file);
    std::vector<std::string> lines;
    std::stringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::size_t header = 0;
    while (header < lines.size() && lines[header].find("contract \"") == std::string::npos) ++header;
    ASSERT_LT(header, lines.size()) << file;
    for (const std::string defect : {"  @", "  contract", "  ; ;"}) {
      for (int trial = 0; trial < 5; ++trial) {
        const std::size_t at = std::uniform_int_distribution<std::size_t>(header + 1, lines.size() - 1)(rng);
        std::string seeded;
        for (std::size_t i = 0; i < lines.size(); ++i) {
          if (i == at) seeded += defect + "\n";
          seeded += lines[i] + "\n";
        }
        try {
          parse(seeded);
          ADD_FAILURE() << file << " accepted defect at line " << at + 1;
        } catch (const ParseError& e) {
          EXPECT_EQ(e.line(), static_cast<int>(at + 1)) << file << " defect '" << defect << "'";
        }
      }
    }
  }
}

TEST(Lint, IdempotentUnderReprint) {
  auto summary = [](const std::vector<Finding>& findings) {
    std::vector<std::string> out;
    for (const auto& f : findings) out.push_back(f.code + " " + f.message);
    return out;
  };
  for (const auto& file : contract_files()) {
    const auto ast = parse_file(file);
    EXPECT_EQ(summary(lint(parse(print_canonical(ast)))), summary(lint(ast))) << file;
  }
}
