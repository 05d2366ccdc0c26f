#include "lexc/json_format.hpp"

namespace lexc {

using nlohmann::json;

namespace {

struct EntryJson {
  json operator()(const PaymentEntry& e) const {
    return {{"kind", "PAY"}, {"from", e.from}, {"to", e.to}, {"amount", serialize_money(e.amount)}};
  }
  json operator()(const StatusEntry& e) const {
    return {{"kind", "STATUS"}, {"name", e.name}, {"value", serialize_value(e.value)}};
  }
  json operator()(const TerminationEntry& e) const { return {{"kind", "TERMINATE"}, {"reason", e.reason}}; }
  json operator()(const NoticeEntry& e) const { return {{"kind", "NOTICE"}, {"text", e.text}}; }
};

}  // namespace

json to_json(const LedgerEntry& entry) { return std::visit(EntryJson{}, entry); }

json to_json(const OutcomeLedger& ledger) {
  json entries = json::array();
  for (const auto& entry : ledger.entries) entries.push_back(to_json(entry));
  return {{"entries", entries}, {"fired_clauses", ledger.fired_clauses}};
}

json to_json(const EvalError& error) {
  return {{"error", std::string(to_string(error.kind()))},
          {"detail", error.detail()},
          {"line", error.span().line},
          {"column", error.span().column}};
}

json to_json(const Finding& finding, const std::string& file) {
  return {{"code", finding.code},
          {"severity", std::string(to_string(finding.severity))},
          {"file", file},
          {"line", finding.span.line},
          {"column", finding.span.column},
          {"message", finding.message},
          {"taxonomy", std::string(to_string(finding.taxonomy))}};
}

json to_json(const AlignmentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"id", row.id},
                    {"computed", std::string(to_string(row.computed))},
                    {"expected", std::string(to_string(row.expected))},
                    {"agree", row.agree},
                    {"ledgers_match", row.ledgers_match}});
  }
  json tallies = json::object();
  for (const auto& [alignment, count] : report.tallies) tallies[std::string(to_string(alignment))] = count;
  json causes = json::object();
  for (const auto& [cause, count] : report.causes) causes[std::string(to_string(cause))] = count;
  return {{"rows", rows}, {"tallies", tallies}, {"total", report.total}, {"causes", causes}, {"notes", report.notes}};
}

}  // namespace lexc
