#include "lexc/ledger.hpp"

namespace lexc {

const StatusEntry* OutcomeLedger::find_status(std::string_view name) const {
  for (const auto& entry : entries) {
    if (const auto* status = std::get_if<StatusEntry>(&entry); status && status->name == name) return status;
  }
  return nullptr;
}

namespace {

struct EntryFormatter {
  std::string operator()(const PaymentEntry& e) const {
    return "PAY " + e.from + " " + e.to + " " + serialize_money(e.amount);
  }
  std::string operator()(const StatusEntry& e) const { return "STATUS " + e.name + " " + serialize_value(e.value); }
  std::string operator()(const TerminationEntry& e) const { return "TERMINATE " + e.reason; }
  std::string operator()(const NoticeEntry& e) const { return "NOTICE " + e.text; }
};

}  // namespace

std::string format_entry(const LedgerEntry& entry) { return std::visit(EntryFormatter{}, entry); }

std::string serialize_ledger(const OutcomeLedger& ledger) {
  std::string out;
  for (const auto& entry : ledger.entries) {
    out += format_entry(entry);
    out += '\n';
  }
  return out;
}

}  // namespace lexc
