#pragma once

#include "lexc/value.hpp"

#include <string>
#include <variant>
#include <vector>

namespace lexc {

struct PaymentEntry {
  std::string from;
  std::string to;
  Money amount;

  friend bool operator==(const PaymentEntry&, const PaymentEntry&) = default;
};

struct StatusEntry {
  std::string name;
  Value value;

  friend bool operator==(const StatusEntry&, const StatusEntry&) = default;
};

struct TerminationEntry {
  std::string reason;

  friend bool operator==(const TerminationEntry&, const TerminationEntry&) = default;
};

struct NoticeEntry {
  std::string text;

  friend bool operator==(const NoticeEntry&, const NoticeEntry&) = default;
};

using LedgerEntry = std::variant<PaymentEntry, StatusEntry, TerminationEntry, NoticeEntry>;

struct OutcomeLedger {
  std::vector<LedgerEntry> entries;
  std::vector<std::string> fired_clauses;
  int rectification_passes = 0;  // 0 when the contract has no rectify rules

  const StatusEntry* find_status(std::string_view name) const;

  friend bool operator==(const OutcomeLedger& a, const OutcomeLedger& b) {
    return a.entries == b.entries && a.fired_clauses == b.fired_clauses;
  }
};

// PAY from to GBP 1.00 | STATUS name value | TERMINATE reason | NOTICE text
std::string format_entry(const LedgerEntry& entry);

// One line per entry, each terminated by '\n'.
std::string serialize_ledger(const OutcomeLedger& ledger);

}  // namespace lexc
