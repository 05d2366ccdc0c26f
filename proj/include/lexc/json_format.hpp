#pragma once

#include "lexc/corpus.hpp"
#include "lexc/evaluator.hpp"
#include "lexc/linter.hpp"

#include <json.hpp>

namespace lexc {

// Structured mirrors of the text formats, field for field.
nlohmann::json to_json(const LedgerEntry& entry);
nlohmann::json to_json(const OutcomeLedger& ledger);
nlohmann::json to_json(const EvalError& error);
nlohmann::json to_json(const Finding& finding, const std::string& file);
nlohmann::json to_json(const AlignmentReport& report);

}  // namespace lexc
