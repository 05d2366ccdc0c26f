#pragma once

#include "lexc/ast.hpp"
#include "lexc/ledger.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexc::fm {

enum class FmErrorKind { MissingScores, EmptyName, InvalidThreshold };

class FmError : public std::runtime_error {
 public:
  FmError(FmErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  FmErrorKind kind() const { return kind_; }

 private:
  FmErrorKind kind_;
};

struct ScoredEvent {
  std::string name;
  int similarity = 1;  // 1..10
  int impact = 1;      // raw, not rescaled

  friend bool operator==(const ScoredEvent&, const ScoredEvent&) = default;
};

struct FmThresholds {
  int similarity_min = 7;
  std::optional<int> impact_min = 7;  // nullopt: impact is ignored
};

struct FmParams {
  int max_duration_days = 30;
};

struct EventCatalog {
  std::string name;
  std::vector<std::string> listed;
  bool has_wildcard = false;
  std::set<std::string, std::less<>> registered_custom;
  std::map<std::string, ScoredEvent, std::less<>> scores;

  bool is_listed(std::string_view event) const;
  static EventCatalog from_decl(const EventCatalogDecl& decl);
};

// similarity >= similarity_min, or impact >= impact_min when that is set.
bool classify(const ScoredEvent& scores, const FmThresholds& thresholds);

// Listed events that classify as included, in listed order. Throws
// FmError(MissingScores) for the first listed event without scores.
std::vector<std::string> filter_catalog(const EventCatalog& catalog, const FmThresholds& thresholds);

// Returns the catalog with `name` registered. Idempotent; a listed event is
// already recognized and is left out of the custom set. Throws EmptyName.
EventCatalog register_custom_event(EventCatalog catalog, std::string_view name);

bool is_custom_event_registered(const EventCatalog& catalog, std::string_view name);

// Unrecognized events get a single Notice. Recognized ones produce a
// notice to the other party, suspended obligations, and then termination
// when the event outlasts max_duration_days, resumed performance otherwise.
OutcomeLedger handle_event(std::string_view affected, std::string_view other, std::string_view event,
                           long long duration_days, const EventCatalog& catalog, const FmParams& params = {});

class ScoreProvider {
 public:
  virtual ~ScoreProvider() = default;
  // Throws FmError(MissingScores) for an unknown event.
  virtual ScoredEvent score(std::string_view event) const = 0;
};

// `name<TAB>similarity<TAB>impact` per line, `#` comments.
class TableScoreProvider : public ScoreProvider {
 public:
  // Throws lexc::ParseError on a malformed line.
  static TableScoreProvider parse(std::string_view text);
  // Throws std::runtime_error when the file cannot be read.
  static TableScoreProvider load(const std::string& path);

  ScoredEvent score(std::string_view event) const override;
  const std::vector<ScoredEvent>& events() const { return events_; }

  // Catalog listing every table row in file order, with scores attached.
  EventCatalog to_catalog(std::string name) const;

 private:
  std::vector<ScoredEvent> events_;
};

}  // namespace lexc::fm
