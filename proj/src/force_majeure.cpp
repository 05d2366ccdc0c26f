#include "lexc/force_majeure.hpp"

#include "lexc/parser.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lexc::fm {

bool EventCatalog::is_listed(std::string_view event) const {
  return std::find(listed.begin(), listed.end(), event) != listed.end();
}

EventCatalog EventCatalog::from_decl(const EventCatalogDecl& decl) {
  EventCatalog catalog;
  catalog.name = decl.name;
  catalog.listed = decl.listed;
  catalog.has_wildcard = decl.has_wildcard;
  return catalog;
}

bool classify(const ScoredEvent& scores, const FmThresholds& thresholds) {
  if (scores.similarity >= thresholds.similarity_min) return true;
  return thresholds.impact_min && scores.impact >= *thresholds.impact_min;
}

std::vector<std::string> filter_catalog(const EventCatalog& catalog, const FmThresholds& thresholds) {
  if (thresholds.similarity_min < 1 || (thresholds.impact_min && *thresholds.impact_min < 1)) {
    throw FmError(FmErrorKind::InvalidThreshold, "thresholds must be at least 1");
  }
  std::vector<std::string> included;
  for (const auto& event : catalog.listed) {
    auto it = catalog.scores.find(event);
    if (it == catalog.scores.end()) throw FmError(FmErrorKind::MissingScores, "no scores for event: " + event);
    if (classify(it->second, thresholds)) included.push_back(event);
  }
  return included;
}

EventCatalog register_custom_event(EventCatalog catalog, std::string_view name) {
  if (name.empty()) throw FmError(FmErrorKind::EmptyName, "custom event name is empty");
  if (!catalog.is_listed(name)) catalog.registered_custom.emplace(name);
  return catalog;
}

bool is_custom_event_registered(const EventCatalog& catalog, std::string_view name) {
  return catalog.registered_custom.find(name) != catalog.registered_custom.end();
}

OutcomeLedger handle_event(std::string_view affected, std::string_view other, std::string_view event,
                           long long duration_days, const EventCatalog& catalog, const FmParams& params) {
  const std::string ev(event);
  OutcomeLedger ledger;
  if (!catalog.is_listed(event) && !is_custom_event_registered(catalog, event)) {
    ledger.entries.push_back(NoticeEntry{"event not recognized: " + ev});
    return ledger;
  }
  ledger.entries.push_back(NoticeEntry{std::string(affected) + " notifies " + std::string(other) + " of " + ev +
                                       " lasting " + std::to_string(duration_days) + " days"});
  ledger.entries.push_back(StatusEntry{"obligations_suspended", true});
  if (duration_days > params.max_duration_days) {
    ledger.entries.push_back(TerminationEntry{"force majeure event " + ev + " exceeded " +
                                              std::to_string(params.max_duration_days) + " days"});
  } else {
    ledger.entries.push_back(StatusEntry{"performance_resumed", true});
  }
  return ledger;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_score(std::string_view field, int line, int column, const char* what) {
  field = trim(field);
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
    throw ParseError(line, column, what, field.empty() ? "empty field" : "'" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

TableScoreProvider TableScoreProvider::parse(std::string_view text) {
  TableScoreProvider provider;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    std::vector<std::string_view> fields;
    std::vector<int> columns;
    std::size_t from = 0;
    for (;;) {
      std::size_t tab = line.find('\t', from);
      fields.push_back(line.substr(from, tab == std::string_view::npos ? std::string_view::npos : tab - from));
      columns.push_back(static_cast<int>(from) + 1);
      if (tab == std::string_view::npos) break;
      from = tab + 1;
    }
    if (fields.size() != 3) {
      throw ParseError(line_no, 1, "name<TAB>similarity<TAB>impact", std::to_string(fields.size()) + " fields");
    }
    ScoredEvent event;
    event.name = std::string(trim(fields[0]));
    if (event.name.empty()) throw ParseError(line_no, 1, "event name", "empty field");
    event.similarity = parse_score(fields[1], line_no, columns[1], "similarity score between 1 and 10");
    if (event.similarity > 10) {
      throw ParseError(line_no, columns[1], "similarity score between 1 and 10", std::string(trim(fields[1])));
    }
    event.impact = parse_score(fields[2], line_no, columns[2], "positive impact score");
    auto dup = std::find_if(provider.events_.begin(), provider.events_.end(),
                            [&](const ScoredEvent& e) { return e.name == event.name; });
    if (dup != provider.events_.end()) throw ParseError(line_no, 1, "a new event name", "duplicate '" + event.name + "'");
    provider.events_.push_back(std::move(event));
    if (end == text.size()) break;
  }
  return provider;
}

TableScoreProvider TableScoreProvider::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

ScoredEvent TableScoreProvider::score(std::string_view event) const {
  for (const auto& e : events_) {
    if (e.name == event) return e;
  }
  throw FmError(FmErrorKind::MissingScores, "no scores for event: " + std::string(event));
}

EventCatalog TableScoreProvider::to_catalog(std::string name) const {
  EventCatalog catalog;
  catalog.name = std::move(name);
  for (const auto& e : events_) {
    catalog.listed.push_back(e.name);
    catalog.scores.emplace(e.name, e);
  }
  return catalog;
}

}  // namespace lexc::fm
