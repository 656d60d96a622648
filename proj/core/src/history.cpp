#include "lincert/history.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace lincert {

const char* rule_name(WellFormedness rule) {
  switch (rule) {
    case WellFormedness::FirstEventNotInvocation:
      return "first-event-not-invocation";
    case WellFormedness::InvocationAfterInvocation:
      return "inv-after-inv";
    case WellFormedness::ResponseAfterResponse:
      return "resp-after-resp";
    case WellFormedness::MismatchedResponse:
      return "mismatched-response";
    case WellFormedness::DuplicateEvent:
      return "duplicate-event";
    case WellFormedness::InvalidIdentifier:
      return "invalid-identifier";
  }
  return "unknown";
}

std::string ValidationError::message() const {
  return "event " + std::to_string(index) + ": " + rule_name(rule);
}

namespace {

// Scans a sequence once, tracking the open invocation of each process.
// Returns the first violation, if any.
std::optional<ValidationError> find_violation(const std::vector<Event>& events) {
  std::unordered_map<int, const Event*> open;   // proc -> pending invocation
  std::unordered_map<int, bool> seen_proc;
  std::set<EventId> identities;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.proc < 1 || e.call_seq < 1) {
      return ValidationError{i, WellFormedness::InvalidIdentifier};
    }
    if (!identities.insert(e.id()).second) {
      return ValidationError{i, WellFormedness::DuplicateEvent};
    }
    auto it = open.find(e.proc);
    bool has_open = it != open.end() && it->second != nullptr;
    if (e.is_invocation()) {
      if (has_open) {
        return ValidationError{i, WellFormedness::InvocationAfterInvocation};
      }
      open[e.proc] = &e;
    } else {
      if (!has_open) {
        return ValidationError{i, seen_proc[e.proc]
                                      ? WellFormedness::ResponseAfterResponse
                                      : WellFormedness::FirstEventNotInvocation};
      }
      if (!it->second->matches(e)) {
        return ValidationError{i, WellFormedness::MismatchedResponse};
      }
      it->second = nullptr;
    }
    seen_proc[e.proc] = true;
  }
  return std::nullopt;
}

}  // namespace

History::History(std::vector<Event> events,
                 std::map<std::string, std::string> meta)
    : events_(std::move(events)), meta_(std::move(meta)) {
  index_.reserve(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i) {
    index_.emplace(events_[i].id(), i);
  }
}

Result<History, ValidationError> History::validate(
    std::vector<Event> events, std::map<std::string, std::string> meta) {
  if (auto err = find_violation(events)) {
    return *err;
  }
  return History(std::move(events), std::move(meta));
}

History History::from_valid(std::vector<Event> events,
                            std::map<std::string, std::string> meta) {
  assert(!find_violation(events).has_value());
  return History(std::move(events), std::move(meta));
}

std::optional<std::size_t> History::position_of(const EventId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool History::contains(const EventId& id) const {
  return index_.contains(id);
}

bool History::precedes(const EventId& a, const EventId& b) const {
  auto pa = position_of(a);
  auto pb = position_of(b);
  if (!pa || !pb) throw CallNotInHistory(a.call());
  return *pa < *pb;
}

std::vector<int> History::processes() const {
  std::set<int> procs;
  for (const Event& e : events_) procs.insert(e.proc);
  return {procs.begin(), procs.end()};
}

std::vector<std::string> History::objects() const {
  std::set<std::string> objs;
  for (const Event& e : events_) objs.insert(e.obj);
  return {objs.begin(), objs.end()};
}

History History::project_process(int proc) const {
  std::vector<Event> kept;
  for (const Event& e : events_) {
    if (e.proc == proc) kept.push_back(e);
  }
  return History(std::move(kept), meta_);
}

History History::project_object(std::string_view obj) const {
  std::vector<Event> kept;
  for (const Event& e : events_) {
    if (e.obj == obj) kept.push_back(e);
  }
  return History(std::move(kept), meta_);
}

History History::complete() const {
  // A pending invocation has no response anywhere in the sequence.
  std::vector<Event> kept;
  for (const Event& e : events_) {
    if (e.is_invocation() &&
        !contains(EventId{e.proc, e.call_seq, EventKind::Response})) {
      continue;
    }
    kept.push_back(e);
  }
  return History(std::move(kept), meta_);
}

bool History::is_complete() const {
  for (const Event& e : events_) {
    if (e.is_invocation() &&
        !contains(EventId{e.proc, e.call_seq, EventKind::Response})) {
      return false;
    }
  }
  return true;
}

bool History::is_sequential() const {
  const Event* open = nullptr;
  for (const Event& e : events_) {
    if (e.is_invocation()) {
      if (open) return false;
      open = &e;
    } else {
      if (!open || !open->matches(e)) return false;
      open = nullptr;
    }
  }
  return true;
}

bool History::is_subhistory_of(const History& extension) const {
  std::size_t last = 0;
  bool first = true;
  for (const Event& e : events_) {
    auto pos = extension.position_of(e.id());
    if (!pos || extension.at(*pos) != e) return false;
    if (!first && *pos <= last) return false;
    last = *pos;
    first = false;
  }
  return true;
}

History History::difference(const History& sub) const {
  if (!sub.is_subhistory_of(*this)) throw NotASubhistory();
  std::vector<Event> kept;
  for (const Event& e : events_) {
    if (!sub.contains(e.id())) kept.push_back(e);
  }
  return History(std::move(kept), meta_);
}

bool History::is_prefix_of(const History& extension) const {
  if (size() > extension.size()) return false;
  return std::equal(events_.begin(), events_.end(),
                    extension.events_.begin());
}

bool History::equivalent_to(const History& other) const {
  std::set<int> procs;
  for (const Event& e : events_) procs.insert(e.proc);
  for (const Event& e : other.events_) procs.insert(e.proc);
  for (int p : procs) {
    if (project_process(p).events() != other.project_process(p).events()) {
      return false;
    }
  }
  return true;
}

std::vector<MethodCall> History::calls() const {
  std::vector<MethodCall> out;
  std::unordered_map<CallId, std::size_t, CallIdHash> slot;
  for (const Event& e : events_) {
    if (e.is_invocation()) {
      slot.emplace(e.call(), out.size());
      out.push_back(MethodCall{e, std::nullopt});
    } else {
      out[slot.at(e.call())].response = e;
    }
  }
  return out;
}

std::vector<MethodCall> History::pending_calls() const {
  std::vector<MethodCall> out;
  for (MethodCall& c : calls()) {
    if (c.pending()) out.push_back(std::move(c));
  }
  return out;
}

std::optional<MethodCall> History::call(const CallId& id) const {
  auto inv = position_of(EventId{id.proc, id.call_seq, EventKind::Invocation});
  if (!inv) return std::nullopt;
  MethodCall c{events_[*inv], std::nullopt};
  auto resp = position_of(EventId{id.proc, id.call_seq, EventKind::Response});
  if (resp) c.response = events_[*resp];
  return c;
}

bool History::call_precedes(const CallId& first, const CallId& second) const {
  auto inv1 = position_of(EventId{first.proc, first.call_seq, EventKind::Invocation});
  if (!inv1) throw CallNotInHistory(first);
  auto inv2 = position_of(EventId{second.proc, second.call_seq, EventKind::Invocation});
  if (!inv2) throw CallNotInHistory(second);
  auto resp1 = position_of(EventId{first.proc, first.call_seq, EventKind::Response});
  if (!resp1) return false;  // pending calls precede nothing
  return *resp1 < *inv2;
}

History history_from_calls(std::span<const MethodCall> calls,
                           std::map<std::string, std::string> meta) {
  std::vector<Event> events;
  events.reserve(calls.size() * 2);
  for (const MethodCall& c : calls) {
    if (!c.response) throw NotComplete();
    events.push_back(c.invocation);
    events.push_back(*c.response);
  }
  return History::from_valid(std::move(events), std::move(meta));
}

}  // namespace lincert
