#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace lincert {

enum class EventKind { Invocation, Response };

const char* to_string(EventKind kind);

/// Identity of a method call: issuing process and per-process call number.
struct CallId {
  int proc = 0;
  int call_seq = 0;

  friend auto operator<=>(const CallId&, const CallId&) = default;
};

/// Identity of an event. Payloads are deliberately not part of identity, so
/// set operations on histories (membership, difference) work on these keys.
struct EventId {
  int proc = 0;
  int call_seq = 0;
  EventKind kind = EventKind::Invocation;

  CallId call() const { return {proc, call_seq}; }

  friend auto operator<=>(const EventId&, const EventId&) = default;
};

/// One invocation or response event. `payload` carries the operation
/// arguments for invocations and the results for responses; values are
/// opaque strings at this layer.
struct Event {
  EventKind kind = EventKind::Invocation;
  int proc = 0;
  int call_seq = 0;
  std::string obj;
  std::string op;
  std::vector<std::string> payload;

  EventId id() const { return {proc, call_seq, kind}; }
  CallId call() const { return {proc, call_seq}; }
  bool is_invocation() const { return kind == EventKind::Invocation; }
  bool is_response() const { return kind == EventKind::Response; }

  /// True when the two events are an invocation/response pair that agree on
  /// process, call number, object and operation.
  bool matches(const Event& other) const;

  friend bool operator==(const Event&, const Event&) = default;
};

Event make_invocation(int proc, int call_seq, std::string obj, std::string op,
                      std::vector<std::string> args = {});
Event make_response(int proc, int call_seq, std::string obj, std::string op,
                    std::vector<std::string> results = {});

std::string to_string(const Event& e);
std::string to_string(const EventId& id);

struct EventIdHash {
  std::size_t operator()(const EventId& id) const noexcept;
};

struct CallIdHash {
  std::size_t operator()(const CallId& id) const noexcept;
};

}  // namespace lincert
