#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lincert/event.hpp"
#include "lincert/errors.hpp"
#include "lincert/result.hpp"

namespace lincert {

/// Why a sequence of events is not a well-formed history. A process
/// subhistory must alternate invocation/response starting with an
/// invocation, each response must match the invocation immediately before
/// it, and event identities must be unique.
enum class WellFormedness {
  FirstEventNotInvocation,
  InvocationAfterInvocation,
  ResponseAfterResponse,
  MismatchedResponse,
  DuplicateEvent,
  InvalidIdentifier,
};

const char* rule_name(WellFormedness rule);

struct ValidationError {
  std::size_t index = 0;  // position of the first violating event
  WellFormedness rule = WellFormedness::FirstEventNotInvocation;

  std::string message() const;
};

/// One method call as it appears in a history: the invocation event plus the
/// matching response when the call has completed.
struct MethodCall {
  Event invocation;
  std::optional<Event> response;

  bool complete() const { return response.has_value(); }
  bool pending() const { return !response.has_value(); }
  CallId id() const { return invocation.call(); }
  const std::string& obj() const { return invocation.obj; }
  const std::string& op() const { return invocation.op; }
};

/// A finite well-ordered sequence of events. The sequence position is the
/// ordering: events()[i] precedes events()[j] exactly when i < j. Instances
/// always satisfy the history invariants; raw event sequences enter through
/// validate().
///
/// `meta` optionally maps object ids to sequential spec names. It is carried
/// through operations and ignored by equality.
class History {
 public:
  History() = default;

  static Result<History, ValidationError> validate(
      std::vector<Event> events, std::map<std::string, std::string> meta = {});

  /// Wraps events that are already known to satisfy the invariants, e.g. the
  /// output of an operation on a valid history. Checked in debug builds.
  static History from_valid(std::vector<Event> events,
                            std::map<std::string, std::string> meta = {});

  const std::vector<Event>& events() const { return events_; }
  const Event& at(std::size_t pos) const { return events_[pos]; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  const std::map<std::string, std::string>& meta() const { return meta_; }

  std::optional<std::size_t> position_of(const EventId& id) const;
  bool contains(const EventId& id) const;
  /// Event order; both events must be present.
  bool precedes(const EventId& a, const EventId& b) const;

  std::vector<int> processes() const;
  std::vector<std::string> objects() const;

  /// Subhistory of events issued by one process. Unknown process -> empty.
  History project_process(int proc) const;
  /// Subhistory of events on one object. Unknown object -> empty.
  History project_object(std::string_view obj) const;

  /// Maximal subhistory containing no pending invocations.
  History complete() const;
  bool is_complete() const;

  /// True when the whole sequence alternates invocation / matching response
  /// starting with an invocation. At most the last call may be pending.
  bool is_sequential() const;

  /// True when every event of this history appears in `extension` unchanged
  /// and in the same relative order.
  bool is_subhistory_of(const History& extension) const;

  /// Events of this history that are not in `sub`, keeping their order.
  /// Requires sub to be a subhistory of this history.
  History difference(const History& sub) const;

  /// True when `extension` starts with exactly this event sequence.
  bool is_prefix_of(const History& extension) const;

  /// True when both histories have equal per-process subhistories.
  bool equivalent_to(const History& other) const;

  /// Method calls in invocation order.
  std::vector<MethodCall> calls() const;
  std::vector<MethodCall> pending_calls() const;
  std::optional<MethodCall> call(const CallId& id) const;

  /// True when `first` completed before `second` began: the response of
  /// `first` precedes the invocation of `second`. A pending call precedes
  /// nothing. Throws CallNotInHistory when either call is absent.
  bool call_precedes(const CallId& first, const CallId& second) const;

  friend bool operator==(const History& a, const History& b) {
    return a.events_ == b.events_;
  }

 private:
  History(std::vector<Event> events, std::map<std::string, std::string> meta);

  std::vector<Event> events_;
  std::map<std::string, std::string> meta_;
  std::unordered_map<EventId, std::size_t, EventIdHash> index_;
};

/// Builds the sequential complete history that performs `calls` one after
/// another in the given order. Every call must carry a response.
History history_from_calls(std::span<const MethodCall> calls,
                           std::map<std::string, std::string> meta = {});

}  // namespace lincert
