#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lincert/event.hpp"

namespace lincert {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A method call referenced by an operation is not part of the history.
struct CallNotInHistory : Error {
  explicit CallNotInHistory(CallId id);
  CallId call;
};

/// Raised by History::difference when the argument is not a subhistory.
struct NotASubhistory : Error {
  NotASubhistory() : Error("not a subhistory") {}
};

struct NotSequential : Error {
  NotSequential() : Error("history is not sequential") {}
};

struct NotComplete : Error {
  NotComplete() : Error("history is not complete") {}
};

struct UnregisteredObject : Error {
  explicit UnregisteredObject(std::string obj);
  std::string object;
};

struct UnknownSpecName : Error {
  explicit UnknownSpecName(std::string name);
  std::string spec_name;
};

struct UnknownOperation : Error {
  UnknownOperation(std::string spec, std::string op);
  std::string spec_name;
  std::string op;
};

/// The causality relation contains a cycle; `cycle` lists events such that
/// each one causes the next and the last causes the first.
struct CyclicCausality : Error {
  explicit CyclicCausality(std::vector<EventId> witness);
  std::vector<EventId> cycle;
};

/// A message edge endpoint does not name a usable event in the carrier.
struct DanglingMessageEndpoint : Error {
  explicit DanglingMessageEndpoint(EventId endpoint);
  EventId endpoint;
};

/// A claimed total-order witness does not range over the carrier set.
struct CarrierMismatch : Error {
  using Error::Error;
};

/// The checker gave up after exploring `limit` states. Deliberately distinct
/// from a "not linearizable" verdict.
struct BudgetExceeded : Error {
  explicit BudgetExceeded(std::uint64_t limit);
  std::uint64_t limit;
};

struct InvalidObjectCertificate : Error {
  InvalidObjectCertificate(std::string obj, std::string why);
  std::string object;
};

struct InvalidCertificate : Error {
  using Error::Error;
};

struct InvalidGenConfig : Error {
  using Error::Error;
};

}  // namespace lincert
