#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lincert/causality.hpp"
#include "lincert/checker.hpp"
#include "lincert/history.hpp"
#include "lincert/result.hpp"
#include "lincert/spec.hpp"

namespace lincert {

struct TraceParseError : Error {
  TraceParseError(std::size_t line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  std::size_t line;
};

struct CertificateParseError : Error {
  using Error::Error;
};

/// One line of a trace file. Event records carry an event; message records
/// carry the endpoints of a cross-process causality edge.
struct TraceRecord {
  enum class Type { Event, Message };
  Type type = Type::Event;
  Event event;
  MessageEdge message;
  std::size_t line = 0;  // 1-based position in the source file, 0 if built

  static TraceRecord for_event(Event e) {
    TraceRecord r;
    r.event = std::move(e);
    return r;
  }
  static TraceRecord for_message(MessageEdge m) {
    TraceRecord r;
    r.type = Type::Message;
    r.message = m;
    return r;
  }
};

/// A parsed trace: line order is the event order.
struct Trace {
  std::vector<TraceRecord> records;

  std::vector<Event> events() const;
  std::vector<MessageEdge> messages() const;
  /// Source line of the i-th event record; 0 when unknown.
  std::size_t event_line(std::size_t event_index) const;
};

/// Traces are JSON Lines, UTF-8, LF line endings. Event records serialize
/// with keys in the order (type, proc, seq, obj, op, payload) and type
/// "inv" or "resp"; message records as (type, from_event, to_event) with
/// type "msg" and endpoints {proc, seq, kind}. No extra whitespace, so
/// parse and serialize round-trip byte for byte on canonical input.
TraceRecord parse_trace_line(std::string_view line, std::size_t line_no = 0);
std::string serialize_trace_line(const TraceRecord& record);

Trace parse_trace(std::istream& in);
Trace parse_trace(const std::string& text);
Trace parse_trace_file(const std::filesystem::path& path);
std::string serialize_trace(const Trace& trace);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

Trace trace_from_history(const History& history);

/// Validates the trace's event records into a history; the error carries
/// the offending source line.
Result<History, ValidationError> history_from_trace(
    const Trace& trace, std::map<std::string, std::string> meta = {});

/// Registry files map object ids to spec names:
///   {"q1":"fifo-queue","r1":"register"}
std::map<std::string, std::string> parse_registry(const std::string& text);
std::map<std::string, std::string> parse_registry_file(
    const std::filesystem::path& path);
std::string serialize_registry(const std::map<std::string, std::string>& names);

/// Certificate wire form. Structurally valid JSON binds to a
/// LinearizationCertificate only relative to a base history; binding
/// failures turn into verification failures, not parse errors.
struct RawCertificate {
  struct LinEntry {
    CallId id;
    /// Response payload for calls completed by the extension; absent for
    /// calls whose response is recorded in the base history.
    std::optional<std::vector<std::string>> results;
  };

  L3Mode mode = L3Mode::Strengthened;
  std::vector<Event> appended_responses;
  std::vector<LinEntry> linearization;
  std::vector<CallId> completed_pending;
  /// Optional per-object certificates (compositional reports).
  std::map<std::string, RawCertificate> objects;
};

RawCertificate to_raw(const LinearizationCertificate& certificate,
                      const History& base);

/// JSON document with keys (mode, appended_responses, linearization,
/// completed_pending[, objects]).
std::string raw_certificate_to_json(const RawCertificate& raw);
RawCertificate raw_certificate_from_json(const std::string& text);

/// Reattaches a wire certificate to a base history. Errors come back as the
/// verification condition they violate ("L1" when the claimed extension is
/// not a history over the base, "L2-equiv" when the linearization cannot
/// even be reconstructed).
Result<LinearizationCertificate, VerifyReport> bind_certificate(
    const RawCertificate& raw, const History& base);

}  // namespace lincert
