#include "lincert/trace.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lincert {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json event_to_json(const Event& e) {
  ordered_json j;
  j["type"] = e.is_invocation() ? "inv" : "resp";
  j["proc"] = e.proc;
  j["seq"] = e.call_seq;
  j["obj"] = e.obj;
  j["op"] = e.op;
  j["payload"] = e.payload;
  return j;
}

ordered_json endpoint_to_json(const EventId& id) {
  ordered_json j;
  j["proc"] = id.proc;
  j["seq"] = id.call_seq;
  j["kind"] = id.kind == EventKind::Invocation ? "inv" : "resp";
  return j;
}

int require_int(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw std::invalid_argument(std::string("missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

std::string require_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw std::invalid_argument(std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

std::vector<std::string> require_string_array(const ordered_json& j,
                                              const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw std::invalid_argument(std::string("missing array field '") + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (!v.is_string()) {
      throw std::invalid_argument(std::string("non-string entry in '") + key + "'");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

EventId endpoint_from_json(const ordered_json& j) {
  EventId id;
  id.proc = require_int(j, "proc");
  id.call_seq = require_int(j, "seq");
  std::string kind = require_string(j, "kind");
  if (kind == "inv") {
    id.kind = EventKind::Invocation;
  } else if (kind == "resp") {
    id.kind = EventKind::Response;
  } else {
    throw std::invalid_argument("endpoint kind must be 'inv' or 'resp'");
  }
  return id;
}

}  // namespace

std::vector<Event> Trace::events() const {
  std::vector<Event> out;
  for (const TraceRecord& r : records) {
    if (r.type == TraceRecord::Type::Event) out.push_back(r.event);
  }
  return out;
}

std::vector<MessageEdge> Trace::messages() const {
  std::vector<MessageEdge> out;
  for (const TraceRecord& r : records) {
    if (r.type == TraceRecord::Type::Message) out.push_back(r.message);
  }
  return out;
}

std::size_t Trace::event_line(std::size_t event_index) const {
  std::size_t seen = 0;
  for (const TraceRecord& r : records) {
    if (r.type != TraceRecord::Type::Event) continue;
    if (seen == event_index) return r.line;
    ++seen;
  }
  return 0;
}

TraceRecord parse_trace_line(std::string_view line, std::size_t line_no) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw TraceParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw std::invalid_argument("record is not an object");
    std::string type = require_string(j, "type");
    if (type == "msg") {
      if (!j.contains("from_event") || !j.contains("to_event")) {
        throw std::invalid_argument("msg record needs from_event and to_event");
      }
      TraceRecord r =
          TraceRecord::for_message({endpoint_from_json(j["from_event"]),
                                    endpoint_from_json(j["to_event"])});
      r.line = line_no;
      return r;
    }
    if (type != "inv" && type != "resp") {
      throw std::invalid_argument("record type must be inv, resp or msg");
    }
    Event e;
    e.kind = type == "inv" ? EventKind::Invocation : EventKind::Response;
    e.proc = require_int(j, "proc");
    e.call_seq = require_int(j, "seq");
    e.obj = require_string(j, "obj");
    e.op = require_string(j, "op");
    e.payload = require_string_array(j, "payload");
    if (e.proc < 1 || e.call_seq < 1) {
      throw std::invalid_argument("proc and seq must be positive");
    }
    TraceRecord r = TraceRecord::for_event(std::move(e));
    r.line = line_no;
    return r;
  } catch (const std::invalid_argument& e) {
    throw TraceParseError(line_no, e.what());
  }
}

std::string serialize_trace_line(const TraceRecord& record) {
  if (record.type == TraceRecord::Type::Message) {
    ordered_json j;
    j["type"] = "msg";
    j["from_event"] = endpoint_to_json(record.message.from);
    j["to_event"] = endpoint_to_json(record.message.to);
    return j.dump();
  }
  return event_to_json(record.event).dump();
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    trace.records.push_back(parse_trace_line(line, line_no));
  }
  return trace;
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

Trace parse_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceParseError(0, "cannot open " + path.string());
  return parse_trace(in);
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  for (const TraceRecord& r : trace.records) {
    out += serialize_trace_line(r);
    out += '\n';
  }
  return out;
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_trace(trace);
}

Trace trace_from_history(const History& history) {
  Trace trace;
  for (const Event& e : history.events()) {
    trace.records.push_back(TraceRecord::for_event(e));
  }
  return trace;
}

Result<History, ValidationError> history_from_trace(
    const Trace& trace, std::map<std::string, std::string> meta) {
  return History::validate(trace.events(), std::move(meta));
}

std::map<std::string, std::string> parse_registry(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CertificateParseError(std::string("invalid registry JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw CertificateParseError("registry must be a JSON object");
  }
  std::map<std::string, std::string> out;
  for (const auto& [obj, name] : j.items()) {
    if (!name.is_string()) {
      throw CertificateParseError("registry entry for '" + obj +
                                  "' must be a spec name string");
    }
    out.emplace(obj, name.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> parse_registry_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CertificateParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_registry(buf.str());
}

std::string serialize_registry(const std::map<std::string, std::string>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [obj, name] : names) j[obj] = name;
  return j.dump() + "\n";
}

RawCertificate to_raw(const LinearizationCertificate& certificate,
                      const History& base) {
  RawCertificate raw;
  raw.mode = certificate.mode;
  History appended = certificate.extension.difference(base);
  for (const Event& e : appended.events()) {
    raw.appended_responses.push_back(e);
  }
  std::set<CallId> completed(certificate.completed_pending.begin(),
                             certificate.completed_pending.end());
  for (const MethodCall& call : certificate.linearization.calls()) {
    RawCertificate::LinEntry entry;
    entry.id = call.id();
    if (completed.contains(call.id()) && call.response) {
      entry.results = call.response->payload;
    }
    raw.linearization.push_back(std::move(entry));
  }
  raw.completed_pending = certificate.completed_pending;
  return raw;
}

namespace {

ordered_json raw_to_json_value(const RawCertificate& raw) {
  ordered_json j;
  j["mode"] = to_string(raw.mode);
  j["appended_responses"] = ordered_json::array();
  for (const Event& e : raw.appended_responses) {
    j["appended_responses"].push_back(event_to_json(e));
  }
  j["linearization"] = ordered_json::array();
  for (const auto& entry : raw.linearization) {
    ordered_json je;
    je["proc"] = entry.id.proc;
    je["seq"] = entry.id.call_seq;
    if (entry.results) je["results"] = *entry.results;
    j["linearization"].push_back(je);
  }
  j["completed_pending"] = ordered_json::array();
  for (const CallId& id : raw.completed_pending) {
    ordered_json je;
    je["proc"] = id.proc;
    je["seq"] = id.call_seq;
    j["completed_pending"].push_back(je);
  }
  if (!raw.objects.empty()) {
    ordered_json objs;
    for (const auto& [obj, sub] : raw.objects) {
      objs[obj] = raw_to_json_value(sub);
    }
    j["objects"] = objs;
  }
  return j;
}

RawCertificate raw_from_json_value(const ordered_json& j) {
  if (!j.is_object()) {
    throw CertificateParseError("certificate must be a JSON object");
  }
  RawCertificate raw;
  try {
    auto mode = l3_mode_from_name(require_string(j, "mode"));
    if (!mode) throw std::invalid_argument("unknown mode");
    raw.mode = *mode;
    if (!j.contains("appended_responses") || !j["appended_responses"].is_array()) {
      throw std::invalid_argument("missing appended_responses array");
    }
    for (const auto& je : j["appended_responses"]) {
      if (require_string(je, "type") != "resp") {
        throw std::invalid_argument("appended events must be responses");
      }
      Event e;
      e.kind = EventKind::Response;
      e.proc = require_int(je, "proc");
      e.call_seq = require_int(je, "seq");
      e.obj = require_string(je, "obj");
      e.op = require_string(je, "op");
      e.payload = require_string_array(je, "payload");
      raw.appended_responses.push_back(std::move(e));
    }
    if (!j.contains("linearization") || !j["linearization"].is_array()) {
      throw std::invalid_argument("missing linearization array");
    }
    for (const auto& je : j["linearization"]) {
      RawCertificate::LinEntry entry;
      entry.id.proc = require_int(je, "proc");
      entry.id.call_seq = require_int(je, "seq");
      if (je.contains("results")) {
        entry.results = require_string_array(je, "results");
      }
      raw.linearization.push_back(std::move(entry));
    }
    if (j.contains("completed_pending")) {
      if (!j["completed_pending"].is_array()) {
        throw std::invalid_argument("completed_pending must be an array");
      }
      for (const auto& je : j["completed_pending"]) {
        raw.completed_pending.push_back(
            CallId{require_int(je, "proc"), require_int(je, "seq")});
      }
    }
    if (j.contains("objects")) {
      if (!j["objects"].is_object()) {
        throw std::invalid_argument("objects must be a JSON object");
      }
      for (const auto& [obj, sub] : j["objects"].items()) {
        raw.objects.emplace(obj, raw_from_json_value(sub));
      }
    }
  } catch (const std::invalid_argument& e) {
    throw CertificateParseError(e.what());
  }
  return raw;
}

}  // namespace

std::string raw_certificate_to_json(const RawCertificate& raw) {
  return raw_to_json_value(raw).dump() + "\n";
}

RawCertificate raw_certificate_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CertificateParseError(std::string("invalid certificate JSON: ") +
                                e.what());
  }
  return raw_from_json_value(j);
}

Result<LinearizationCertificate, VerifyReport> bind_certificate(
    const RawCertificate& raw, const History& base) {
  // Rebuild the extension: base events plus the claimed appended responses.
  std::vector<Event> extended = base.events();
  extended.insert(extended.end(), raw.appended_responses.begin(),
                  raw.appended_responses.end());
  auto ext = History::validate(std::move(extended), base.meta());
  if (!ext.ok()) {
    return VerifyReport::fail(
        "L1", "appending the claimed responses does not yield a history (" +
                  ext.error().message() + ")");
  }

  // Rebuild the linearization from call ids; recorded responses come from
  // the base history, synthesized ones from the entry payloads.
  std::vector<Event> lin_events;
  for (const auto& entry : raw.linearization) {
    auto call = base.call(entry.id);
    if (!call) {
      return VerifyReport::fail(
          "L2-equiv", "linearization names call (p" +
                          std::to_string(entry.id.proc) + ",c" +
                          std::to_string(entry.id.call_seq) +
                          ") which is not in the history");
    }
    Event resp;
    if (entry.results) {
      resp = make_response(call->invocation.proc, call->invocation.call_seq,
                           call->invocation.obj, call->invocation.op,
                           *entry.results);
    } else if (call->response) {
      resp = *call->response;
    } else {
      return VerifyReport::fail(
          "L2-equiv", "linearization completes pending call (p" +
                          std::to_string(entry.id.proc) + ",c" +
                          std::to_string(entry.id.call_seq) +
                          ") without giving its results");
    }
    lin_events.push_back(call->invocation);
    lin_events.push_back(std::move(resp));
  }
  auto lin = History::validate(std::move(lin_events), base.meta());
  if (!lin.ok()) {
    return VerifyReport::fail(
        "L2-legal",
        "the claimed linearization is not a history (" + lin.error().message() + ")");
  }

  LinearizationCertificate cert;
  cert.extension = std::move(ext).value();
  cert.linearization = std::move(lin).value();
  cert.mode = raw.mode;
  cert.completed_pending = raw.completed_pending;
  return cert;
}

}  // namespace lincert
