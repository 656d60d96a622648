#include "lincert/event.hpp"

#include <functional>
#include <sstream>

namespace lincert {

const char* to_string(EventKind kind) {
  return kind == EventKind::Invocation ? "inv" : "resp";
}

bool Event::matches(const Event& other) const {
  return kind != other.kind && proc == other.proc &&
         call_seq == other.call_seq && obj == other.obj && op == other.op;
}

Event make_invocation(int proc, int call_seq, std::string obj, std::string op,
                      std::vector<std::string> args) {
  return Event{EventKind::Invocation, proc,          call_seq,
               std::move(obj),        std::move(op), std::move(args)};
}

Event make_response(int proc, int call_seq, std::string obj, std::string op,
                    std::vector<std::string> results) {
  return Event{EventKind::Response, proc,          call_seq,
               std::move(obj),      std::move(op), std::move(results)};
}

std::string to_string(const Event& e) {
  std::ostringstream out;
  out << to_string(e.kind) << "(p" << e.proc << ",c" << e.call_seq << ","
      << e.obj << "," << e.op << ",[";
  for (std::size_t i = 0; i < e.payload.size(); ++i) {
    if (i) out << ",";
    out << e.payload[i];
  }
  out << "])";
  return out.str();
}

std::string to_string(const EventId& id) {
  std::ostringstream out;
  out << to_string(id.kind) << "(p" << id.proc << ",c" << id.call_seq << ")";
  return out.str();
}

static std::size_t mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

std::size_t EventIdHash::operator()(const EventId& id) const noexcept {
  std::size_t h = std::hash<int>{}(id.proc);
  h = mix(h, std::hash<int>{}(id.call_seq));
  h = mix(h, static_cast<std::size_t>(id.kind));
  return h;
}

std::size_t CallIdHash::operator()(const CallId& id) const noexcept {
  return mix(std::hash<int>{}(id.proc), std::hash<int>{}(id.call_seq));
}

}  // namespace lincert
