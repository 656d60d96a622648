#include "lincert/spec.hpp"

#include <algorithm>

namespace lincert {

// Values are joined with ',' after escaping '\' and ',' so that arbitrary
// value strings round-trip. An empty container encodes to "" and a single
// empty value to "\e" to keep the two distinct.
std::string encode_values(std::span<const std::string> values) {
  if (values.size() == 1 && values[0].empty()) return "\\e";
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    for (char c : values[i]) {
      if (c == '\\' || c == ',') out += '\\';
      out += c;
    }
  }
  return out;
}

std::vector<std::string> decode_values(std::string_view encoded) {
  if (encoded.empty()) return {};
  if (encoded == "\\e") return {""};
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    char c = encoded[i];
    if (c == '\\' && i + 1 < encoded.size()) {
      cur += encoded[++i];
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

namespace {

class RegisterSpec final : public SequentialSpec {
 public:
  const std::string& name() const override {
    static const std::string n = "register";
    return n;
  }
  SpecState initial() const override { return "0"; }
  std::optional<StepOutcome> apply(
      const SpecState& state, const std::string& op,
      std::span<const std::string> args) const override {
    if (op == "write") {
      if (args.size() != 1) return std::nullopt;
      return StepOutcome{args[0], {"ok"}};
    }
    if (op == "read") {
      if (!args.empty()) return std::nullopt;
      return StepOutcome{state, {state}};
    }
    throw UnknownOperation(name(), op);
  }
};

class QueueSpec final : public SequentialSpec {
 public:
  const std::string& name() const override {
    static const std::string n = "fifo-queue";
    return n;
  }
  SpecState initial() const override { return ""; }
  std::optional<StepOutcome> apply(
      const SpecState& state, const std::string& op,
      std::span<const std::string> args) const override {
    if (op == "enq") {
      if (args.size() != 1) return std::nullopt;
      auto items = decode_values(state);
      items.push_back(args[0]);
      return StepOutcome{encode_values(items), {"ok"}};
    }
    if (op == "deq") {
      if (!args.empty()) return std::nullopt;
      auto items = decode_values(state);
      if (items.empty()) return StepOutcome{state, {"empty"}};
      std::string front = items.front();
      items.erase(items.begin());
      return StepOutcome{encode_values(items), {front}};
    }
    throw UnknownOperation(name(), op);
  }
};

class StackSpec final : public SequentialSpec {
 public:
  const std::string& name() const override {
    static const std::string n = "stack";
    return n;
  }
  SpecState initial() const override { return ""; }
  std::optional<StepOutcome> apply(
      const SpecState& state, const std::string& op,
      std::span<const std::string> args) const override {
    if (op == "push") {
      if (args.size() != 1) return std::nullopt;
      auto items = decode_values(state);
      items.push_back(args[0]);
      return StepOutcome{encode_values(items), {"ok"}};
    }
    if (op == "pop") {
      if (!args.empty()) return std::nullopt;
      auto items = decode_values(state);
      if (items.empty()) return StepOutcome{state, {"empty"}};
      std::string top = items.back();
      items.pop_back();
      return StepOutcome{encode_values(items), {top}};
    }
    throw UnknownOperation(name(), op);
  }
};

}  // namespace

std::shared_ptr<const SequentialSpec> builtin_spec(std::string_view name) {
  if (name == "register") return std::make_shared<RegisterSpec>();
  if (name == "fifo-queue") return std::make_shared<QueueSpec>();
  if (name == "stack") return std::make_shared<StackSpec>();
  return nullptr;
}

std::vector<std::string> builtin_spec_names() {
  return {"fifo-queue", "register", "stack"};
}

void SpecRegistry::bind(std::string obj,
                        std::shared_ptr<const SequentialSpec> spec) {
  by_object_[std::move(obj)] = std::move(spec);
}

void SpecRegistry::bind_builtin(std::string obj, std::string_view spec_name) {
  auto spec = builtin_spec(spec_name);
  if (!spec) throw UnknownSpecName(std::string(spec_name));
  bind(std::move(obj), std::move(spec));
}

bool SpecRegistry::bound(const std::string& obj) const {
  return by_object_.contains(obj);
}

const SequentialSpec& SpecRegistry::spec_for(const std::string& obj) const {
  auto it = by_object_.find(obj);
  if (it == by_object_.end()) throw UnregisteredObject(obj);
  return *it->second;
}

std::map<std::string, std::string> SpecRegistry::names() const {
  std::map<std::string, std::string> out;
  for (const auto& [obj, spec] : by_object_) out.emplace(obj, spec->name());
  return out;
}

SpecRegistry SpecRegistry::from_names(
    const std::map<std::string, std::string>& names) {
  SpecRegistry reg;
  for (const auto& [obj, spec_name] : names) reg.bind_builtin(obj, spec_name);
  return reg;
}

std::optional<SpecState> step(const SequentialSpec& spec,
                              const SpecState& state, const MethodCall& call) {
  if (!call.response) throw NotComplete();
  auto outcome = spec.apply(state, call.invocation.op, call.invocation.payload);
  if (!outcome || outcome->results != call.response->payload) {
    return std::nullopt;
  }
  return std::move(outcome->state);
}

bool is_legal(const History& sequential, const SpecRegistry& registry) {
  if (!sequential.is_sequential()) throw NotSequential();
  if (!sequential.is_complete()) throw NotComplete();
  std::map<std::string, SpecState> states;
  for (const MethodCall& call : sequential.calls()) {
    const SequentialSpec& spec = registry.spec_for(call.obj());
    auto it = states.try_emplace(call.obj(), spec.initial()).first;
    auto next = step(spec, it->second, call);
    if (!next) return false;
    it->second = std::move(*next);
  }
  return true;
}

}  // namespace lincert
