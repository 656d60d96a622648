#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lincert/history.hpp"

namespace lincert {

/// Spec states are opaque encoded strings so they can double as map keys.
using SpecState = std::string;

struct StepOutcome {
  SpecState state;
  std::vector<std::string> results;
};

/// A deterministic sequential specification. Its legal single-object
/// sequential histories are exactly those reproducible by apply() from the
/// initial state, which keeps the legal set prefix-closed.
class SequentialSpec {
 public:
  virtual ~SequentialSpec() = default;

  virtual const std::string& name() const = 0;
  virtual SpecState initial() const = 0;

  /// The unique outcome of op(args) in `state`. Returns nullopt when the
  /// argument list is malformed for the operation. Throws UnknownOperation
  /// for operation names the spec does not define.
  virtual std::optional<StepOutcome> apply(
      const SpecState& state, const std::string& op,
      std::span<const std::string> args) const = 0;
};

/// Built-in specs: "register" (init 0; write/read), "fifo-queue" (enq/deq,
/// deq on empty returns "empty") and "stack" (push/pop, pop on empty returns
/// "empty"). Returns nullptr for unknown names.
std::shared_ptr<const SequentialSpec> builtin_spec(std::string_view name);
std::vector<std::string> builtin_spec_names();

/// Maps object ids to the spec instance that governs them.
class SpecRegistry {
 public:
  void bind(std::string obj, std::shared_ptr<const SequentialSpec> spec);
  /// Binds a built-in spec by name; throws UnknownSpecName.
  void bind_builtin(std::string obj, std::string_view spec_name);

  bool bound(const std::string& obj) const;
  /// Throws UnregisteredObject.
  const SequentialSpec& spec_for(const std::string& obj) const;

  /// obj -> spec name, e.g. for serialization.
  std::map<std::string, std::string> names() const;

  static SpecRegistry from_names(const std::map<std::string, std::string>& names);

 private:
  std::map<std::string, std::shared_ptr<const SequentialSpec>> by_object_;
};

/// Advances the spec state by one completed call. Returns the successor
/// state, or nullopt when the call's recorded results differ from the ones
/// the spec produces.
std::optional<SpecState> step(const SequentialSpec& spec,
                              const SpecState& state, const MethodCall& call);

/// True when the sequential complete history is, object by object, a run of
/// the registered specs. Throws NotSequential / NotComplete /
/// UnregisteredObject when the preconditions fail.
bool is_legal(const History& sequential, const SpecRegistry& registry);

/// Reversible encoding of a value list into one state string.
std::string encode_values(std::span<const std::string> values);
std::vector<std::string> decode_values(std::string_view encoded);

}  // namespace lincert
