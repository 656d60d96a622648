#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lincert/trace.hpp"

namespace lincert {

/// Payload corruptions the generator can plant. Each one rewrites a single
/// response in a deliberately built prefix so that no linearization can
/// explain it:
///   StaleRead       a register read returns an overwritten value,
///   ReorderDequeue  a dequeue returns the later of two ordered enqueues,
///   LostUpdate      a register read returns the value from before a
///                   completed write.
enum class ViolationKind { StaleRead, ReorderDequeue, LostUpdate };

const char* to_string(ViolationKind kind);
std::optional<ViolationKind> violation_kind_from_name(std::string_view name);

struct ViolationConfig {
  ViolationKind kind = ViolationKind::StaleRead;
  /// Probability that the corruption is applied; 1 plants it always.
  double rate = 1.0;
};

struct GenConfig {
  std::uint64_t seed = 0;
  int procs = 2;
  /// Object id -> built-in spec name.
  std::map<std::string, std::string> objects;
  /// Upper bound on emitted events.
  int max_events = 16;
  /// Probability that a call never responds. A process stops issuing calls
  /// once one of its calls is left pending.
  double pending_prob = 0.0;
  std::optional<ViolationConfig> violation;
};

struct GeneratedTrace {
  Trace trace;
  std::map<std::string, std::string> registry;
  bool violation_applied = false;
};

/// Deterministically generates a well-formed trace: same config, same
/// bytes. Without violation injection (or when the corruption is not
/// applied) the trace is linearizable by construction, since every call
/// takes effect exactly when its response is emitted. Throws
/// InvalidGenConfig.
GeneratedTrace generate_trace(const GenConfig& config);

}  // namespace lincert
