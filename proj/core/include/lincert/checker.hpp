#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lincert/history.hpp"
#include "lincert/spec.hpp"

namespace lincert {

/// Which call pairs the order-preservation condition quantifies over when a
/// certificate is validated. Strengthened uses the order of the complete
/// extension, Classic the order of the original history; both agree on calls
/// that completed in the original history.
enum class L3Mode { Strengthened, Classic };

const char* to_string(L3Mode mode);
std::optional<L3Mode> l3_mode_from_name(std::string_view name);

/// Evidence that a history is linearizable:
///  - extension: the history plus responses appended for the pending calls
///    that were chosen to take effect (sorted by object id, then process,
///    then call number),
///  - linearization: the sequential complete witness history,
///  - completed_pending: exactly the calls that received appended responses.
struct LinearizationCertificate {
  History extension;
  History linearization;
  L3Mode mode = L3Mode::Strengthened;
  std::vector<CallId> completed_pending;
};

struct CheckStats {
  std::uint64_t states_explored = 0;
  std::uint64_t completions_tried = 0;
};

struct CheckOptions {
  L3Mode mode = L3Mode::Strengthened;
  /// Cap on explored search states; past it the check aborts with
  /// BudgetExceeded instead of returning a verdict.
  std::uint64_t budget = 1'000'000;
};

struct CheckResult {
  std::optional<LinearizationCertificate> certificate;
  CheckStats stats;
  /// Set by the compositional checker: first object whose subhistory failed.
  std::optional<std::string> witness_object;
  /// Compositional mode only: verdict per object, in decision order. Objects
  /// after a failing one are never checked and stay absent.
  std::map<std::string, bool> object_verdicts;

  bool linearizable() const { return certificate.has_value(); }
};

/// Searches for a linearization of `history`. Every object must be bound in
/// the registry. Pending calls are either dropped or assigned the response
/// the specs dictate; candidate orders are explored depth first over calls
/// minimal in the remaining precedence order, smallest pending subsets
/// first, with visited (remaining set, spec states) configurations pruned.
/// Throws UnregisteredObject, UnknownOperation, BudgetExceeded.
CheckResult linearize(const History& history, const SpecRegistry& registry,
                      const CheckOptions& options = {});

bool is_linearizable(const History& history, const SpecRegistry& registry,
                     const CheckOptions& options = {});

/// Outcome of re-validating a certificate. When not ok, `violated` names the
/// first failing condition in the fixed order "L1", "L2-equiv", "L2-legal",
/// "L3", and `detail` says what went wrong.
struct VerifyReport {
  bool ok = true;
  std::string violated;
  std::string detail;

  static VerifyReport pass() { return {}; }
  static VerifyReport fail(std::string condition, std::string what) {
    return {false, std::move(condition), std::move(what)};
  }
};

/// Re-derives, without re-running the search, that `certificate` proves
/// `history` linearizable:
///   L1        the extension is a history containing `history` with only
///             response events added,
///   L2-equiv  the complete extension and the linearization are equivalent,
///   L2-legal  the linearization is a legal sequential complete history,
///   L3        the linearization preserves the certificate mode's
///             precedence order on method calls.
VerifyReport verify_certificate(const History& history,
                                const LinearizationCertificate& certificate,
                                const SpecRegistry& registry);

}  // namespace lincert
