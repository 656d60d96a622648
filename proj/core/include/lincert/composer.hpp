#pragma once

#include <map>
#include <string>
#include <string_view>

#include "lincert/checker.hpp"

namespace lincert {

/// Per-object certificates for one history: by_object[o] must prove
/// original.project_object(o) linearizable, and every object of the
/// original history must be present.
struct ObjectCertificateSet {
  History original;
  std::map<std::string, LinearizationCertificate> by_object;
};

/// Merges per-object certificates into one certificate for the whole
/// history. Repeatedly emits, among the least unconsumed call of every
/// per-object linearization, the one whose invocation comes first in the
/// original history; the merged extension appends all synthesized responses
/// after the original events, sorted by object id, then process, then call
/// number. Re-validates its inputs; throws InvalidObjectCertificate.
LinearizationCertificate compose(const ObjectCertificateSet& certificates,
                                 const SpecRegistry& registry);

/// Object-at-a-time linearizability check: linearizes every object
/// subhistory and composes the results. On failure, witness_object names
/// the first object (in id order) whose subhistory is not linearizable.
CheckResult check_compositional(const History& history,
                                const SpecRegistry& registry,
                                const CheckOptions& options = {});

/// Restricts a certificate for `history` to one object, yielding a
/// certificate for history.project_object(obj). Re-validates the input
/// first; throws InvalidCertificate.
LinearizationCertificate project_certificate(
    const History& history, const LinearizationCertificate& certificate,
    const SpecRegistry& registry, std::string_view obj);

}  // namespace lincert
