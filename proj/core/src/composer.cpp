#include "lincert/composer.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace lincert {

LinearizationCertificate compose(const ObjectCertificateSet& certificates,
                                 const SpecRegistry& registry) {
  const History& original = certificates.original;

  std::vector<std::string> objects = original.objects();
  for (const std::string& obj : objects) {
    auto it = certificates.by_object.find(obj);
    if (it == certificates.by_object.end()) {
      throw InvalidObjectCertificate(obj, "no certificate supplied");
    }
    auto report =
        verify_certificate(original.project_object(obj), it->second, registry);
    if (!report.ok) {
      throw InvalidObjectCertificate(obj, report.violated + ": " + report.detail);
    }
  }
  for (const auto& [obj, cert] : certificates.by_object) {
    (void)cert;
    if (std::find(objects.begin(), objects.end(), obj) == objects.end()) {
      throw InvalidObjectCertificate(obj, "object does not occur in the history");
    }
  }

  L3Mode mode = L3Mode::Strengthened;
  if (!certificates.by_object.empty()) {
    mode = certificates.by_object.begin()->second.mode;
  }

  // Streams of unconsumed calls, one per object, in linearization order.
  struct Stream {
    std::vector<MethodCall> calls;
    std::size_t next = 0;
  };
  std::vector<Stream> streams;
  std::size_t total = 0;
  for (const std::string& obj : objects) {
    Stream s;
    s.calls = certificates.by_object.at(obj).linearization.calls();
    total += s.calls.size();
    streams.push_back(std::move(s));
  }

  // Merge: always take the stream head whose invocation is earliest in the
  // original history. Invocations of linearized calls are never synthesized,
  // so they all carry positions in the original history, and distinct calls
  // occupy distinct positions.
  std::vector<MethodCall> merged;
  merged.reserve(total);
  while (merged.size() < total) {
    std::size_t best = SIZE_MAX;
    std::size_t best_pos = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < streams.size(); ++i) {
      if (streams[i].next >= streams[i].calls.size()) continue;
      const MethodCall& head = streams[i].calls[streams[i].next];
      auto pos = original.position_of(head.invocation.id());
      if (!pos) {
        throw InvalidObjectCertificate(
            objects[i], "linearized call is not part of the history");
      }
      assert(best == SIZE_MAX || *pos != best_pos);
      if (*pos < best_pos) {
        best_pos = *pos;
        best = i;
      }
    }
    merged.push_back(streams[best].calls[streams[best].next]);
    ++streams[best].next;
  }

  // The merged extension appends every per-object synthesized response
  // after the original events. Sorting by (object, process, call) keeps
  // each object group in its per-object appended order.
  std::vector<Event> appended;
  std::vector<CallId> completed;
  for (const std::string& obj : objects) {
    const LinearizationCertificate& cert = certificates.by_object.at(obj);
    History sub = original.project_object(obj);
    History added = cert.extension.difference(sub);
    for (const Event& e : added.events()) {
      appended.push_back(e);
    }
    completed.insert(completed.end(), cert.completed_pending.begin(),
                     cert.completed_pending.end());
  }
  std::sort(appended.begin(), appended.end(), [](const Event& a, const Event& b) {
    return std::tie(a.obj, a.proc, a.call_seq) < std::tie(b.obj, b.proc, b.call_seq);
  });
  std::sort(completed.begin(), completed.end());

  std::vector<Event> extended = original.events();
  extended.insert(extended.end(), appended.begin(), appended.end());

  LinearizationCertificate cert;
  cert.extension = History::from_valid(std::move(extended), original.meta());
  cert.linearization = history_from_calls(merged, original.meta());
  cert.mode = mode;
  cert.completed_pending = std::move(completed);
  return cert;
}

CheckResult check_compositional(const History& history,
                                const SpecRegistry& registry,
                                const CheckOptions& options) {
  ObjectCertificateSet set;
  set.original = history;

  CheckResult result;
  CheckOptions per_object = options;
  for (const std::string& obj : history.objects()) {
    // The budget caps total explored states across all objects.
    CheckResult sub;
    try {
      sub = linearize(history.project_object(obj), registry, per_object);
    } catch (const BudgetExceeded&) {
      throw BudgetExceeded(options.budget);
    }
    result.stats.states_explored += sub.stats.states_explored;
    result.stats.completions_tried += sub.stats.completions_tried;
    if (per_object.budget < sub.stats.states_explored) {
      per_object.budget = 0;
    } else {
      per_object.budget -= sub.stats.states_explored;
    }
    result.object_verdicts.emplace(obj, sub.linearizable());
    if (!sub.linearizable()) {
      result.witness_object = obj;
      return result;
    }
    set.by_object.emplace(obj, std::move(*sub.certificate));
  }
  result.certificate = compose(set, registry);
  return result;
}

LinearizationCertificate project_certificate(
    const History& history, const LinearizationCertificate& certificate,
    const SpecRegistry& registry, std::string_view obj) {
  auto report = verify_certificate(history, certificate, registry);
  if (!report.ok) {
    throw InvalidCertificate("certificate does not verify (" + report.violated +
                             ": " + report.detail + ")");
  }

  LinearizationCertificate out;
  out.extension = certificate.extension.project_object(obj);
  out.linearization = certificate.linearization.project_object(obj);
  out.mode = certificate.mode;
  for (const CallId& id : certificate.completed_pending) {
    auto call = certificate.extension.call(id);
    if (call && call->obj() == obj) out.completed_pending.push_back(id);
  }
  return out;
}

}  // namespace lincert
