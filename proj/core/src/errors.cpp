#include "lincert/errors.hpp"

namespace lincert {

CallNotInHistory::CallNotInHistory(CallId id)
    : Error("call (p" + std::to_string(id.proc) + ",c" +
            std::to_string(id.call_seq) + ") is not in the history"),
      call(id) {}

UnregisteredObject::UnregisteredObject(std::string obj)
    : Error("object '" + obj + "' has no registered spec"),
      object(std::move(obj)) {}

UnknownSpecName::UnknownSpecName(std::string name)
    : Error("unknown spec name '" + name + "'"), spec_name(std::move(name)) {}

UnknownOperation::UnknownOperation(std::string spec, std::string operation)
    : Error("spec '" + spec + "' defines no operation '" + operation + "'"),
      spec_name(std::move(spec)),
      op(std::move(operation)) {}

CyclicCausality::CyclicCausality(std::vector<EventId> witness)
    : Error("causality relation is cyclic"), cycle(std::move(witness)) {}

DanglingMessageEndpoint::DanglingMessageEndpoint(EventId ep)
    : Error("message endpoint " + to_string(ep) +
            " does not name a usable carrier event"),
      endpoint(ep) {}

BudgetExceeded::BudgetExceeded(std::uint64_t lim)
    : Error("search budget of " + std::to_string(lim) + " states exceeded"),
      limit(lim) {}

InvalidObjectCertificate::InvalidObjectCertificate(std::string obj,
                                                   std::string why)
    : Error("certificate for object '" + obj + "' is invalid: " + why),
      object(std::move(obj)) {}

}  // namespace lincert
