#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lincert/event.hpp"
#include "lincert/errors.hpp"
#include "lincert/history.hpp"

namespace lincert {

/// A cross-process edge: the invocation that sent a message causes the
/// response that received it.
struct MessageEdge {
  EventId from;  // invocation event of the sending call
  EventId to;    // response event of the receiving call
};

/// The causality partial order over a finite event set. Generated from
/// three kinds of base edges and closed under transitivity:
///   (a) an invocation causes its matching response,
///   (b) each per-process chain orders its own events,
///   (c) every message edge orders sender invocation before receiver
///       response.
/// Construction rejects cyclic inputs, so instances are always strict
/// partial orders.
class CausalityOrder {
 public:
  const std::vector<Event>& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }

  /// Chains as index lists into carrier(), one per process, in input order.
  const std::vector<std::vector<std::size_t>>& chains() const { return chains_; }
  /// Message edges as carrier index pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& message_edges() const {
    return message_edges_;
  }
  /// All generating edges (chain adjacency, invocation to matching
  /// response, messages) as carrier index pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& base_edges() const {
    return base_edges_;
  }

  std::optional<std::size_t> index_of(const EventId& id) const;

  /// Transitive-closure query: does a strictly cause b?
  bool precedes(const EventId& a, const EventId& b) const;
  bool precedes_index(std::size_t a, std::size_t b) const;

  /// (process id, position within its chain); the deterministic tie-break
  /// key used when extending to a total order.
  std::pair<int, std::size_t> chain_key(std::size_t index) const;

 private:
  friend CausalityOrder build_causality(
      const std::vector<std::vector<Event>>& chains,
      const std::vector<MessageEdge>& messages);

  std::vector<Event> carrier_;
  std::vector<std::vector<std::size_t>> chains_;
  std::vector<std::pair<std::size_t, std::size_t>> message_edges_;
  std::vector<std::pair<std::size_t, std::size_t>> base_edges_;
  std::vector<std::vector<std::size_t>> succ_;  // adjacency over base edges
  std::unordered_map<EventId, std::size_t, EventIdHash> index_;
  std::vector<std::pair<int, std::size_t>> keys_;

  // Reachability rows, materialized only for small carriers; otherwise
  // precedes() answers by on-demand search.
  std::vector<std::vector<std::uint64_t>> closure_;

  void finish_build();
};

/// Carrier size up to which the transitive closure is materialized.
inline constexpr std::size_t kClosureMaterializeLimit = 1000;

/// Builds the causality order from per-process chains and message edges.
/// Each chain must hold events of a single process, distinct chains must
/// name distinct processes, and event identities must be unique. Message
/// endpoints must exist, the source being an invocation and the target a
/// response. Throws CyclicCausality (with a witness cycle) or
/// DanglingMessageEndpoint.
CausalityOrder build_causality(const std::vector<std::vector<Event>>& chains,
                               const std::vector<MessageEdge>& messages);

/// Causality order of a history: chains are its process subhistories.
CausalityOrder causality_of(const History& history,
                            const std::vector<MessageEdge>& messages = {});

/// A claimed well ordering of a carrier: the sequence position is the order.
struct TotalOrderWitness {
  std::vector<Event> sequence;
};

/// Extends the partial order to a total order over the same carrier,
/// deterministically: at every step the ready event with the least
/// (process id, chain position) key is emitted next.
TotalOrderWitness extend_to_well_order(const CausalityOrder& order);

/// True when the witness ranges exactly over the carrier and places a
/// before b for every ordered pair a -> b of the relation. Throws
/// CarrierMismatch when the witness is not a permutation of the carrier.
bool verify_extension(const CausalityOrder& order,
                      const TotalOrderWitness& witness);

}  // namespace lincert
