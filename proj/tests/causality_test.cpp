#include "lincert/causality.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "support/histgen.hpp"
#include "support/oracles.hpp"

using namespace lincert;
using testsupport::TestRng;

namespace {

Event inv(int proc, int seq, std::string op = "put") {
  return make_invocation(proc, seq, "o", std::move(op), {});
}

Event resp(int proc, int seq, std::string op = "put") {
  return make_response(proc, seq, "o", std::move(op), {});
}

std::size_t count_ordered_pairs(const CausalityOrder& order) {
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (order.precedes_index(a, b)) ++pairs;
    }
  }
  return pairs;
}

// Message edges that point forward in an existing history order can never
// close a cycle, since every base edge also points forward.
std::vector<MessageEdge> forward_messages(TestRng& rng, const History& h,
                                          std::size_t want) {
  std::vector<const Event*> invs;
  std::vector<const Event*> resps;
  for (const Event& e : h.events()) {
    (e.is_invocation() ? invs : resps).push_back(&e);
  }
  std::vector<MessageEdge> edges;
  for (std::size_t tries = 0; tries < want * 8 && edges.size() < want; ++tries) {
    if (invs.empty() || resps.empty()) break;
    const Event* from = invs[rng.below(invs.size())];
    const Event* to = resps[rng.below(resps.size())];
    if (from->proc == to->proc) continue;
    if (*h.position_of(from->id()) >= *h.position_of(to->id())) continue;
    edges.push_back({from->id(), to->id()});
  }
  return edges;
}

}  // namespace

TEST_SUITE_BEGIN("causality");

TEST_CASE("one process with two calls closes to six pairs") {
  // Chain of 4 events; the closure of a 4-chain relates every earlier event
  // to every later one.
  CausalityOrder order =
      build_causality({{inv(1, 1), resp(1, 1), inv(1, 2), resp(1, 2)}}, {});
  CHECK(order.size() == 4);
  CHECK(count_ordered_pairs(order) == 6);
  CHECK(order.precedes(EventId{1, 1, EventKind::Invocation},
                       EventId{1, 2, EventKind::Response}));
  CHECK(!order.precedes(EventId{1, 2, EventKind::Response},
                        EventId{1, 1, EventKind::Invocation}));
}

TEST_CASE("independent processes stay unordered") {
  CausalityOrder order = build_causality(
      {{inv(1, 1), resp(1, 1)}, {inv(2, 1), resp(2, 1)}}, {});
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (order.precedes_index(a, b)) {
        CHECK(order.carrier()[a].proc == order.carrier()[b].proc);
      }
    }
  }
}

TEST_CASE("a message edge orders the sender's past before the receiver's future") {
  std::vector<Event> p1 = {inv(1, 1, "send"), resp(1, 1, "send"),
                           inv(1, 2), resp(1, 2)};
  std::vector<Event> p2 = {inv(2, 1), resp(2, 1),
                           inv(2, 2, "recv"), resp(2, 2, "recv")};
  MessageEdge edge{EventId{1, 1, EventKind::Invocation},
                   EventId{2, 2, EventKind::Response}};
  CausalityOrder order = build_causality({p1, p2}, {edge});

  // Everything up to the send invocation precedes the receive response and
  // whatever follows it.
  CHECK(order.precedes(EventId{1, 1, EventKind::Invocation},
                       EventId{2, 2, EventKind::Response}));
  CHECK(!order.precedes(EventId{1, 1, EventKind::Response},
                        EventId{2, 2, EventKind::Response}));
  CHECK(!order.precedes(EventId{2, 1, EventKind::Invocation},
                        EventId{1, 2, EventKind::Response}));

  // The full relation equals brute-force reachability over the base edges.
  auto reach = testsupport::closure_oracle(order.size(), order.base_edges());
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      CHECK(order.precedes_index(a, b) == reach[a][b]);
    }
  }
}

TEST_CASE("closure agrees with brute-force reachability on random inputs") {
  TestRng rng(301);
  for (int round = 0; round < 200; ++round) {
    testsupport::HistGenOptions options;
    options.procs = 4;
    options.max_events = 20;
    History h = testsupport::random_history(rng, options);
    auto messages = forward_messages(rng, h, rng.below(6));
    CausalityOrder order = causality_of(h, messages);
    auto reach = testsupport::closure_oracle(order.size(), order.base_edges());
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = 0; b < order.size(); ++b) {
        CHECK(order.precedes_index(a, b) == reach[a][b]);
      }
    }
  }
}

TEST_CASE("message endpoints must exist with the right kinds") {
  std::vector<Event> p1 = {inv(1, 1), resp(1, 1)};
  std::vector<Event> p2 = {inv(2, 1), resp(2, 1)};

  CHECK_THROWS_AS(build_causality({p1, p2}, {{EventId{9, 9, EventKind::Invocation},
                                              EventId{2, 1, EventKind::Response}}}),
                  DanglingMessageEndpoint);
  CHECK_THROWS_AS(build_causality({p1, p2}, {{EventId{1, 1, EventKind::Invocation},
                                              EventId{9, 9, EventKind::Response}}}),
                  DanglingMessageEndpoint);
  // Endpoint kinds are fixed: source invocation, target response.
  CHECK_THROWS_AS(build_causality({p1, p2}, {{EventId{1, 1, EventKind::Response},
                                              EventId{2, 1, EventKind::Response}}}),
                  DanglingMessageEndpoint);
  CHECK_THROWS_AS(build_causality({p1, p2}, {{EventId{1, 1, EventKind::Invocation},
                                              EventId{2, 1, EventKind::Invocation}}}),
                  DanglingMessageEndpoint);
}

TEST_CASE("chain preconditions are enforced") {
  CHECK_THROWS_AS(build_causality({{inv(1, 1), inv(2, 1)}}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_causality({{inv(1, 1)}, {inv(1, 2)}}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_causality({{inv(1, 1), inv(1, 1)}}, {}),
                  std::invalid_argument);
}

TEST_CASE("cyclic message patterns are rejected with a usable witness") {
  // Two messages across two processes, each sent after the other's receipt
  // would have to happen: a -> (later) b and b -> (earlier) a.
  std::vector<Event> p1 = {inv(1, 1), resp(1, 1), inv(1, 2), resp(1, 2)};
  std::vector<Event> p2 = {inv(2, 1), resp(2, 1), inv(2, 2), resp(2, 2)};
  std::vector<MessageEdge> messages = {
      {EventId{1, 2, EventKind::Invocation}, EventId{2, 1, EventKind::Response}},
      {EventId{2, 2, EventKind::Invocation}, EventId{1, 1, EventKind::Response}},
  };
  try {
    build_causality({p1, p2}, messages);
    FAIL("expected CyclicCausality");
  } catch (const CyclicCausality& e) {
    REQUIRE(e.cycle.size() >= 2);
    // Rebuild the base edges independently and walk the witness.
    std::set<std::pair<EventId, EventId>> base;
    auto chain_edges = [&](const std::vector<Event>& chain) {
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        base.emplace(chain[i].id(), chain[i + 1].id());
      }
    };
    chain_edges(p1);
    chain_edges(p2);
    base.emplace(EventId{1, 1, EventKind::Invocation}, EventId{1, 1, EventKind::Response});
    base.emplace(EventId{1, 2, EventKind::Invocation}, EventId{1, 2, EventKind::Response});
    base.emplace(EventId{2, 1, EventKind::Invocation}, EventId{2, 1, EventKind::Response});
    base.emplace(EventId{2, 2, EventKind::Invocation}, EventId{2, 2, EventKind::Response});
    for (const MessageEdge& m : messages) base.emplace(m.from, m.to);
    for (std::size_t i = 0; i < e.cycle.size(); ++i) {
      EventId from = e.cycle[i];
      EventId to = e.cycle[(i + 1) % e.cycle.size()];
      CHECK(base.contains({from, to}));
    }
  }
}

TEST_CASE("extending the empty order yields the empty sequence") {
  CausalityOrder order = build_causality({}, {});
  TotalOrderWitness witness = extend_to_well_order(order);
  CHECK(witness.sequence.empty());
  CHECK(verify_extension(order, witness));
}

TEST_CASE("a single chain extends to itself") {
  std::vector<Event> chain = {inv(1, 1), resp(1, 1), inv(1, 2), resp(1, 2)};
  CausalityOrder order = build_causality({chain}, {});
  TotalOrderWitness witness = extend_to_well_order(order);
  CHECK(witness.sequence == chain);
}

TEST_CASE("cross-chain edges survive into the extension") {
  std::vector<Event> p1 = {inv(1, 1), resp(1, 1)};
  std::vector<Event> p2 = {inv(2, 1), resp(2, 1)};
  MessageEdge edge{EventId{1, 1, EventKind::Invocation},
                   EventId{2, 1, EventKind::Response}};
  CausalityOrder order = build_causality({p1, p2}, {edge});
  TotalOrderWitness witness = extend_to_well_order(order);
  REQUIRE(verify_extension(order, witness));

  auto at = [&](const EventId& id) {
    for (std::size_t i = 0; i < witness.sequence.size(); ++i) {
      if (witness.sequence[i].id() == id) return i;
    }
    FAIL("event missing from witness");
    return std::size_t{0};
  };
  CHECK(at(EventId{1, 1, EventKind::Invocation}) < at(EventId{1, 1, EventKind::Response}));
  CHECK(at(EventId{2, 1, EventKind::Invocation}) < at(EventId{2, 1, EventKind::Response}));
  CHECK(at(EventId{1, 1, EventKind::Invocation}) < at(EventId{2, 1, EventKind::Response}));

  // Determinism: rebuilding gives the identical sequence.
  CHECK(extend_to_well_order(build_causality({p1, p2}, {edge})).sequence ==
        witness.sequence);
}

TEST_CASE("random acyclic orders extend, preserve chains and well-order subsets") {
  TestRng rng(302);
  for (int round = 0; round < 200; ++round) {
    testsupport::HistGenOptions options;
    options.procs = 1 + static_cast<int>(rng.below(5));
    options.max_events = 1 + static_cast<int>(rng.below(30));
    History h = testsupport::random_history(rng, options);
    auto messages = forward_messages(rng, h, rng.below(8));
    CausalityOrder order = causality_of(h, messages);
    TotalOrderWitness witness = extend_to_well_order(order);
    CHECK(verify_extension(order, witness));

    // Per-process restriction equals the input chain.
    for (int p : h.processes()) {
      std::vector<Event> restricted;
      for (const Event& e : witness.sequence) {
        if (e.proc == p) restricted.push_back(e);
      }
      CHECK(restricted == h.project_process(p).events());
    }

    // Finite well order: random nonempty subsets have a unique least
    // element under the witness order (exactly one member that no other
    // member precedes).
    if (!witness.sequence.empty()) {
      std::unordered_map<EventId, std::size_t, EventIdHash> rank;
      for (std::size_t i = 0; i < witness.sequence.size(); ++i) {
        rank.emplace(witness.sequence[i].id(), i);
      }
      for (int sample = 0; sample < 5; ++sample) {
        std::set<std::size_t> subset;
        std::size_t want = 1 + rng.below(witness.sequence.size());
        while (subset.size() < want) {
          subset.insert(rng.below(witness.sequence.size()));
        }
        int minima = 0;
        for (std::size_t candidate : subset) {
          bool least = true;
          for (std::size_t other : subset) {
            if (other != candidate &&
                rank.at(witness.sequence[other].id()) <
                    rank.at(witness.sequence[candidate].id())) {
              least = false;
              break;
            }
          }
          if (least) ++minima;
        }
        CHECK(minima == 1);
      }
    }
  }
}

TEST_CASE("verify_extension rejects misordered or mismatched witnesses") {
  std::vector<Event> p1 = {inv(1, 1), resp(1, 1)};
  std::vector<Event> p2 = {inv(2, 1), resp(2, 1)};
  MessageEdge edge{EventId{1, 1, EventKind::Invocation},
                   EventId{2, 1, EventKind::Response}};
  CausalityOrder order = build_causality({p1, p2}, {edge});
  TotalOrderWitness witness = extend_to_well_order(order);

  TotalOrderWitness flipped = witness;
  auto inv_pos = std::find_if(flipped.sequence.begin(), flipped.sequence.end(),
                              [](const Event& e) {
                                return e.id() == EventId{1, 1, EventKind::Invocation};
                              });
  auto resp_pos = std::find_if(flipped.sequence.begin(), flipped.sequence.end(),
                               [](const Event& e) {
                                 return e.id() == EventId{1, 1, EventKind::Response};
                               });
  std::iter_swap(inv_pos, resp_pos);
  CHECK(!verify_extension(order, flipped));

  TotalOrderWitness missing = witness;
  missing.sequence.pop_back();
  CHECK_THROWS_AS((void)verify_extension(order, missing), CarrierMismatch);

  TotalOrderWitness doubled = witness;
  doubled.sequence.back() = doubled.sequence.front();
  CHECK_THROWS_AS((void)verify_extension(order, doubled), CarrierMismatch);

  CHECK_THROWS_AS((void)order.precedes(EventId{9, 9, EventKind::Invocation},
                                       EventId{1, 1, EventKind::Invocation}),
                  CarrierMismatch);
}

TEST_CASE("large carriers answer reachability without materializing the closure") {
  // Two chains just past the materialization cutoff.
  std::vector<Event> p1, p2;
  int calls = static_cast<int>(kClosureMaterializeLimit / 2) + 10;
  for (int c = 1; c <= calls / 2; ++c) {
    p1.push_back(inv(1, c));
    p1.push_back(resp(1, c));
    p2.push_back(inv(2, c));
    p2.push_back(resp(2, c));
  }
  MessageEdge edge{EventId{1, 1, EventKind::Invocation},
                   EventId{2, static_cast<int>(calls / 2), EventKind::Response}};
  CausalityOrder order = build_causality({p1, p2}, {edge});
  REQUIRE(order.size() > kClosureMaterializeLimit);

  CHECK(order.precedes(EventId{1, 1, EventKind::Invocation},
                       EventId{1, 5, EventKind::Response}));
  CHECK(order.precedes(EventId{1, 1, EventKind::Invocation},
                       EventId{2, static_cast<int>(calls / 2), EventKind::Response}));
  CHECK(!order.precedes(EventId{2, 1, EventKind::Invocation},
                        EventId{1, 5, EventKind::Response}));
  CHECK(verify_extension(order, extend_to_well_order(order)));
}

TEST_SUITE_END();
