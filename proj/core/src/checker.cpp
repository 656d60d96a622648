#include "lincert/checker.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace lincert {

const char* to_string(L3Mode mode) {
  return mode == L3Mode::Strengthened ? "strengthened" : "classic";
}

std::optional<L3Mode> l3_mode_from_name(std::string_view name) {
  if (name == "strengthened") return L3Mode::Strengthened;
  if (name == "classic") return L3Mode::Classic;
  return std::nullopt;
}

namespace {

constexpr std::size_t kNoPosition = SIZE_MAX;

// One call the search may schedule. resp_pos is its response's position in
// the original history, or kNoPosition when the response will be
// synthesized; such calls end after everything else, so they precede
// nothing.
struct SearchCall {
  MethodCall call;
  std::size_t inv_pos = 0;
  std::size_t resp_pos = kNoPosition;
  std::size_t obj_index = 0;
  bool synthesized = false;
};

struct AppliedMask {
  std::vector<std::uint64_t> words;
  explicit AppliedMask(std::size_t n) : words((n + 63) / 64, 0) {}
  bool test(std::size_t i) const {
    return (words[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void clear(std::size_t i) { words[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
};

// The depth-first search for one fixed completion choice: schedule every
// call exactly once, never scheduling a call while an unscheduled one has
// already finished before it began, and keep the per-object spec runs
// legal. Visited (scheduled set, spec states) configurations are pruned;
// the next state of a configuration depends on nothing else.
class Search {
 public:
  Search(const std::vector<SearchCall>& calls,
         const std::vector<const SequentialSpec*>& specs,
         std::vector<SpecState> states, std::uint64_t budget,
         std::uint64_t& explored)
      : calls_(calls),
        specs_(specs),
        states_(std::move(states)),
        budget_(budget),
        explored_(explored),
        applied_(calls.size()) {}

  // On success returns the schedule as (call index, response payload).
  std::optional<std::vector<std::pair<std::size_t, std::vector<std::string>>>>
  run() {
    if (dfs()) return schedule_;
    return std::nullopt;
  }

 private:
  bool minimal(std::size_t j) const {
    for (std::size_t i = 0; i < calls_.size(); ++i) {
      if (i == j || applied_.test(i)) continue;
      if (calls_[i].resp_pos < calls_[j].inv_pos) return false;
    }
    return true;
  }

  std::string memo_key() const {
    std::string key;
    key.reserve(applied_.words.size() * 8 + states_.size() * 8);
    for (std::uint64_t w : applied_.words) {
      for (int b = 0; b < 8; ++b) key += static_cast<char>((w >> (8 * b)) & 0xff);
    }
    for (const SpecState& s : states_) {
      key += '\x1e';
      key += s;
    }
    return key;
  }

  bool dfs() {
    if (++explored_ > budget_) throw BudgetExceeded(budget_);
    if (schedule_.size() == calls_.size()) return true;
    if (!seen_.insert(memo_key()).second) return false;

    for (std::size_t j = 0; j < calls_.size(); ++j) {
      if (applied_.test(j) || !minimal(j)) continue;
      const SearchCall& c = calls_[j];
      auto outcome = specs_[c.obj_index]->apply(states_[c.obj_index],
                                                c.call.invocation.op,
                                                c.call.invocation.payload);
      if (!outcome) continue;
      if (!c.synthesized && outcome->results != c.call.response->payload) {
        continue;
      }
      SpecState saved = std::exchange(states_[c.obj_index], outcome->state);
      applied_.set(j);
      schedule_.emplace_back(j, outcome->results);
      if (dfs()) return true;
      schedule_.pop_back();
      applied_.clear(j);
      states_[c.obj_index] = std::move(saved);
    }
    return false;
  }

  const std::vector<SearchCall>& calls_;
  const std::vector<const SequentialSpec*>& specs_;
  std::vector<SpecState> states_;
  std::uint64_t budget_;
  std::uint64_t& explored_;
  AppliedMask applied_;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> schedule_;
  std::unordered_set<std::string> seen_;
};

LinearizationCertificate build_certificate(
    const History& history, const std::vector<SearchCall>& calls,
    const std::vector<std::pair<std::size_t, std::vector<std::string>>>& schedule,
    L3Mode mode) {
  std::vector<MethodCall> ordered;
  std::vector<Event> appended;
  std::vector<CallId> completed;
  for (const auto& [idx, results] : schedule) {
    const SearchCall& c = calls[idx];
    MethodCall done = c.call;
    if (c.synthesized) {
      done.response = make_response(done.invocation.proc,
                                    done.invocation.call_seq,
                                    done.invocation.obj,
                                    done.invocation.op, results);
      appended.push_back(*done.response);
      completed.push_back(done.id());
    }
    ordered.push_back(std::move(done));
  }
  std::sort(appended.begin(), appended.end(), [](const Event& a, const Event& b) {
    return std::tie(a.obj, a.proc, a.call_seq) < std::tie(b.obj, b.proc, b.call_seq);
  });
  std::sort(completed.begin(), completed.end());

  std::vector<Event> extended = history.events();
  extended.insert(extended.end(), appended.begin(), appended.end());

  LinearizationCertificate cert;
  cert.extension = History::from_valid(std::move(extended), history.meta());
  cert.linearization = history_from_calls(ordered, history.meta());
  cert.mode = mode;
  cert.completed_pending = std::move(completed);
  return cert;
}

#ifndef NDEBUG
// The strengthened premise of a canonical certificate covers the classic
// one on the linearized calls; cheap enough to re-check per instance here.
bool premise_subset_holds(const History& history,
                          const LinearizationCertificate& cert) {
  History cext = cert.extension.complete();
  auto s_calls = cert.linearization.calls();
  for (const MethodCall& a : s_calls) {
    for (const MethodCall& b : s_calls) {
      if (a.id() == b.id()) continue;
      bool classic = history.contains({a.id().proc, a.id().call_seq, EventKind::Response}) &&
                     history.call_precedes(a.id(), b.id());
      if (classic && !cext.call_precedes(a.id(), b.id())) return false;
    }
  }
  return true;
}
#endif

}  // namespace

CheckResult linearize(const History& history, const SpecRegistry& registry,
                      const CheckOptions& options) {
  std::vector<std::string> objects = history.objects();
  std::vector<const SequentialSpec*> specs;
  std::unordered_map<std::string, std::size_t> obj_index;
  std::vector<SpecState> initial_states;
  for (const std::string& obj : objects) {
    obj_index.emplace(obj, specs.size());
    specs.push_back(&registry.spec_for(obj));
    initial_states.push_back(specs.back()->initial());
  }

  std::vector<SearchCall> base;
  std::vector<SearchCall> pending;
  for (const MethodCall& call : history.calls()) {
    SearchCall sc;
    sc.inv_pos = *history.position_of(call.invocation.id());
    sc.obj_index = obj_index.at(call.obj());
    if (call.complete()) {
      sc.resp_pos = *history.position_of(call.response->id());
      sc.call = call;
      base.push_back(std::move(sc));
    } else {
      sc.synthesized = true;
      sc.call = call;
      pending.push_back(std::move(sc));
    }
  }

  CheckResult result;

  // Completion choices: which pending calls take effect. Smallest subsets
  // first; each chosen call gets the response the spec run dictates.
  std::size_t p = pending.size();
  for (std::size_t k = 0; k <= p; ++k) {
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
      std::vector<SearchCall> calls = base;
      for (std::size_t i : comb) calls.push_back(pending[i]);
      std::sort(calls.begin(), calls.end(),
                [](const SearchCall& a, const SearchCall& b) {
                  return a.inv_pos < b.inv_pos;
                });

      ++result.stats.completions_tried;
      Search search(calls, specs, initial_states, options.budget,
                    result.stats.states_explored);
      if (auto schedule = search.run()) {
        auto cert = build_certificate(history, calls, *schedule, options.mode);
        assert(verify_certificate(history, cert, registry).ok);
        assert(premise_subset_holds(history, cert));
        result.certificate = std::move(cert);
        return result;
      }

      // next k-combination of {0..p-1} in lexicographic order
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == p - k + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return result;
}

bool is_linearizable(const History& history, const SpecRegistry& registry,
                     const CheckOptions& options) {
  return linearize(history, registry, options).linearizable();
}

namespace {

struct CallPositions {
  std::unordered_map<CallId, std::size_t, CallIdHash> inv;
  std::unordered_map<CallId, std::size_t, CallIdHash> resp;
};

CallPositions positions_of(const History& h) {
  CallPositions out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Event& e = h.at(i);
    (e.is_invocation() ? out.inv : out.resp).emplace(e.call(), i);
  }
  return out;
}

}  // namespace

VerifyReport verify_certificate(const History& history,
                                const LinearizationCertificate& certificate,
                                const SpecRegistry& registry) {
  const History& ext = certificate.extension;
  const History& lin = certificate.linearization;

  // L1: the extension contains the history and adds only responses.
  if (!history.is_subhistory_of(ext)) {
    return VerifyReport::fail(
        "L1", "the original history is not a subhistory of the extension");
  }
  History added = ext.difference(history);
  for (const Event& e : added.events()) {
    if (e.is_invocation()) {
      return VerifyReport::fail(
          "L1", "the extension adds invocation event " + to_string(e));
    }
  }

  // L2, equivalence half: same per-process subhistories.
  History cext = ext.complete();
  if (!cext.equivalent_to(lin)) {
    return VerifyReport::fail(
        "L2-equiv",
        "the complete extension and the linearization are not equivalent");
  }

  // L2, legality half.
  if (!lin.is_sequential()) {
    return VerifyReport::fail("L2-legal", "the linearization is not sequential");
  }
  if (!lin.is_complete()) {
    return VerifyReport::fail("L2-legal", "the linearization is not complete");
  }
  if (!is_legal(lin, registry)) {
    return VerifyReport::fail(
        "L2-legal", "the linearization is not a legal run of the specs");
  }

  // L3: precedence in the premise order implies precedence in the
  // linearization. Strengthened draws the premise from the complete
  // extension, classic from the original history.
  const History& premise =
      certificate.mode == L3Mode::Strengthened ? cext : history;
  CallPositions pos = positions_of(premise);

  auto lin_calls = lin.calls();
  std::unordered_map<CallId, std::size_t, CallIdHash> rank;
  for (std::size_t i = 0; i < lin_calls.size(); ++i) {
    rank.emplace(lin_calls[i].id(), i);
  }
  for (const MethodCall& a : lin_calls) {
    auto resp_a = pos.resp.find(a.id());
    if (resp_a == pos.resp.end()) continue;  // precedes nothing
    for (const MethodCall& b : lin_calls) {
      if (a.id() == b.id()) continue;
      auto inv_b = pos.inv.find(b.id());
      if (inv_b == pos.inv.end()) continue;
      if (resp_a->second < inv_b->second &&
          rank.at(a.id()) > rank.at(b.id())) {
        return VerifyReport::fail(
            "L3", "calls (p" + std::to_string(a.id().proc) + ",c" +
                      std::to_string(a.id().call_seq) + ") and (p" +
                      std::to_string(b.id().proc) + ",c" +
                      std::to_string(b.id().call_seq) +
                      ") are linearized against the precedence order");
      }
    }
  }
  return VerifyReport::pass();
}

}  // namespace lincert
