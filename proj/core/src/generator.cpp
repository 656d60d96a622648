#include "lincert/generator.hpp"

#include <random>

namespace lincert {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::StaleRead:
      return "stale-read";
    case ViolationKind::ReorderDequeue:
      return "reorder-dequeue";
    case ViolationKind::LostUpdate:
      return "lost-update";
  }
  return "unknown";
}

std::optional<ViolationKind> violation_kind_from_name(std::string_view name) {
  if (name == "stale-read") return ViolationKind::StaleRead;
  if (name == "reorder-dequeue") return ViolationKind::ReorderDequeue;
  if (name == "lost-update") return ViolationKind::LostUpdate;
  return std::nullopt;
}

namespace {

// mt19937_64 output is pinned by the standard; the distribution helpers
// below avoid std::uniform_*_distribution, whose mapping is not, so
// generated traces are identical across platforms.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  std::uint64_t pick(std::uint64_t n) { return engine() % n; }
  double unit() { return (engine() >> 11) * (1.0 / 9007199254740992.0); }
};

struct ObjectSlot {
  std::string id;
  std::string spec;   // built-in name
  SpecState state;
};

class Generation {
 public:
  explicit Generation(const GenConfig& config)
      : cfg_(config), rng_(config.seed) {
    if (cfg_.procs < 1) throw InvalidGenConfig("procs must be at least 1");
    if (cfg_.max_events < 0) throw InvalidGenConfig("max_events must be >= 0");
    if (cfg_.objects.empty()) {
      throw InvalidGenConfig("at least one object is required");
    }
    if (!(cfg_.pending_prob >= 0.0 && cfg_.pending_prob <= 1.0)) {
      throw InvalidGenConfig("pending_prob must be within [0,1]");
    }
    if (cfg_.violation &&
        !(cfg_.violation->rate >= 0.0 && cfg_.violation->rate <= 1.0)) {
      throw InvalidGenConfig("violation rate must be within [0,1]");
    }
    for (const auto& [obj, spec_name] : cfg_.objects) {
      auto spec = builtin_spec(spec_name);
      if (!spec) throw UnknownSpecName(spec_name);
      objects_.push_back({obj, spec_name, spec->initial()});
    }
    next_seq_.assign(static_cast<std::size_t>(cfg_.procs) + 1, 1);
    in_flight_.assign(static_cast<std::size_t>(cfg_.procs) + 1, std::nullopt);
    stuck_.assign(static_cast<std::size_t>(cfg_.procs) + 1, false);
  }

  GeneratedTrace run() {
    if (cfg_.violation) plant_scaffold();
    main_loop();
    wrap_up();

    GeneratedTrace out;
    out.trace.records = std::move(records_);
    out.registry = cfg_.objects;
    out.violation_applied = violation_applied_;
    return out;
  }

 private:
  struct InFlight {
    std::size_t obj;
    std::string op;
    std::vector<std::string> args;
    bool never_responds = false;
  };

  std::string fresh_value() { return "v" + std::to_string(value_counter_++); }

  std::size_t events() const { return records_.size(); }

  std::size_t owed_responses() const {
    std::size_t owed = 0;
    for (const auto& f : in_flight_) {
      if (f && !f->never_responds) ++owed;
    }
    return owed;
  }

  void emit_inv(int proc, std::size_t obj, std::string op,
                std::vector<std::string> args) {
    records_.push_back(TraceRecord::for_event(
        make_invocation(proc, next_seq_[proc], objects_[obj].id, op, args)));
    in_flight_[proc] = InFlight{obj, std::move(op), std::move(args)};
  }

  // The call takes effect now: its results come from the object's current
  // state, which is what keeps clean traces linearizable.
  void emit_resp(int proc) {
    InFlight& f = *in_flight_[proc];
    auto spec = builtin_spec(objects_[f.obj].spec);
    auto outcome = spec->apply(objects_[f.obj].state, f.op, f.args);
    objects_[f.obj].state = outcome->state;
    records_.push_back(TraceRecord::for_event(
        make_response(proc, next_seq_[proc], objects_[f.obj].id, f.op,
                      outcome->results)));
    in_flight_[proc] = std::nullopt;
    ++next_seq_[proc];
  }

  void start_random_call(int proc) {
    std::size_t obj = rng_.pick(objects_.size());
    const std::string& spec = objects_[obj].spec;
    std::string op;
    std::vector<std::string> args;
    bool writer = rng_.pick(2) == 0;
    if (spec == "register") {
      op = writer ? "write" : "read";
      if (writer) args.push_back(fresh_value());
    } else if (spec == "fifo-queue") {
      op = writer ? "enq" : "deq";
      if (writer) args.push_back(fresh_value());
    } else {
      op = writer ? "push" : "pop";
      if (writer) args.push_back(fresh_value());
    }
    emit_inv(proc, obj, std::move(op), std::move(args));
    if (rng_.unit() < cfg_.pending_prob) {
      in_flight_[proc]->never_responds = true;
      stuck_[proc] = true;
    }
  }

  // Finds the first object with the wanted spec; the scaffold needs one.
  std::size_t require_object(const std::string& spec_name) {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (objects_[i].spec == spec_name) return i;
    }
    throw InvalidGenConfig(std::string(to_string(cfg_.violation->kind)) +
                           " injection needs an object with spec '" +
                           spec_name + "'");
  }

  // Emits a short sequential prefix on processes 1 and 2 that makes one
  // response provably unexplainable once rewritten. Every later call begins
  // after the prefix, so it cannot be linearized before the rewritten read,
  // and written values are globally unique.
  void plant_scaffold() {
    const ViolationConfig& v = *cfg_.violation;
    if (cfg_.procs < 2) {
      throw InvalidGenConfig("violation injection needs at least 2 processes");
    }
    int need = v.kind == ViolationKind::LostUpdate ? 4 : 6;
    if (cfg_.max_events < need) {
      throw InvalidGenConfig("violation injection needs max_events >= " +
                             std::to_string(need));
    }
    bool apply = rng_.unit() < v.rate;

    auto scripted_call = [&](int proc, std::size_t obj, const std::string& op,
                             std::vector<std::string> args) {
      emit_inv(proc, obj, op, args);
      emit_resp(proc);
    };

    switch (v.kind) {
      case ViolationKind::StaleRead: {
        std::size_t reg = require_object("register");
        std::string old_value = fresh_value();
        scripted_call(1, reg, "write", {old_value});
        scripted_call(1, reg, "write", {fresh_value()});
        scripted_call(2, reg, "read", {});
        if (apply) records_.back().event.payload = {old_value};
        break;
      }
      case ViolationKind::LostUpdate: {
        std::size_t reg = require_object("register");
        std::string before = objects_[reg].state;
        scripted_call(1, reg, "write", {fresh_value()});
        scripted_call(2, reg, "read", {});
        if (apply) records_.back().event.payload = {before};
        break;
      }
      case ViolationKind::ReorderDequeue: {
        std::size_t q = require_object("fifo-queue");
        scripted_call(1, q, "enq", {fresh_value()});
        std::string second = fresh_value();
        scripted_call(1, q, "enq", {second});
        scripted_call(2, q, "deq", {});
        if (apply) records_.back().event.payload = {second};
        break;
      }
    }
    violation_applied_ = apply;
    // The corrupted object's state still reflects the uncorrupted run,
    // which is fine: later calls only deepen the contradiction.
  }

  void main_loop() {
    std::size_t max = static_cast<std::size_t>(cfg_.max_events);
    while (events() < max) {
      std::vector<int> can_respond;
      std::vector<int> can_invoke;
      for (int p = 1; p <= cfg_.procs; ++p) {
        if (in_flight_[p]) {
          if (!in_flight_[p]->never_responds) can_respond.push_back(p);
        } else if (!stuck_[p] && events() + 2 + owed_responses() <= max) {
          can_invoke.push_back(p);
        }
      }
      std::size_t total = can_respond.size() + can_invoke.size();
      if (total == 0) break;
      std::size_t pickd = rng_.pick(total);
      if (pickd < can_respond.size()) {
        emit_resp(can_respond[pickd]);
      } else {
        start_random_call(can_invoke[pickd - can_respond.size()]);
      }
    }
  }

  void wrap_up() {
    for (int p = 1; p <= cfg_.procs; ++p) {
      if (in_flight_[p] && !in_flight_[p]->never_responds) emit_resp(p);
    }
  }

  GenConfig cfg_;
  Rng rng_;
  std::vector<ObjectSlot> objects_;
  std::vector<int> next_seq_;
  std::vector<std::optional<InFlight>> in_flight_;
  std::vector<bool> stuck_;
  std::vector<TraceRecord> records_;
  int value_counter_ = 1;
  bool violation_applied_ = false;
};

}  // namespace

GeneratedTrace generate_trace(const GenConfig& config) {
  return Generation(config).run();
}

}  // namespace lincert
