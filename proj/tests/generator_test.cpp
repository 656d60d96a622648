#include "lincert/generator.hpp"

#include "doctest.h"
#include "lincert/composer.hpp"

using namespace lincert;

namespace {

GenConfig base_config() {
  GenConfig config;
  config.seed = 1;
  config.procs = 2;
  config.max_events = 8;
  config.objects = {{"q", "fifo-queue"}};
  return config;
}

History must_history(const GeneratedTrace& generated) {
  auto result = history_from_trace(generated.trace, generated.registry);
  REQUIRE(result.ok());
  return result.value();
}

}  // namespace

TEST_SUITE_BEGIN("generator");

TEST_CASE("the same config always yields the same bytes") {
  GenConfig config = base_config();
  config.procs = 3;
  config.max_events = 24;
  config.pending_prob = 0.3;
  config.objects = {{"q", "fifo-queue"}, {"r", "register"}, {"s", "stack"}};
  for (std::uint64_t seed : {0u, 1u, 42u}) {
    config.seed = seed;
    GeneratedTrace a = generate_trace(config);
    GeneratedTrace b = generate_trace(config);
    CHECK(serialize_trace(a.trace) == serialize_trace(b.trace));
    CHECK(a.registry == b.registry);
    CHECK(a.violation_applied == b.violation_applied);
  }
}

TEST_CASE("different seeds explore different schedules") {
  GenConfig config = base_config();
  config.max_events = 16;
  GeneratedTrace a = generate_trace(config);
  config.seed = 2;
  GeneratedTrace b = generate_trace(config);
  CHECK(serialize_trace(a.trace) != serialize_trace(b.trace));
}

TEST_CASE("generated traces are well-formed and within the event bound") {
  GenConfig config = base_config();
  config.procs = 4;
  config.objects = {{"q", "fifo-queue"}, {"r", "register"}};
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    for (int max_events : {0, 1, 5, 12}) {
      for (double pending : {0.0, 0.4}) {
        config.seed = seed;
        config.max_events = max_events;
        config.pending_prob = pending;
        GeneratedTrace generated = generate_trace(config);
        History h = must_history(generated);
        CHECK(h.size() <= static_cast<std::size_t>(max_events));
        CHECK(generated.registry == config.objects);
      }
    }
  }
}

TEST_CASE("pending probability zero completes every call") {
  GenConfig config = base_config();
  config.max_events = 20;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    config.seed = seed;
    History h = must_history(generate_trace(config));
    CHECK(h.is_complete());
  }
}

TEST_CASE("pending probability one strands every call") {
  GenConfig config = base_config();
  config.procs = 3;
  config.max_events = 20;
  config.pending_prob = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    config.seed = seed;
    History h = must_history(generate_trace(config));
    // A process stops after its first pending call, so each issues at most
    // one call and that call never completes.
    for (int p : h.processes()) {
      auto calls = h.project_process(p).calls();
      REQUIRE(calls.size() == 1);
      CHECK(calls[0].pending());
    }
  }
}

TEST_CASE("clean traces linearize with verifying certificates") {
  GenConfig config = base_config();
  config.procs = 3;
  config.max_events = 14;
  config.pending_prob = 0.25;
  config.objects = {{"q", "fifo-queue"}, {"r", "register"}, {"s", "stack"}};
  SpecRegistry reg = SpecRegistry::from_names(config.objects);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    config.seed = seed;
    History h = must_history(generate_trace(config));
    CheckResult direct = linearize(h, reg);
    REQUIRE(direct.linearizable());
    CHECK(verify_certificate(h, *direct.certificate, reg).ok);
    CheckResult composed = check_compositional(h, reg);
    REQUIRE(composed.linearizable());
    CHECK(verify_certificate(h, *composed.certificate, reg).ok);
  }
}

TEST_CASE("planted violations are never linearizable") {
  GenConfig config = base_config();
  config.procs = 3;
  config.max_events = 12;
  config.objects = {{"q", "fifo-queue"}, {"r", "register"}};
  SpecRegistry reg = SpecRegistry::from_names(config.objects);
  for (ViolationKind kind : {ViolationKind::StaleRead, ViolationKind::ReorderDequeue,
                             ViolationKind::LostUpdate}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      config.seed = seed;
      config.violation = ViolationConfig{kind, 1.0};
      GeneratedTrace generated = generate_trace(config);
      CHECK(generated.violation_applied);
      History h = must_history(generated);
      CHECK(!is_linearizable(h, reg));
      CHECK(!is_linearizable(h, reg, {L3Mode::Classic}));
    }
  }
}

TEST_CASE("a violation rate of zero leaves the trace clean") {
  GenConfig config = base_config();
  config.procs = 2;
  config.max_events = 10;
  config.objects = {{"r", "register"}};
  config.violation = ViolationConfig{ViolationKind::StaleRead, 0.0};
  SpecRegistry reg = SpecRegistry::from_names(config.objects);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    config.seed = seed;
    GeneratedTrace generated = generate_trace(config);
    CHECK(!generated.violation_applied);
    CHECK(is_linearizable(must_history(generated), reg));
  }
}

TEST_CASE("unusable configs are rejected up front") {
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.procs = 0;
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.max_events = -1;
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.objects.clear();
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.pending_prob = 1.5;
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.pending_prob = -0.1;
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.violation = ViolationConfig{ViolationKind::StaleRead, 2.0};
                    return c;
                  }()),
                  InvalidGenConfig);
  CHECK_THROWS_AS((void)generate_trace([] {
                    GenConfig c = base_config();
                    c.objects = {{"t", "b-tree"}};
                    return c;
                  }()),
                  UnknownSpecName);

  // Violation injection needs two processes, room for the prefix and an
  // object of the right spec.
  GenConfig v = base_config();
  v.objects = {{"r", "register"}};
  v.violation = ViolationConfig{ViolationKind::StaleRead, 1.0};
  v.procs = 1;
  CHECK_THROWS_AS((void)generate_trace(v), InvalidGenConfig);
  v.procs = 2;
  v.max_events = 5;
  CHECK_THROWS_AS((void)generate_trace(v), InvalidGenConfig);
  v.max_events = 8;
  v.objects = {{"q", "fifo-queue"}};
  try {
    (void)generate_trace(v);
    FAIL("expected InvalidGenConfig");
  } catch (const InvalidGenConfig& e) {
    CHECK(std::string(e.what()).find("register") != std::string::npos);
  }
  v.objects = {{"r", "register"}};
  v.violation->kind = ViolationKind::ReorderDequeue;
  CHECK_THROWS_AS((void)generate_trace(v), InvalidGenConfig);

  // The lost-update prefix is shorter and fits in four events.
  v.violation->kind = ViolationKind::LostUpdate;
  v.max_events = 4;
  GeneratedTrace generated = generate_trace(v);
  CHECK(generated.violation_applied);
  CHECK(must_history(generated).size() == 4);
}

TEST_CASE("violation kinds map to names and back") {
  for (ViolationKind kind : {ViolationKind::StaleRead, ViolationKind::ReorderDequeue,
                             ViolationKind::LostUpdate}) {
    auto back = violation_kind_from_name(to_string(kind));
    REQUIRE(back.has_value());
    CHECK(*back == kind);
  }
  CHECK(violation_kind_from_name("stale-read") == ViolationKind::StaleRead);
  CHECK(violation_kind_from_name("reorder-dequeue") == ViolationKind::ReorderDequeue);
  CHECK(violation_kind_from_name("lost-update") == ViolationKind::LostUpdate);
  CHECK(!violation_kind_from_name("phantom-write").has_value());
}

TEST_CASE("the stale read scaffold shapes the prefix as documented") {
  GenConfig config = base_config();
  config.procs = 2;
  config.max_events = 6;
  config.objects = {{"r", "register"}};
  config.violation = ViolationConfig{ViolationKind::StaleRead, 1.0};
  GeneratedTrace generated = generate_trace(config);
  History h = must_history(generated);
  REQUIRE(h.size() == 6);
  // Two writes by process 1, then a read by process 2 returning the value
  // the second write overwrote.
  CHECK(h.at(0).op == "write");
  CHECK(h.at(2).op == "write");
  CHECK(h.at(4).op == "read");
  CHECK(h.at(5).payload == h.at(0).payload);
  CHECK(h.at(0).payload != h.at(2).payload);
}

TEST_SUITE_END();
