// Command line front end: check traces for linearizability, re-verify
// certificates, generate test traces and project subhistories.
//
// Exit codes: 0 linearizable / certificate valid, 1 not linearizable /
// certificate invalid, 2 unusable input, 3 search budget exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>

#include "CLI11.hpp"
#include "json.hpp"

#include "lincert/composer.hpp"
#include "lincert/generator.hpp"
#include "lincert/trace.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

using ordered_json = nlohmann::ordered_json;

struct InputError {
  std::string message;
};

lincert::Trace load_trace(const std::string& path) {
  try {
    return lincert::parse_trace_file(path);
  } catch (const lincert::TraceParseError& e) {
    throw InputError{e.what()};
  }
}

lincert::SpecRegistry load_registry(const std::string& path,
                                    std::map<std::string, std::string>* names) {
  try {
    auto parsed = lincert::parse_registry_file(path);
    if (names) *names = parsed;
    return lincert::SpecRegistry::from_names(parsed);
  } catch (const lincert::Error& e) {
    throw InputError{e.what()};
  }
}

lincert::History load_history(const lincert::Trace& trace,
                              std::map<std::string, std::string> meta) {
  auto validated = lincert::history_from_trace(trace, std::move(meta));
  if (!validated.ok()) {
    const auto& err = validated.error();
    std::size_t line = trace.event_line(err.index);
    throw InputError{"line " + std::to_string(line) + ": not well-formed (" +
                     lincert::rule_name(err.rule) + ")"};
  }
  // Message records must be consistent with the trace's own order: the
  // event sequence has to extend the causality they induce. They do not
  // influence verdicts.
  auto messages = trace.messages();
  if (!messages.empty()) {
    try {
      auto order = lincert::causality_of(validated.value(), messages);
      if (!lincert::verify_extension(
              order, lincert::TotalOrderWitness{validated.value().events()})) {
        throw InputError{"trace order contradicts its message causality"};
      }
    } catch (const lincert::CyclicCausality&) {
      throw InputError{"message records make the causality relation cyclic"};
    } catch (const lincert::Error& e) {
      throw InputError{e.what()};
    }
  }
  return validated.value();
}

std::uint64_t effective_budget(std::uint64_t flag_value) {
  // The environment knob wins over the flag so wrappers can cap runs.
  if (const char* env = std::getenv("LIN_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError{"LIN_BUDGET is not a number: " + std::string(env)};
    }
  }
  return flag_value;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{"cannot write " + path};
  out << text;
}

int cmd_check(const std::string& trace_path, const std::string& registry_path,
              const std::string& mode, const std::string& l3,
              std::uint64_t budget_flag, const std::string& cert_path) {
  auto trace = load_trace(trace_path);
  std::map<std::string, std::string> names;
  auto registry = load_registry(registry_path, &names);
  auto history = load_history(trace, names);

  lincert::CheckOptions options;
  auto parsed_mode = lincert::l3_mode_from_name(l3);
  if (!parsed_mode) throw InputError{"unknown --l3 mode: " + l3};
  options.mode = *parsed_mode;
  options.budget = effective_budget(budget_flag);

  ordered_json report;
  report["verdict"] = "";
  report["mode"] = mode;
  report["l3"] = l3;

  auto started = std::chrono::steady_clock::now();
  std::optional<lincert::CheckResult> result;
  try {
    if (mode == "direct") {
      result = lincert::linearize(history, registry, options);
    } else if (mode == "compositional") {
      result = lincert::check_compositional(history, registry, options);
    } else {
      throw InputError{"unknown --mode: " + mode};
    }
  } catch (const lincert::BudgetExceeded& e) {
    auto elapsed = std::chrono::steady_clock::now() - started;
    report["verdict"] = "budget-exceeded";
    report["budget"] = e.limit;
    report["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::cout << report.dump() << "\n";
    return kExitBudget;
  } catch (const lincert::Error& e) {
    throw InputError{e.what()};
  }
  auto elapsed = std::chrono::steady_clock::now() - started;

  report["verdict"] = result->linearizable() ? "linearizable" : "not-linearizable";
  report["states_explored"] = result->stats.states_explored;
  report["completions_tried"] = result->stats.completions_tried;
  report["elapsed_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  if (result->witness_object) {
    report["witness_object"] = *result->witness_object;
  }
  if (mode == "compositional") {
    ordered_json per_object = ordered_json::object();
    for (const auto& [obj, ok] : result->object_verdicts) {
      per_object[obj] = ok ? "linearizable" : "not-linearizable";
    }
    report["objects"] = std::move(per_object);
  }
  std::cout << report.dump() << "\n";

  if (result->linearizable() && !cert_path.empty()) {
    auto raw = lincert::to_raw(*result->certificate, history);
    if (mode == "compositional") {
      for (const std::string& obj : history.objects()) {
        auto sub = lincert::project_certificate(history, *result->certificate,
                                                registry, obj);
        raw.objects.emplace(obj,
                            lincert::to_raw(sub, history.project_object(obj)));
      }
    }
    write_text_file(cert_path, lincert::raw_certificate_to_json(raw));
  }
  return result->linearizable() ? kExitYes : kExitNo;
}

int cmd_verify(const std::string& trace_path, const std::string& cert_path,
               const std::string& registry_path) {
  auto trace = load_trace(trace_path);
  std::map<std::string, std::string> names;
  auto registry = load_registry(registry_path, &names);
  auto history = load_history(trace, names);

  std::ifstream in(cert_path);
  if (!in) throw InputError{"cannot open " + cert_path};
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  lincert::RawCertificate raw;
  try {
    raw = lincert::raw_certificate_from_json(text);
  } catch (const lincert::CertificateParseError& e) {
    throw InputError{e.what()};
  }

  auto emit = [](const lincert::VerifyReport& report,
                 const std::string& object) {
    ordered_json j;
    j["ok"] = report.ok;
    if (!report.ok) {
      j["violated"] = report.violated;
      j["detail"] = report.detail;
    }
    if (!object.empty()) j["object"] = object;
    std::cout << j.dump() << "\n";
  };

  auto check_one = [&](const lincert::RawCertificate& raw_cert,
                       const lincert::History& base,
                       const std::string& label) -> bool {
    auto bound = lincert::bind_certificate(raw_cert, base);
    if (!bound.ok()) {
      emit(bound.error(), label);
      return false;
    }
    auto report = lincert::verify_certificate(base, bound.value(), registry);
    if (!report.ok) {
      emit(report, label);
      return false;
    }
    return true;
  };

  if (!check_one(raw, history, "")) return kExitNo;
  for (const auto& [obj, sub] : raw.objects) {
    if (!check_one(sub, history.project_object(obj), obj)) return kExitNo;
  }
  emit(lincert::VerifyReport::pass(), "");
  return kExitYes;
}

int cmd_gen(const lincert::GenConfig& config, const std::string& out_path,
            const std::string& registry_out) {
  lincert::GeneratedTrace generated;
  try {
    generated = lincert::generate_trace(config);
  } catch (const lincert::Error& e) {
    throw InputError{e.what()};
  }
  std::string text = lincert::serialize_trace(generated.trace);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  if (!registry_out.empty()) {
    write_text_file(registry_out,
                    lincert::serialize_registry(generated.registry));
  }
  return kExitYes;
}

int cmd_project(const std::string& trace_path, std::optional<int> proc,
                const std::string& obj, const std::string& out_path) {
  auto trace = load_trace(trace_path);
  auto history = load_history(trace, {});
  (void)history;  // projection is only defined on well-formed traces

  lincert::Trace projected;
  auto keep_event = [&](const lincert::Event& e) {
    return proc ? e.proc == *proc : e.obj == obj;
  };
  std::unordered_set<lincert::EventId, lincert::EventIdHash> kept;
  for (const auto& record : trace.records) {
    if (record.type == lincert::TraceRecord::Type::Event) {
      if (keep_event(record.event)) {
        kept.insert(record.event.id());
        projected.records.push_back(record);
      }
    }
  }
  // Message records survive only when both endpoints do.
  for (const auto& record : trace.records) {
    if (record.type == lincert::TraceRecord::Type::Message &&
        kept.contains(record.message.from) && kept.contains(record.message.to)) {
      projected.records.push_back(record);
    }
  }

  std::string text = lincert::serialize_trace(projected);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linearizability checking toolkit"};
  app.require_subcommand(1);

  // check
  std::string trace_path, registry_path, cert_out;
  std::string mode = "direct";
  std::string l3 = "strengthened";
  std::uint64_t budget = 1'000'000;
  auto* check = app.add_subcommand("check", "decide whether a trace is linearizable");
  check->add_option("trace", trace_path, "trace file (JSON lines)")->required();
  check->add_option("registry", registry_path, "object registry JSON")->required();
  check->add_option("--mode", mode, "direct or compositional")
      ->check(CLI::IsMember({"direct", "compositional"}));
  check->add_option("--l3", l3, "certificate order condition")
      ->check(CLI::IsMember({"strengthened", "classic"}));
  check->add_option("--budget", budget,
                    "explored-state cap (env LIN_BUDGET overrides)");
  check->add_option("--cert", cert_out, "write the certificate here");

  // verify
  std::string v_trace, v_cert, v_registry;
  auto* verify = app.add_subcommand("verify", "re-check a certificate");
  verify->add_option("trace", v_trace, "trace file")->required();
  verify->add_option("cert", v_cert, "certificate JSON")->required();
  verify->add_option("registry", v_registry, "object registry JSON")->required();

  // gen
  lincert::GenConfig config;
  std::vector<std::string> object_flags;
  std::string violation_name;
  double violation_rate = 1.0;
  std::string gen_out, registry_out;
  auto* gen = app.add_subcommand("gen", "generate a seeded random trace");
  gen->add_option("--seed", config.seed, "random seed");
  gen->add_option("--procs", config.procs, "number of processes");
  gen->add_option("--max-events", config.max_events, "output length bound");
  gen->add_option("--pending-prob", config.pending_prob,
                  "chance that a call never responds");
  gen->add_option("--object", object_flags,
                  "object as id=spec (repeatable); default r1=register q1=fifo-queue");
  gen->add_option("--violation", violation_name,
                  "inject stale-read, reorder-dequeue or lost-update");
  gen->add_option("--violation-rate", violation_rate,
                  "chance the injected corruption is applied");
  gen->add_option("--out", gen_out, "trace output path (default stdout)");
  gen->add_option("--registry-out", registry_out, "also write a registry file");

  // project
  std::string p_trace, p_obj, p_out;
  std::optional<int> p_proc;
  auto* project = app.add_subcommand("project", "project a trace onto a process or object");
  project->add_option("trace", p_trace, "trace file")->required();
  auto* per_proc = project->add_option("--process", p_proc, "process id");
  auto* per_obj = project->add_option("--object", p_obj, "object id");
  per_proc->excludes(per_obj);
  project->add_option("--out", p_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; anything else is unusable input.
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (check->parsed()) {
      return cmd_check(trace_path, registry_path, mode, l3, budget, cert_out);
    }
    if (verify->parsed()) {
      return cmd_verify(v_trace, v_cert, v_registry);
    }
    if (gen->parsed()) {
      if (object_flags.empty()) {
        config.objects = {{"r1", "register"}, {"q1", "fifo-queue"}};
      } else {
        for (const std::string& flag : object_flags) {
          auto eq = flag.find('=');
          if (eq == std::string::npos || eq == 0 || eq + 1 == flag.size()) {
            throw InputError{"--object expects id=spec, got: " + flag};
          }
          config.objects[flag.substr(0, eq)] = flag.substr(eq + 1);
        }
      }
      if (!violation_name.empty()) {
        auto kind = lincert::violation_kind_from_name(violation_name);
        if (!kind) throw InputError{"unknown violation kind: " + violation_name};
        config.violation = lincert::ViolationConfig{*kind, violation_rate};
      }
      return cmd_gen(config, gen_out, registry_out);
    }
    if (project->parsed()) {
      if (!p_proc && p_obj.empty()) {
        throw InputError{"project needs --process or --object"};
      }
      return cmd_project(p_trace, p_proc, p_obj, p_out);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitInput;
  } catch (const lincert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
