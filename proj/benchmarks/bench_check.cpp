#include <benchmark/benchmark.h>

#include "lincert/composer.hpp"
#include "lincert/generator.hpp"

namespace {

lincert::History make_history(std::uint64_t seed, int procs, int events) {
  lincert::GenConfig config;
  config.seed = seed;
  config.procs = procs;
  config.max_events = events;
  config.pending_prob = 0.1;
  config.objects = {{"q1", "fifo-queue"}, {"q2", "fifo-queue"},
                    {"r1", "register"}};
  auto generated = lincert::generate_trace(config);
  return lincert::history_from_trace(generated.trace, generated.registry)
      .value();
}

lincert::SpecRegistry registry() {
  return lincert::SpecRegistry::from_names(
      {{"q1", "fifo-queue"}, {"q2", "fifo-queue"}, {"r1", "register"}});
}

void BM_LinearizeDirect(benchmark::State& state) {
  auto history = make_history(7, 3, static_cast<int>(state.range(0)));
  auto reg = registry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lincert::linearize(history, reg));
  }
}
BENCHMARK(BM_LinearizeDirect)->Arg(16)->Arg(32)->Arg(48);

void BM_CheckCompositional(benchmark::State& state) {
  auto history = make_history(7, 3, static_cast<int>(state.range(0)));
  auto reg = registry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lincert::check_compositional(history, reg));
  }
}
BENCHMARK(BM_CheckCompositional)->Arg(16)->Arg(32)->Arg(48);

void BM_VerifyCertificate(benchmark::State& state) {
  auto history = make_history(11, 3, static_cast<int>(state.range(0)));
  auto reg = registry();
  auto cert = *lincert::linearize(history, reg).certificate;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lincert::verify_certificate(history, cert, reg));
  }
}
BENCHMARK(BM_VerifyCertificate)->Arg(16)->Arg(32)->Arg(48);

void BM_Complete(benchmark::State& state) {
  auto history = make_history(13, 5, 400);
  for (auto _ : state) {
    benchmark::DoNotOptimize(history.complete());
  }
}
BENCHMARK(BM_Complete);

}  // namespace

BENCHMARK_MAIN();
