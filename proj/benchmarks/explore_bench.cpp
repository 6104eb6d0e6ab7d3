#include <benchmark/benchmark.h>

#include "lockstep/protocols.hpp"
#include "lockstep/s1_adversary.hpp"
#include "lockstep/scheduling.hpp"
#include "lockstep/transcript.hpp"
#include "lockstep/verifier.hpp"

using namespace lockstep;

namespace {

void BM_ExploreTwoSwitchPrisoner(benchmark::State& state) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(state.range(0), state.range(1));
  std::uint64_t states = 0;
  for (auto _ : state) {
    const auto rep = explore(inst);
    states = rep.states;
    benchmark::DoNotOptimize(rep.safe);
  }
  state.counters["states"] = static_cast<double>(states);
  state.counters["states/s"] = benchmark::Counter(static_cast<double>(states), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ExploreTwoSwitchPrisoner)->Args({2, 2})->Args({3, 3})->Unit(benchmark::kMillisecond);

void BM_ExploreTwoSwitchRoom(benchmark::State& state) {
  const auto inst = protocols::two_switch_room_at_a_time(state.range(0), state.range(1));
  ExploreOptions o;
  o.symmetry = state.range(2) != 0;
  std::uint64_t states = 0;
  for (auto _ : state) {
    const auto rep = explore(inst, o);
    states = rep.states;
    benchmark::DoNotOptimize(rep.safe);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_ExploreTwoSwitchRoom)->Args({3, 3, 0})->Args({3, 3, 1})->Unit(benchmark::kMillisecond);

void BM_CheckKnowledge(benchmark::State& state) {
  const auto inst = protocols::three_config_knowledge(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(check_knowledge(inst).holds());
}
BENCHMARK(BM_CheckKnowledge)->Args({2, 2})->Args({3, 2})->Unit(benchmark::kMillisecond);

void BM_RoundRobinRun(benchmark::State& state) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(state.range(0), state.range(0));
  for (auto _ : state) {
    RoundRobin rr(inst.n, inst.r);
    RunOptions o;
    o.record_trace = false;
    benchmark::DoNotOptimize(run(inst, rr, o).outcome.step);
  }
}
BENCHMARK(BM_RoundRobinRun)->Arg(3)->Arg(8)->Arg(16);

void BM_TranscriptSearch(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(exhaustive_transcript_search(2, 2, 1, 2, state.range(0)).declarations);
  }
}
BENCHMARK(BM_TranscriptSearch)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_S1Demo(benchmark::State& state) {
  const auto inst = protocols::one_room_known(2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(run_s1_demo(inst, 10'000).defeated());
}
BENCHMARK(BM_S1Demo)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
