// Serial against parallel evaluation of the point-sampled checks.

#include <benchmark/benchmark.h>

#include <vector>

#include "../tests/fixtures.hpp"
#include "opfrob/integ.hpp"
#include "opfrob/opfields.hpp"

namespace {

opfrob::Execution mode(const benchmark::State& state) {
  return state.range(0) ? opfrob::Execution::parallel : opfrob::Execution::serial;
}

opfrob::PointSet points(std::size_t count) {
  opfrob::SamplingSpec spec;
  spec.count = count;
  spec.lo = 0.5;
  spec.hi = 1.5;
  return opfrob::sample_points(4, spec);
}

std::vector<opfrob::QuadraticHamiltonian> rational_family() {
  std::vector<opfrob::QuadraticHamiltonian> out;
  for (const auto& t : fx::example52_rational()) out.push_back(opfrob::QuadraticHamiltonian::parse(t, 4));
  return out;
}

void pairwise(benchmark::State& state) {
  std::vector<opfrob::OperatorField> fam;
  for (const auto& g : fx::example52_tilde()) fam.push_back(fx::field(g));
  const auto ps = points(400);
  opfrob::CheckOptions opt;
  opt.exec = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(opfrob::pairwise_check(fam, opfrob::BracketNorm::full, ps, opt, "strong"));
}

void commuting(benchmark::State& state) {
  const auto fam = rational_family();
  const auto ps = points(200);
  opfrob::IntegOptions opt;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(opfrob::commuting_check(fam, ps, opt));
}

void inverse(benchmark::State& state) {
  const auto fam = rational_family();
  const auto ps = points(200);
  opfrob::IntegOptions opt;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(opfrob::inverse_verify(fam, {1, 0, 0, 0}, ps, opt));
}

}  // namespace

BENCHMARK(pairwise)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(commuting)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(inverse)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
