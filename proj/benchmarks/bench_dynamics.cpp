#include <benchmark/benchmark.h>

#include <nlqc/gates.hpp>
#include <nlqc/ngate.hpp>
#include <nlqc/weinberg.hpp>

namespace {

void BM_ClosedForm(benchmark::State& st) {
  const auto h = nlqc::HbarFunction::quadratic();
  nlqc::QubitAmplitudePair q{0.6, 0.8};
  for (auto _ : st) benchmark::DoNotOptimize(nlqc::evolve_closed_form(q, h, 3.0));
}
BENCHMARK(BM_ClosedForm);

void BM_Rk4(benchmark::State& st) {
  const auto h = nlqc::HbarFunction::quadratic();
  const double dt = 1.0 / static_cast<double>(st.range(0));
  nlqc::QubitAmplitudePair q{0.6, 0.8};
  for (auto _ : st) benchmark::DoNotOptimize(nlqc::evolve_integrated(q, h, 1.0, dt));
}
BENCHMARK(BM_Rk4)->Arg(100)->Arg(1000)->Arg(10000);

void BM_PhaseSearchAbsolute(benchmark::State& st) {
  const auto h = nlqc::HbarFunction::quadratic();
  const double t_max = static_cast<double>(st.range(0));
  for (auto _ : st) {
    try {
      nlqc::find_phase_time(h, nlqc::kPi / 8, 1e-2, t_max);
    } catch (const nlqc::PhaseTimeNotFound& e) {
      benchmark::DoNotOptimize(e.best_residual());
    }
  }
}
BENCHMARK(BM_PhaseSearchAbsolute)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BuildNMinus(benchmark::State& st) {
  const double eps = std::pow(10.0, -static_cast<double>(st.range(0)));
  const auto h = nlqc::HbarFunction::quadratic();
  std::size_t passes = 0;
  for (auto _ : st) passes = nlqc::build_n_minus(h, eps).schedule.size();
  st.counters["passes"] = static_cast<double>(passes);
}
BENCHMARK(BM_BuildNMinus)->DenseRange(1, 7, 2);

void BM_BuildN(benchmark::State& st) {
  const auto h = nlqc::HbarFunction::quadratic();
  for (auto _ : st) benchmark::DoNotOptimize(nlqc::build_N(h, 1e-3).min_fidelity());
}
BENCHMARK(BM_BuildN)->Unit(benchmark::kMillisecond);

}  // namespace
