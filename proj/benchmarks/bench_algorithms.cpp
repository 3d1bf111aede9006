#include <benchmark/benchmark.h>

#include <nlqc/algorithms.hpp>

namespace {

nlqc::TruthTableOracle singleton(std::size_t n) { return {n, {(std::uint64_t{1} << n) / 3}}; }

void BM_Alg1(benchmark::State& st) {
  nlqc::Alg1Config cfg;
  cfg.n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) {
    nlqc::OracleSpec o(singleton(cfg.n));
    benchmark::DoNotOptimize(nlqc::run_algorithm1(cfg, o));
    ++cfg.seed;
  }
}
BENCHMARK(BM_Alg1)->DenseRange(4, 16, 4)->Unit(benchmark::kMicrosecond);

void BM_Alg2(benchmark::State& st) {
  nlqc::Alg2Config cfg;
  cfg.n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) {
    nlqc::OracleSpec o(singleton(cfg.n));
    benchmark::DoNotOptimize(nlqc::run_algorithm2(cfg, o));
  }
}
BENCHMARK(BM_Alg2)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_Alg1Count(benchmark::State& st) {
  nlqc::Alg1Config cfg;
  cfg.n = static_cast<std::size_t>(st.range(0));
  nlqc::RandomSource rng(5);
  const auto t = nlqc::random_oracle(cfg.n, 7, rng);
  for (auto _ : st) {
    nlqc::OracleSpec o(t);
    benchmark::DoNotOptimize(nlqc::run_algorithm1_count(cfg, o));
  }
}
BENCHMARK(BM_Alg1Count)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Alg2Count(benchmark::State& st) {
  nlqc::Alg2Config cfg;
  cfg.n = static_cast<std::size_t>(st.range(0));
  nlqc::RandomSource rng(6);
  const auto t = nlqc::random_oracle(cfg.n, 7, rng);
  for (auto _ : st) {
    nlqc::OracleSpec o(t);
    benchmark::DoNotOptimize(nlqc::run_algorithm2_count(cfg, o));
  }
}
BENCHMARK(BM_Alg2Count)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
