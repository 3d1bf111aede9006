#include <benchmark/benchmark.h>

#include <nlqc/oracle.hpp>
#include <nlqc/statevector.hpp>

namespace {

void BM_Apply1q(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  nlqc::StateVector s(n);
  const auto h = nlqc::hadamard();
  std::size_t q = 0;
  for (auto _ : st) {
    s.apply_1q(nlqc::QubitIndex(q), h);
    q = (q + 1) % n;
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_Apply1q)->DenseRange(10, 20, 5);

void BM_Apply2q(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  nlqc::StateVector s(n);
  const auto u = nlqc::and_basis_change();
  for (auto _ : st) {
    s.apply_2q(nlqc::QubitIndex(0), nlqc::QubitIndex(n - 1), u);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_Apply2q)->DenseRange(10, 20, 5);

void BM_Measure(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  nlqc::StateVector base(n);
  for (std::size_t q = 0; q < n; ++q) base.apply_1q(nlqc::QubitIndex(q), nlqc::hadamard());
  std::vector<nlqc::QubitIndex> qs;
  for (std::size_t q = 0; q + 1 < n; ++q) qs.emplace_back(q);
  nlqc::RandomSource rng(1);
  for (auto _ : st) {
    auto s = base;
    benchmark::DoNotOptimize(s.measure(qs, rng));
  }
}
BENCHMARK(BM_Measure)->Arg(12)->Arg(16);

void BM_OracleCnf(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  nlqc::CnfFormula f;
  f.num_vars = n;
  for (int v = 1; v + 2 <= static_cast<int>(n); ++v) f.clauses.push_back({v, -(v + 1), v + 2});
  nlqc::OracleSpec o(f);
  nlqc::StateVector s(n + 1);
  std::vector<nlqc::QubitIndex> in;
  for (std::size_t q = 0; q < n; ++q) in.emplace_back(q);
  for (auto _ : st) {
    o.apply(s, in, nlqc::QubitIndex(n));
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
}
BENCHMARK(BM_OracleCnf)->Arg(10)->Arg(16);

}  // namespace
