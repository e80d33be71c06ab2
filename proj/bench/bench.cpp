// Serial reference vs OpenMP kernels. Ticks are reported as counters so the
// two can be checked to do the same work.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "fredman/harness.hpp"
#include "fredman/threesum.hpp"

using namespace fredman;

namespace {

std::vector<double> values(std::size_t n) {
  return harness::generate(harness::Problem::threesum, n, harness::Generator::uniform, 17).values;
}

void decision_tree(benchmark::State& state, Kernel kernel) {
  const auto a = values(static_cast<std::size_t>(state.range(0)));
  DecisionTreeOptions opt;
  opt.kernel = kernel;
  std::uint64_t ticks = 0;
  for (auto _ : state) {
    ComparisonLedger ledger;
    benchmark::DoNotOptimize(solve_decision_tree(a, ledger, opt));
    ticks = ledger.total();
  }
  state.counters["ticks"] = static_cast<double>(ticks);
}

void BM_DecisionTreeReference(benchmark::State& s) { decision_tree(s, Kernel::reference); }
void BM_DecisionTreeSerial(benchmark::State& s) { decision_tree(s, Kernel::serial); }
void BM_DecisionTreeParallel(benchmark::State& s) { decision_tree(s, Kernel::parallel); }

void BM_Quadratic(benchmark::State& state) {
  const auto a = values(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    ComparisonLedger ledger;
    benchmark::DoNotOptimize(solve_quadratic(a, a, a, ledger, true));
  }
}

// Target-min-plus rows run under OpenMP; one thread is the serial baseline.
void tmp_dt(benchmark::State& state, int threads) {
  const auto inst = harness::generate(harness::Problem::tmp, static_cast<std::size_t>(state.range(0)),
                                      harness::Generator::uniform, 5);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : saved);
  for (auto _ : state) {
    ComparisonLedger ledger;
    benchmark::DoNotOptimize(target_min_plus_dt(inst.A, inst.B, inst.T, 0, ledger));
  }
  omp_set_num_threads(saved);
}

void BM_TmpDtSerial(benchmark::State& s) { tmp_dt(s, 1); }
void BM_TmpDtParallel(benchmark::State& s) { tmp_dt(s, 0); }

void kldt(benchmark::State& state, Kernel kernel) {
  const auto inst = harness::generate(harness::Problem::ldt, static_cast<std::size_t>(state.range(0)),
                                      harness::Generator::uniform, 3, 5);
  for (auto _ : state) {
    ComparisonLedger ledger;
    benchmark::DoNotOptimize(solve_kldt(inst.phi, inst.values, 0, ledger, nullptr, kernel));
  }
}

void BM_KldtSerial(benchmark::State& s) { kldt(s, Kernel::serial); }
void BM_KldtParallel(benchmark::State& s) { kldt(s, Kernel::parallel); }

}  // namespace

// The reference kernel caches every box and refuses large inputs.
BENCHMARK(BM_DecisionTreeReference)->RangeMultiplier(4)->Range(1 << 10, 1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecisionTreeSerial)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecisionTreeParallel)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Quadratic)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TmpDtSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TmpDtParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KldtSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KldtParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
