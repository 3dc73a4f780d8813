#include "crev/analysis.hpp"
#include "crev/numerics.hpp"
#include "crev/reversibility.hpp"
#include "crev/spectral.hpp"

#include "generators.hpp"

#include <benchmark/benchmark.h>

using namespace crev;
using namespace crev::testing;

namespace {

// Reversible input of size n, fixed per n. The spectral pipeline is validated for n <= 8.
ComplexMatrix instance(int n) {
    Rng rng(1000 + static_cast<unsigned>(n));
    SpectrumOptions o;
    o.n = n;
    const auto content = reversible_content(o, rng);
    return conjugate(jordan_matrix(content), random_conjugator(n, 10.0, rng).p);
}

void BM_char_poly(benchmark::State& state) {
    const ComplexMatrix a = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(numerics::char_poly(a));
}
BENCHMARK(BM_char_poly)->RangeMultiplier(2)->Range(4, 32);

void BM_poly_roots(benchmark::State& state) {
    const auto chi = numerics::char_poly(instance(static_cast<int>(state.range(0))));
    const Tolerances t;
    for (auto _ : state) benchmark::DoNotOptimize(numerics::poly_roots(chi, t.cluster, t.solver));
}
BENCHMARK(BM_poly_roots)->RangeMultiplier(2)->Range(4, 16);

void BM_eigen_structure(benchmark::State& state) {
    const ComplexMatrix a = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(spectral::eigen_structure(a));
}
BENCHMARK(BM_eigen_structure)->DenseRange(2, 8, 2);

void BM_assemble_reverser(benchmark::State& state) {
    const ComplexMatrix a = instance(static_cast<int>(state.range(0)));
    const auto s = spectral::eigen_structure_with_basis(a);
    const auto pairing = reversibility::pairing_check(s);
    for (auto _ : state) benchmark::DoNotOptimize(reversibility::assemble_reverser(a, s, pairing));
}
BENCHMARK(BM_assemble_reverser)->DenseRange(2, 8, 2);

void BM_unit_symmetry(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Complex lambda = std::polar(1.0, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(reversibility::build_unit_symmetry(lambda, n, 1.0));
}
BENCHMARK(BM_unit_symmetry)->RangeMultiplier(4)->Range(4, 64);

void BM_run_analyze(benchmark::State& state) {
    cli::AnalysisRequest req;
    req.source = "bench";
    req.matrix = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cli::run_analyze(req));
}
BENCHMARK(BM_run_analyze)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
