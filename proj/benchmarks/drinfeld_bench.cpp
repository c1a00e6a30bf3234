#include <benchmark/benchmark.h>

#include "drinfeld/analytic.hpp"
#include "drinfeld/anderson.hpp"
#include "drinfeld/shtuka.hpp"
#include "drinfeld/verify.hpp"

using namespace drinfeld;

namespace {

// state.range(0): 3 for y^2 = t^3 - t - 1 over F_3, 2 for y^2 + y = t^3 + t + 1 over F_2.
CurvePtr curve(int q) {
    static const CurvePtr f3 = Curve::make(FiniteField::make({3, 1, {}}), {{0}, {0}, {0}, {2}, {2}});
    static const CurvePtr f2 = Curve::make(FiniteField::make({2, 1, {}}), {{0}, {0}, {1}, {1}, {1}});
    return q == 3 ? f3 : f2;
}

ShtukaData shtuka(int q) {
    const CurvePtr E = curve(q);
    return build_shtuka(E, solve_drinfeld_divisor(E));
}

}  // namespace

static void BM_BaseElementArithmetic(benchmark::State& state) {
    const CurvePtr E = curve(static_cast<int>(state.range(0)));
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    const BaseElement x = (h + th * th) / (th.pow(3) + o), y = (h * th + o) / (th + o);
    for (auto _ : state) benchmark::DoNotOptimize((x * y + x / y).twist(1));
}
BENCHMARK(BM_BaseElementArithmetic)->Arg(3)->Arg(2);

static void BM_DrinfeldDivisorAndShtuka(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(shtuka(q));
}
BENCHMARK(BM_DrinfeldDivisorAndShtuka)->Arg(3)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_BasisAndModule(benchmark::State& state) {
    const ShtukaData sh = shtuka(static_cast<int>(state.range(0)));
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) {
        const MotiveBasis b = build_basis(sh, n);
        const StructureCoeffs c = structure_coeffs(b, sh);
        benchmark::DoNotOptimize(build_module(b, sh, c));
    }
}
BENCHMARK(BM_BasisAndModule)->ArgsProduct({{3, 2}, {2, 3, 4}})->Unit(benchmark::kMillisecond);

static void BM_ExpLogCoefficients(benchmark::State& state) {
    const ShtukaData sh = shtuka(static_cast<int>(state.range(0)));
    const MotiveBasis b = build_basis(sh, 2);
    const AndersonModule M = build_module(b, sh, structure_coeffs(b, sh));
    const int J = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(exp_log_coeffs(M, J));
}
BENCHMARK(BM_ExpLogCoefficients)->ArgsProduct({{3, 2}, {2, 4}})->Unit(benchmark::kMillisecond);

static void BM_PeriodVector(benchmark::State& state) {
    const ShtukaData sh = shtuka(static_cast<int>(state.range(0)));
    const int n = static_cast<int>(state.range(1));
    const MotiveBasis b = build_basis(sh, n);
    const AndersonModule M = build_module(b, sh, structure_coeffs(b, sh));
    TruncationPolicy pol;
    for (auto _ : state) {
        const InfinityData inf = make_infinity_data(sh, pol, pol.local_terms_for(n));
        benchmark::DoNotOptimize(period_vector(M, b, inf));
    }
}
BENCHMARK(BM_PeriodVector)->ArgsProduct({{3, 2}, {1, 2}})->Unit(benchmark::kMillisecond);

static void BM_OperatorSuite(benchmark::State& state) {
    const ShtukaData sh = shtuka(static_cast<int>(state.range(0)));
    const MotiveBasis b = build_basis(sh, 3);
    const AndersonModule M = build_module(b, sh, structure_coeffs(b, sh));
    for (auto _ : state) benchmark::DoNotOptimize(operator_suite(M, b, sh));
}
BENCHMARK(BM_OperatorSuite)->Arg(3)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
