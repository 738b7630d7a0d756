#include <benchmark/benchmark.h>

#include "qkdbound/bsa.hpp"
#include "qkdbound/info.hpp"
#include "qkdbound/pipeline.hpp"
#include "qkdbound/protocol.hpp"

using namespace qkdbound;

namespace {

EquivalenceClassSpec six_state_class(double e) {
    const ProtocolSpec tomo = protocol_povms(ProtocolName::SixState);
    return EquivalenceClassSpec{tomo.alice, tomo.bob,
                                observed_distribution(depolarized_bell_state({e}), tomo,
                                                      std::nullopt)};
}

void BM_SdpSolveBsa(benchmark::State& state) {
    const EquivalenceClassSpec spec = six_state_class(0.1);
    const SdpProblem problem = build_bsa_sdp(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sdp(problem, SdpOptions{1e-8, 1e-8, 200, false}));
    }
}
BENCHMARK(BM_SdpSolveBsa);

void BM_MaxSeparableWeight(benchmark::State& state) {
    const EquivalenceClassSpec spec = six_state_class(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_separable_weight(spec));
    }
}
BENCHMARK(BM_MaxSeparableWeight);

void BM_KeyRateUpperBoundPoint(benchmark::State& state) {
    const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
    DetectorSpec det;
    det.dark_total = 1e-6;
    det.efficiencies = {0.15};
    for (auto _ : state) {
        benchmark::DoNotOptimize(key_rate_upper_bound(six, {0.05}, det));
    }
}
BENCHMARK(BM_KeyRateUpperBoundPoint);

void BM_IntrinsicInformation2x2x2(benchmark::State& state) {
    const JointDistribution p({2, 2, 2},
                              {0.22, 0.08, 0.05, 0.15, 0.1, 0.12, 0.2, 0.08});
    for (auto _ : state) {
        benchmark::DoNotOptimize(intrinsic_information(p));
    }
}
BENCHMARK(BM_IntrinsicInformation2x2x2);

void BM_ObservedDistributionNoisy(benchmark::State& state) {
    const ProtocolSpec six = protocol_povms(ProtocolName::SixState);
    DetectorSpec det;
    det.dark_total = 1e-6;
    det.efficiencies = {0.15};
    const DensityMatrix rho = depolarized_bell_state({0.1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(observed_distribution(rho, six, det));
    }
}
BENCHMARK(BM_ObservedDistributionNoisy);

}  // namespace

BENCHMARK_MAIN();
