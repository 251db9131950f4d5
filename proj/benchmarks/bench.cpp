#include <benchmark/benchmark.h>

#include "bitfade/codingsim.hpp"
#include "bitfade/gf2.hpp"
#include "bitfade/network.hpp"
#include "bitfade/regions.hpp"
#include "bitfade/rng.hpp"

namespace {

bitfade::Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    bitfade::Gf2Matrix m(rows, cols);
    bitfade::rng::Stream s(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = m.row_words(r);
        for (auto& w : row) w = s.next_word();
        if (cols % 64) row.back() &= (std::uint64_t{1} << (cols % 64)) - 1;
    }
    return m;
}

const char* kDiamond =
    "node S levels=2\nnode A levels=2\nnode B levels=2\nnode D levels=2\n"
    "edge S A pmf=1:0.5,2:0.5\nedge S B pmf=1:0.5,2:0.5\n"
    "edge A D pmf=1:0.5,2:0.5\nedge B D pmf=1:0.5,2:0.5\n"
    "source S\nsink D\n";

void GfRank(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const bitfade::Gf2Matrix m = random_matrix(n, n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(bitfade::gf2_rank(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(GfRank)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void FadingSample(benchmark::State& state) {
    const bitfade::FadingPmf pmf = bitfade::FadingPmf::from_text("0:0.25,1:0.5,2:0.25");
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(pmf.sample(7, index++));
}
BENCHMARK(FadingSample);

void CutsetExactDiamond(benchmark::State& state) {
    const auto net = bitfade::NetworkSpec::parse(kDiamond);
    for (auto _ : state) benchmark::DoNotOptimize(bitfade::cutset_bound_exact(net));
}
BENCHMARK(CutsetExactDiamond);

void CutsetMonteCarloDiamond(benchmark::State& state) {
    const auto net = bitfade::NetworkSpec::parse(kDiamond);
    for (auto _ : state)
        benchmark::DoNotOptimize(bitfade::cutset_bound_mc(net, state.range(0), 11));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(CutsetMonteCarloDiamond)->Arg(1000)->Arg(10000);

void LinearCodingDiamond(benchmark::State& state) {
    const auto net = bitfade::NetworkSpec::parse(kDiamond);
    const bitfade::SimConfig cfg{1.4,
                                 static_cast<int>(state.range(0)),
                                 4,
                                 2,
                                 1,
                                 33,
                                 bitfade::CodingScheme::LinearRandom,
                                 1};
    for (auto _ : state) benchmark::DoNotOptimize(bitfade::simulate_random_coding(net, cfg));
}
BENCHMARK(LinearCodingDiamond)->Arg(16)->Arg(32)->Arg(64);

void RegionSupport(benchmark::State& state) {
    const bitfade::RateRegion region(
        2, {{{1.0, 0.0}, 5.0}, {{0.0, 1.0}, 3.0}, {{1.0, 1.0}, 5.0}});
    const double w[] = {0.3, 0.7};
    for (auto _ : state) benchmark::DoNotOptimize(region.support(w));
}
BENCHMARK(RegionSupport);

}  // namespace

BENCHMARK_MAIN();
