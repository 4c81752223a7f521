#include <benchmark/benchmark.h>

#include "atam/construction.hpp"
#include "atam/probe.hpp"
#include "../tests/probe_fixtures.hpp"

using namespace atam;

namespace {

// A row with a column on every tile; the window bounds both, and the
// columns grow in any interleaving.
Tas comb() {
    std::vector<TileType> tiles{make_tile("base", {"up", 1}, {"row", 1})};
    tiles.push_back(make_tile("row", {"up", 1}, {"row", 1}, {}, {"row", 1}));
    tiles.push_back(make_tile("col", {"up", 1}, {}, {"up", 1}));
    Tas t;
    t.temperature = 1;
    t.tiles = TileSet(tiles);
    t.seed.place({0, 0}, 0);
    return t;
}

void explore_comb(benchmark::State& st, bool parallel) {
    const int w = static_cast<int>(st.range(0)), h = 4;
    const Tas t = comb();
    ExploreLimits lim;
    lim.parallel = parallel;
    lim.max_states = 50000000;
    std::size_t states = 0;
    for (auto _ : st) {
        const auto r = explore(t, {0, 0, w - 1, h}, lim);
        states = r.states;
        benchmark::DoNotOptimize(states);
    }
    st.counters["states"] = static_cast<double>(states);
}

void BM_ExploreSerial(benchmark::State& st) { explore_comb(st, false); }
void BM_ExploreParallel(benchmark::State& st) { explore_comb(st, true); }
BENCHMARK(BM_ExploreSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

struct Grown {
    Construction c;
    Assembly a;
};

const Grown& grown() {
    static const Grown g = [] {
        Grown out{build_construction(default_params()), {}};
        Grower gr(out.c.sys, out.c.window, Policy::lexmin());
        gr.run(SIZE_MAX);
        out.a = gr.assembly();
        return out;
    }();
    return g;
}

void arm_types(benchmark::State& st, bool parallel) {
    const auto& g = grown();
    const SubiterationReport* empty = nullptr;
    for (const auto& r : g.c.reports)
        if (r.is_empty && r.i == 3) empty = &r;
    auto f = fixture::probe_fixture(g.c, g.a, *empty, static_cast<int>(st.range(0)));
    f.query.parallel = parallel;
    for (auto _ : st) {
        const auto e = enumerate_arm_types(f.probes, f.U, f.m, f.t.temperature, f.query);
        benchmark::DoNotOptimize(e.E.size());
    }
}

void BM_ArmTypesSerial(benchmark::State& st) { arm_types(st, false); }
void BM_ArmTypesParallel(benchmark::State& st) { arm_types(st, true); }
BENCHMARK(BM_ArmTypesSerial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArmTypesParallel)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GrowConstruction(benchmark::State& st) {
    const auto& g = grown();
    Grower gr(g.c.sys, g.c.window, Policy::lexmin());
    std::uint64_t seed = 1;
    for (auto _ : st) {
        gr.reset(Policy::random(seed++));
        benchmark::DoNotOptimize(gr.run(SIZE_MAX));
    }
    st.counters["tiles"] = static_cast<double>(g.c.expected_tiles);
}
BENCHMARK(BM_GrowConstruction)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
