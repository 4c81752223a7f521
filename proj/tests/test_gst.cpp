#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <random>
#include <set>

#include "atam/gst.hpp"
#include "atam/io.hpp"
#include "atam/simulation.hpp"
#include "atam/zigzag.hpp"
#include "gst_fixtures.hpp"
#include "tm_fixtures.hpp"

using namespace atam;
using fixture::block_bit;
using fixture::block_spec;

namespace {

Glue g(const std::string& l, int s = 2) { return {l, s}; }

Tas make_tas(std::vector<TileType> tiles, const std::vector<std::pair<Point, std::string>>& seed, int tau = 2) {
    Tas t;
    t.tiles = TileSet(std::move(tiles));
    t.temperature = tau;
    for (const auto& [p, name] : seed) t.seed.place(p, t.tiles.index(name));
    return t;
}

Assembly direct(const Tas& sys, const Box& win) {
    Grower gr(sys, win, Policy::lexmin());
    gr.run(SIZE_MAX);
    REQUIRE_FALSE(gr.conflict());
    return gr.assembly();
}

Assembly restrict_rows(const Assembly& a, int y0, int y1) {
    Assembly out;
    for (const auto& [p, t] : a.cells())
        if (p.y >= y0 && p.y <= y1) out.place(p, t);
    return out;
}

// A tower at x = 1 that, every 14 rows, sends a 12-tile descender down x = 2
// and an ascender back up x = 3 before the tower resumes. c = 2, so k = 10.
Tas bungee() {
    std::vector<TileType> t;
    auto tn = [](int r) { return "T" + std::to_string(r); };
    for (int r = 0; r < 14; ++r) {
        TileType x = make_tile(tn(r));
        if (r < 13) x.glues[N] = g("t" + std::to_string(r + 1));
        if (r > 0) x.glues[S] = g("t" + std::to_string(r));
        if (r == 0) x.glues[E] = g("w");
        if (r == 13) x.glues[E] = g("e");
        t.push_back(x);
    }
    for (int s = 0; s < 12; ++s) {
        TileType d = make_tile("D" + std::to_string(s));
        d.glues[s == 0 ? W : N] = s == 0 ? g("e") : g("d" + std::to_string(s));
        if (s < 11) d.glues[S] = g("d" + std::to_string(s + 1));
        if (s == 11) d.glues[E] = g("f");
        t.push_back(d);
        TileType u = make_tile("U" + std::to_string(s));
        u.glues[s == 0 ? W : S] = s == 0 ? g("f") : g("u" + std::to_string(s));
        u.glues[N] = s < 11 ? g("u" + std::to_string(s + 1)) : g("g");
        t.push_back(u);
    }
    t.push_back(make_tile("V", {}, {}, g("g"), g("v")));
    t.push_back(make_tile("Wt", {}, g("v"), {}, g("w")));
    t.push_back(make_tile("T0s", g("t1")));
    return make_tas(t, {{{1, 0}, "T0s"}});
}

// Independent table oracle on a full assembly of a system whose bonds all
// have strength tau: the tiles below the cut reachable from the seed without
// crossing it, then the tiles each assumed event pulls in.
std::set<GlueEvent> oracle_entry(const Tas& sys, const Assembly& full, const CutSpec& cut,
                                 const std::vector<GlueEvent>& seq) {
    std::set<Point> base;
    std::deque<Point> q;
    for (const auto& [p, t] : sys.seed.cells())
        if (cut.below(p)) base.insert(p), q.push_back(p);
    auto flood = [&](std::set<Point>& got, std::deque<Point>& queue) {
        while (!queue.empty()) {
            const Point p = queue.front();
            queue.pop_front();
            for (Dir d : kDirs) {
                const Point r = p.step(d);
                if (!cut.below(r) || got.count(r) || !full.contains(r)) continue;
                if (bond_strength(sys.tiles, full.at(p), d, full.at(r)) < sys.temperature) continue;
                got.insert(r);
                queue.push_back(r);
            }
        }
    };
    flood(base, q);
    std::set<Point> grown = base, assumed;
    for (const auto& e : seq) assumed.insert(e.loc);
    for (const auto& e : seq) {
        const Point r = e.target();
        if (grown.count(r) || !full.contains(r)) continue;
        if (sys.tiles[full.at(r)].glues[opposite(e.dir)] != e.glue) continue;
        grown.insert(r);
        q.push_back(r);
        flood(grown, q);
    }
    std::set<GlueEvent> out;
    for (Point p : grown) {
        if (base.count(p)) continue;
        for (Dir d : kDirs) {
            const Glue& gl = sys.tiles[full.at(p)].glues[d];
            const GlueEvent ev{gl, d, p};
            if (!gl.is_null() && cut.up_crossing(ev) && !assumed.count(ev.target()) && !base.count(ev.target()))
                out.insert(ev);
        }
    }
    return out;
}

// Unbounded search for a bonded path between two blocks of one block row.
bool blocks_joined(const Tas& sys, const Assembly& a, Point from, Point to, int floor_y) {
    std::set<Point> seen{from};
    std::deque<Point> q{from};
    while (!q.empty()) {
        const Point p = q.front();
        q.pop_front();
        if (p == to) return true;
        for (Dir d : kDirs) {
            const Point r = p.step(d);
            if (r.y < floor_y || seen.count(r) || !a.contains(r)) continue;
            if (bond_strength(sys.tiles, a.at(p), d, a.at(r)) <= 0) continue;
            seen.insert(r);
            q.push_back(r);
        }
    }
    return false;
}

}  // namespace

TEST_CASE("init_assembly matches direct simulation below the line") {
    const auto c = compile_counter(4, 0);
    for (int m : {1, 2}) {
        const auto sc = scale_system(c.sys, m);
        const int k = m == 1 ? 4 : strip_pitch(m, 1);
        // Growth confined to the rows at or below 2k.
        Box win = scale_window({-2, -2, 6, 18}, m);
        win.y1 = 2 * k;
        CHECK(init_assembly(sc.sys, k) == direct(sc.sys, win));
    }
    Tas high = make_tas({make_tile("a", g("x")), make_tile("b", {}, {}, g("x"))}, {{{0, 30}, "a"}});
    CHECK(init_assembly(high, 5) == high.seed);
    GstOptions tight;
    tight.max_placements = 10;
    CHECK_THROWS_AS(grow_below(c.sys, 100, tight), BudgetExhausted);
}

TEST_CASE("identity cut is a horizontal line") {
    const auto c = compile_counter(4, 0);
    const Assembly strip = init_assembly(c.sys, 5);
    const CutSpec cut = find_cut(c.sys, strip, 5, 1);
    CHECK(cut.y_left == 5);
    CHECK(cut.y_right == 5);
    CHECK(cut.x_left < cut.x_right);
}

TEST_CASE("cut of a scaled counter joins its end blocks") {
    const auto c = compile_counter(4, 0);
    const auto sc = scale_system(c.sys, 2);
    const int k = strip_pitch(2, 2);
    const Assembly strip = init_assembly(sc.sys, k);
    const CutSpec cut = find_cut(sc.sys, strip, k, 2);
    CHECK(cut.lowest() >= k);
    CHECK(cut.highest() < 2 * k);
    CHECK(strip.contains({cut.x_left, cut.y_left}));
    CHECK(strip.contains({cut.x_right, cut.y_right}));
    CHECK(blocks_joined(sc.sys, strip, {cut.x_left, cut.y_left}, {cut.x_right, cut.y_right}, 0));
    // The two tiles sit in one block row, at its leftmost and rightmost blocks.
    CHECK(cut.y_left / 2 == cut.y_right / 2);
    int bl = 1000, br = -1000;
    for (const auto& [p, t] : strip.cells())
        if (p.y / 2 == cut.y_left / 2) bl = std::min(bl, p.x / 2), br = std::max(br, p.x / 2);
    CHECK(cut.x_left / 2 == bl);
    CHECK(cut.x_right / 2 == br);
    // No earlier block row in the band is joined.
    for (int r = (k + 1) / 2; r < cut.y_left / 2; ++r) {
        std::vector<Point> row;
        for (const auto& [p, t] : strip.cells())
            if (p.y / 2 == r) row.push_back(p);
        int lo = 1000, hi = -1000;
        for (Point p : row) lo = std::min(lo, p.x / 2), hi = std::max(hi, p.x / 2);
        bool joined = false;
        for (Point a : row)
            for (Point b : row)
                if (a.x / 2 == lo && b.x / 2 == hi) joined = joined || blocks_joined(sc.sys, strip, a, b, 0);
        CHECK_FALSE(joined);
    }
}

TEST_CASE("unsaturated strip has no cut") {
    const auto c = compile_counter(4, 0);
    const Assembly strip = restrict_rows(init_assembly(c.sys, 5), 0, 3);
    CHECK_THROWS_AS(find_cut(c.sys, strip, 5, 1), NoConnectingPath);
    // A row split by a missing tile is not joined either.
    Assembly holed = init_assembly(c.sys, 5);
    for (int y = 0; y <= 10; ++y) holed.erase({1, y});
    CHECK_THROWS_AS(find_cut(c.sys, holed, 5, 1), NoConnectingPath);
}

TEST_CASE("hook table echoes its trigger") {
    Tas hook = make_tas({make_tile("A", {}, {}, g("t")), make_tile("H", g("t"), g("up", 1)), make_tile("Fl")}, {});
    for (int x = 0; x < 5; ++x) hook.seed.place({x, -1}, 2);
    for (int x : {0, 1, 4}) hook.seed.place({x, 0}, 2);
    for (int x : {0, 1, 3, 4}) hook.seed.place({x, 1}, 2);
    const CutSpec cut{0, 2, -1, 4};
    GlueSequenceTable t = init_gst(hook, hook.seed, cut, 1);
    const GlueEvent trig{g("t"), S, {2, 1}};
    REQUIRE(t.domain() == std::vector<GlueEvent>{trig});
    CHECK(t.lookup({}).empty());
    const std::set<GlueEvent> echo{{g("up", 1), E, {2, 0}}};
    CHECK(t.lookup({trig}) == echo);
    CHECK(t.backfill() == 2);
    for (const auto& [seq, f] : t.entries()) {
        const bool has = std::find(seq.begin(), seq.end(), trig) != seq.end();
        CHECK(f == (has ? echo : std::set<GlueEvent>{}));
        for (const auto& e : seq) CHECK(cut.down_crossing(e));
        for (const auto& e : f) CHECK(cut.up_crossing(e));
    }
    CHECK(t.size() <= k_gst_bound(glue_count(hook.tiles), 1));
}

TEST_CASE("no south-growing glues give empty entries") {
    const Tas flat = make_tas({make_tile("s", g("up"), g("a")), make_tile("a", g("up"), g("b"), {}, g("a")),
                               make_tile("z", g("up"), {}, {}, g("b"))},
                              {{{0, 0}, "s"}});
    Assembly strip = flat.seed;
    strip.place({1, 0}, 1);
    strip.place({2, 0}, 2);
    GlueSequenceTable t = init_gst(flat, strip, {0, 0, 0, 2}, 1);
    CHECK(t.domain().empty());
    t.backfill();
    for (const auto& [seq, f] : t.entries()) CHECK(f.empty());
    CHECK(t.relevant({g("zz"), S, {0, 1}}) == false);
}

TEST_CASE("table sizes stay under the bound on small systems") {
    std::mt19937_64 rng(5);
    int evaluated = 0, nonempty = 0;
    for (int trial = 0; trial < 30; ++trial) {
        // Up to six tiles over three labels, below a flat cut at y = 1.
        std::uniform_int_distribution<int> lab(0, 3), ntiles(2, 6);
        std::vector<TileType> tiles;
        const int nt = ntiles(rng);
        for (int i = 0; i < nt; ++i) {
            TileType t = make_tile("r" + std::to_string(i));
            for (Dir d : kDirs) {
                const int l = lab(rng);
                if (l > 0) t.glues[d] = g("q" + std::to_string(l), 1 + static_cast<int>(l == 1));
            }
            tiles.push_back(t);
        }
        Tas sys;
        sys.temperature = 2;
        sys.tiles = TileSet(tiles);
        Assembly strip;
        strip.place({0, 0}, 0);
        strip.place({3, 1}, 0);
        GstOptions o;
        o.max_placements = 2000;
        GlueSequenceTable t = init_gst(sys, strip, {1, 3, 1, 3}, 1, o);
        try {
            t.backfill();
        } catch (const NotDirected&) {
            continue;
        } catch (const BudgetExhausted&) {
            continue;
        }
        ++evaluated;
        CHECK(static_cast<double>(t.size()) <= k_gst_bound(glue_count(sys.tiles), 1));
        for (const auto& [seq, f] : t.entries()) {
            nonempty += !f.empty();
            CHECK(static_cast<int>(seq.size()) <= 4);
            for (const auto& e : f) CHECK(t.cut().up_crossing(e));
        }
    }
    CHECK(evaluated >= 10);
    CHECK(nonempty > 0);
    CHECK(k_gst_bound(3, 1) == doctest::Approx(256.0 * 24.0));
    CHECK(k_gst_bound(1000, 50) == std::numeric_limits<double>::max());
}

TEST_CASE("bungee strips match direct simulation and dips go through the table") {
    const Tas sys = bungee();
    const int k = strip_pitch(2, 1);
    REQUIRE(k == 10);
    const long cap = 120;
    const Assembly full = direct(sys, {0, 0, 5, static_cast<int>(cap)});
    StripState st = init_strips(sys, k, 2, cap);
    CHECK(st.tiles == direct(sys, {0, 0, 5, 2 * k}));
    std::size_t dips = 0;
    int updates = 0;
    while (st.top < cap) {
        const CutSpec used = st.cut;
        const bool more = update_assembly(st);
        ++updates;
        const int lo = (st.i - 2) * k;
        for (const auto& [p, t] : st.tiles.cells()) {
            CHECK(p.y >= lo);
            CHECK(full.at(p) == t);
        }
        // Everything attachable without growing above the strip is present.
        const Assembly window = direct(sys, {0, 0, 5, st.top});
        for (const auto& [p, t] : window.cells())
            if (p.y >= lo && !used.below(p)) CHECK(st.tiles.contains(p));
        dips += st.sigma.size();
        // Every answered sequence agrees with the full-assembly oracle.
        for (const auto& [seq, f] : st.gst->entries()) CHECK(f == oracle_entry(sys, full, st.gst->cut(), seq));
        if (!more || st.top >= cap) break;
        update_gst(st);
        CHECK(st.cut.lowest() > used.highest());
        CHECK(st.live_cells() <= 8u * 4u * static_cast<unsigned>(k));
    }
    CHECK(updates >= 9);
    CHECK(dips >= 3);
    // A dip through the table: the ascender tile right above a cut is
    // placed only through the table's answer.
    const auto r = characteristic_r_prime(sys, {cap, {{1, 0}}, {{{{1, 0}, "T8"}}}}, 2);
    CHECK(r.bit == (cap % 14 == 8 ? 1 : 0));
    CHECK(r.lookups >= 3);
    CHECK(r.f_prime == 3);
    CHECK(r.peak_cells <= 8u * static_cast<std::size_t>(r.f_prime) * static_cast<std::size_t>(r.k));
    for (long n = 30; n <= 90; n += 7) {
        const auto q = characteristic_r_prime(sys, {n, {{1, 0}}, {{{{1, 0}, "T" + std::to_string(n % 14)}}}}, 2);
        CHECK(q.bit == 1);
        CHECK(q.observed.at({1, 0}) == sys.tiles[full.at({1, static_cast<int>(n)})].name);
    }
}

TEST_CASE("table answers match tables built from the full assembly") {
    const Tas sys = bungee();
    const Assembly full = direct(sys, {0, 0, 5, 100});
    StripState st = init_strips(sys, 10, 2, 100);
    while (st.top < 100) {
        if (!update_assembly(st) || st.top >= 100) break;
        update_gst(st);
        // A fresh table over everything below the same cut, evaluated on
        // the entries the pipeline asked for.
        const CutSpec cut = st.cut;
        Assembly below;
        for (const auto& [p, t] : full.cells())
            if (cut.below(p) && p.y >= 0) below.place(p, t);
        for (const auto& [p, t] : st.tiles.cells())
            if (!cut.below(p)) below.place(p, t);
        GlueSequenceTable fresh = init_gst(sys, below, cut, 2);
        for (const auto& [seq, f] : st.gst->entries()) CHECK(fresh.lookup(seq) == f);
    }
}

TEST_CASE("identity counter tables are stationary") {
    const auto c = compile_counter(5, 0);
    StripState st = init_strips(c.sys, 5, 1, 30);
    while (st.top < 30) {
        if (!update_assembly(st) || st.top >= 30) break;
        CHECK(st.sigma.empty());
        update_gst(st);
        CHECK(st.phantoms.empty());
        CHECK(st.gst->lookup({}).empty());
        CHECK(st.cut.y_left == st.cut.y_right);
    }
}

TEST_CASE("a table over the same cut keeps the previous answers") {
    const Tas sys = bungee();
    StripState st = init_strips(sys, 10, 2, 200);
    for (int i = 0; i < 3; ++i) {
        update_assembly(st);
        update_gst(st);
    }
    update_assembly(st);
    const auto before = st.phantoms;
    const CutSpec same = st.cut;
    const auto older = st.gst;
    update_gst(st, same);
    CHECK(st.cut == same);
    CHECK(st.gst->older() == older);
    CHECK_FALSE(older->frozen());
    // Nothing lies between the two cuts, so the inherited glues pass through.
    for (const auto& e : st.phantoms) CHECK(before.count(e));
    for (const auto& [seq, f] : older->entries()) CHECK(older->lookup(seq) == f);
    CHECK(older->older()->frozen());
}

TEST_CASE("deep dependency below the cut is reported") {
    const int w = 6, top = 12;
    std::vector<TileType> t;
    for (int x = 0; x <= w; ++x) {
        TileType s = make_tile("s" + std::to_string(x));
        if (x < w) s.glues[E] = g("s" + std::to_string(x + 1));
        if (x > 0) s.glues[W] = g("s" + std::to_string(x));
        if (x == 0) s.glues[N] = g("a1");
        if (x == w) s.glues[N] = g("b1");
        t.push_back(s);
    }
    for (int h = 1; h <= top; ++h) {
        TileType a = make_tile("a" + std::to_string(h), {}, {}, g("a" + std::to_string(h)));
        TileType b = make_tile("b" + std::to_string(h), {}, {}, g("b" + std::to_string(h)));
        if (h < top) a.glues[N] = g("a" + std::to_string(h + 1)), b.glues[N] = g("b" + std::to_string(h + 1));
        if (h == top) a.glues[E] = g("r1");
        t.push_back(a);
        t.push_back(b);
    }
    for (int x = 1; x < w; ++x) {
        TileType r = make_tile("r" + std::to_string(x), {}, {}, {}, g("r" + std::to_string(x)));
        if (x < w - 1) r.glues[E] = g("r" + std::to_string(x + 1));
        if (x == 3) r.glues[S] = g("m" + std::to_string(top - 1));
        t.push_back(r);
    }
    for (int y = top - 1; y >= 1; --y) {
        TileType m = make_tile("m" + std::to_string(y), g("m" + std::to_string(y)));
        if (y > 1) m.glues[S] = g("m" + std::to_string(y - 1));
        t.push_back(m);
    }
    std::vector<std::pair<Point, std::string>> seed;
    for (int x = 0; x <= w; ++x) seed.push_back({{x, 0}, "s" + std::to_string(x)});
    const Tas sys = make_tas(t, seed);
    const int k = strip_pitch(1, 1);
    CHECK_THROWS_AS(
        {
            StripState st = init_strips(sys, k, 1, 40);
            while (update_assembly(st)) update_gst(st);
        },
        ClaimViolation);
    CharacteristicPrimeSpec sp{40, {{0, 0}}, {}};
    CHECK_THROWS_AS(characteristic_r_prime(sys, sp, 1), ClaimViolation);
}

TEST_CASE("r' reduces to r for identity scaling") {
    const auto run = [](const Tas& t_sys, const std::set<std::string>& marked, long rows) {
        const auto sc = scale_system(t_sys, 1);
        CharacteristicSpec spec;
        spec.marked = marked;
        for (long n = 0; n < rows; ++n) {
            CharacteristicPrimeSpec sp{n, {{0, 0}}, {}};
            for (const auto& m : marked) sp.C_n.push_back({{{0, 0}, macro_mark(m) + ":0,0"}});
            const auto r = characteristic_r_prime(sc.sys, sp, 1);
            INFO("n = " << n);
            CHECK(r.bit == characteristic_r(t_sys, spec, n).bit);
            CHECK(r.peak_cells <= 8u * static_cast<std::size_t>(r.f_prime) * static_cast<std::size_t>(r.k));
        }
    };
    const auto c = compile_counter(4, 0);
    std::set<std::string> ones;
    for (const auto& t : c.sys.tiles.tiles())
        if (t.name.find('1') != std::string::npos) ones.insert(t.name);
    run(c.sys, ones, c.rows);

    std::mt19937_64 rng(23);
    for (int i = 0; i < 12; ++i) {
        auto tm = fixture::random_tm(rng, 2 + i % 3, i % 2 ? Tape::OneWayLeft : Tape::OneWayRight);
        CompiledTm ct = compile_tm(tm, fixture::random_input(rng, 4), 8, 25);
        std::set<std::string> marked;
        std::bernoulli_distribution coin(0.5);
        for (const auto& t : ct.sys.tiles.tiles())
            if (coin(rng)) marked.insert(t.name);
        run(ct.sys, marked, ct.rows());
    }
}

TEST_CASE("r' on scaled counters matches direct simulation") {
    for (int m : {2, 3}) {
        const auto c = compile_counter(m == 2 ? 4 : 3, 0);
        const auto sc = scale_system(c.sys, m);
        const Assembly full = direct(sc.sys, scale_window({-2, -2, 6, static_cast<int>(c.rows) + 2}, m));
        std::set<std::string> marked;
        for (const auto& t : c.sys.tiles.tiles())
            if (t.name.find('1') != std::string::npos) marked.insert(t.name);
        CharacteristicSpec spec;
        spec.marked = marked;
        for (long b = 0; b < c.rows; ++b) {
            const auto sp = block_spec(sc.sys.tiles, marked, m, b);
            const auto r = characteristic_r_prime(sc.sys, sp, m);
            INFO("m = " << m << ", block row " << b);
            CHECK(r.bit == block_bit(sc.sys.tiles, full, marked, m, b));
            CHECK(r.bit == characteristic_r(c.sys, spec, b).bit);
            CHECK(r.peak_cells <= 8u * static_cast<std::size_t>(r.f_prime) * static_cast<std::size_t>(r.k));
        }
    }
}

TEST_CASE("peak memory does not grow with n") {
    const auto c = compile_counter(6, 0);
    const auto sc = scale_system(c.sys, 2);
    std::set<std::string> marked{c.sys.tiles[0].name};
    const auto small = characteristic_r_prime(sc.sys, block_spec(sc.sys.tiles, marked, 2, 20), 2);
    const auto large = characteristic_r_prime(sc.sys, block_spec(sc.sys.tiles, marked, 2, 60), 2);
    CHECK(large.strips > small.strips);
    CHECK(large.f_prime == small.f_prime);
    CHECK(large.peak_cells <= small.peak_cells + small.peak_cells / 4);
}

TEST_CASE("prime spec round trips through json") {
    CharacteristicPrimeSpec sp{7, {{0, 0}, {1, -1}}, {{{{0, 0}, "a"}, {{1, -1}, "b"}}, {}}};
    const auto back = prime_spec_from_json(prime_spec_to_json(sp));
    CHECK(back.n == 7);
    CHECK(back.L == sp.L);
    CHECK(back.C_n == sp.C_n);
    CHECK(template_height(sp.L) == 2);
    CHECK_THROWS_AS(prime_spec_from_json(nlohmann::json::parse(R"({"n":1,"L":[],"C_n":[]})")), InputError);
    CHECK_THROWS_AS(prime_spec_from_json(nlohmann::json::parse(R"({"n":1,"L":[{"dx":0,"dy":0}],"C_n":[[{"dx":2,"dy":0,"tile":"a"}]]})")),
                    InputError);
}
