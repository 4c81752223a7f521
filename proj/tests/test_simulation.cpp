#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atam/io.hpp"
#include "atam/simulation.hpp"
#include "atam/zigzag.hpp"
#include "sim_fixtures.hpp"
#include "tm_fixtures.hpp"

using namespace atam;

using namespace fixture;

TEST_CASE("identity table is the identity") {
    const Tas t = zigzag5();
    const BlockRepr r = identity_table(t.tiles);
    Grower gr(t, kWindow, Policy::lexmin());
    gr.run(SIZE_MAX);
    CHECK(apply_repr(r, t.tiles, t.tiles, gr.assembly()) == gr.assembly());
    CHECK(apply_repr(r, t.tiles, t.tiles, Assembly{}).empty());
    CHECK(check_clean(r, t.tiles, Assembly{}).clean);
}

TEST_CASE("repr json and monotonicity") {
    const Tas t = zigzag5();
    const auto r = identity_table(t.tiles);
    const BlockRepr back = repr_from_json(repr_to_json(r));
    CHECK(back.m == 1);
    CHECK(back.table.size() == r.table.size());
    CHECK(repr_to_json(back) == repr_to_json(r));

    // Two entries under a common superblock with different images.
    nlohmann::json bad = {{"m", 2},
                          {"rule", "table"},
                          {"table",
                           {{{"block", {{"x", nullptr}, {nullptr, nullptr}}}, {"maps_to", "A"}},
                            {{"block", {{nullptr, "y"}, {nullptr, nullptr}}}, {"maps_to", "B"}}}}};
    CHECK_THROWS_AS(repr_from_json(bad), InvalidRepr);
    bad["table"][1]["block"][0][0] = "z";  // now disjoint patterns
    CHECK_NOTHROW(repr_from_json(bad));
    CHECK_THROWS_AS(repr_from_json(nlohmann::json{{"m", 2}, {"rule", "grid"}}), InputError);
    CHECK_THROWS_AS(repr_from_json(nlohmann::json{{"m", 0}, {"rule", "prefix"}}), InvalidRepr);

    // Prefix blocks with two different marks are rejected when met.
    const Tas two = with_seed({make_tile("M[A]0"), make_tile("M[B]1")}, "M[A]0");
    BlockRepr pr;
    pr.m = 2;
    pr.rule = BlockRepr::Rule::Prefix;
    Assembly a;
    a.place({0, 0}, 0);
    a.place({1, 1}, 1);
    CHECK_THROWS_AS(apply_repr(pr, two.tiles, two.tiles, a), InvalidRepr);
    CHECK(decode_mark("M[A]3,1") == "A");
    CHECK(decode_mark("M[x[y]]0,0") == "x[y]");
    CHECK_FALSE(decode_mark("A"));
}

TEST_CASE("check_clean: fuzz next to a mapped block only") {
    const Tas t = zigzag5();
    const auto sc = scale_system(t, 2);
    const TileSet& s = sc.sys.tiles;
    const Tas fz = with_seed({make_tile("M[Z]"), make_tile("f")}, "M[Z]");
    BlockRepr pr;
    pr.m = 2;
    pr.rule = BlockRepr::Rule::Prefix;
    Assembly a;
    a.place({0, 0}, 0);
    a.place({2, 1}, 1);  // block (1, 0): beside the mapped block
    CHECK(check_clean(pr, fz.tiles, a).clean);
    a.place({2, 2}, 1);  // block (1, 1): diagonal only
    const auto rep = check_clean(pr, fz.tiles, a);
    CHECK_FALSE(rep.clean);
    REQUIRE(rep.violation);
    CHECK(*rep.violation == Point{1, 1});
    // A single nonempty block is always clean.
    Assembly lone;
    lone.place({5, 5}, 1);
    CHECK(check_clean(pr, fz.tiles, lone).clean);
    CHECK(check_clean(sc.repr, s, sc.sys.seed).clean);
}

TEST_CASE("scale_system: m = 1 is a renaming and images round trip") {
    const Tas t = zigzag5();
    const auto one = scale_system(t, 1);
    REQUIRE(one.sys.tiles.size() == t.tiles.size());
    for (std::size_t k = 0; k < t.tiles.size(); ++k) {
        CHECK(one.sys.tiles[k].name == macro_mark(t.tiles[k].name) + ":0,0");
        CHECK(one.sys.tiles[k].glues == t.tiles[k].glues);
    }
    for (int m : {1, 2, 3}) {
        const auto sc = scale_system(t, m);
        ExploreLimits lim;
        lim.keep_graph = true;
        const auto ex = explore(t, kWindow, lim);
        for (const auto& st : ex.graph.states) {
            Assembly a;
            for (const auto& pl : st) a.place(pl.loc, pl.tile);
            const Assembly big = expand_assembly(sc.sys.tiles, t.tiles, a, m);
            CHECK(big.size() == a.size() * m * m);
            CHECK(apply_repr(sc.repr, sc.sys.tiles, t.tiles, big) == a);
        }
    }
    CHECK_THROWS_AS(scale_system(t, 0), std::invalid_argument);
}

TEST_CASE("scale_system at m = 3 on a compiled machine decodes row by row") {
    const TuringMachine tm = fixture::unary_successor();
    const CompiledTm c = compile_tm(tm, symbols("111"), 16, 64);
    const auto sc = scale_system(c.sys, 3);
    Grower gt(c.sys, c.footprint, Policy::lexmin());
    gt.run(SIZE_MAX);
    for (auto pol : {Policy::lexmin(), Policy::lexmax(), Policy::random(7)}) {
        Grower gs(sc.sys, scale_window(c.footprint, 3), pol);
        gs.run(SIZE_MAX);
        REQUIRE_FALSE(gs.conflict());
        const Assembly img = apply_repr(sc.repr, sc.sys.tiles, c.sys.tiles, gs.assembly());
        CHECK(img == gt.assembly());
        for (long row = 0; row < c.rows(); ++row)
            CHECK(decode_row(c, img, row).tape == decode_row(c, gt.assembly(), row).tape);
    }
}

TEST_CASE("identity self-simulation passes every clause") {
    const Tas t = fork_tas();
    const auto v = check_simulation(t, t, identity_table(t.tiles), {0, 0, 4, 4});
    CHECK(v.passed);
    CHECK(v.bounded);
    CHECK(v.s_states == 5);
    for (auto f : {check_equiv_productions, check_follows, check_models, check_clean_all})
        CHECK(f(t, t, identity_table(t.tiles), {0, 0, 4, 4}, {}).passed);
}

TEST_CASE("scaled zig-zag simulates the original") {
    const Tas t = zigzag5();
    const auto sc = scale_system(t, 2);
    const auto v = check_simulation(sc.sys, t, sc.repr, kWindow);
    INFO(v.detail);
    CHECK(v.passed);
    CHECK_FALSE(v.inconclusive);
    CHECK(v.t_states == 30);
    CHECK(v.s_states > v.t_states);

    // One block of fuzz beside the arm keeps everything intact.
    const Tas fuzzy = reglue(sc.sys, "M[A]W:1,1", E, g("fz", 2), {make_tile("f1", {}, {}, {}, g("fz", 2))});
    const auto w = check_simulation(fuzzy, t, sc.repr, kWindow);
    INFO(w.detail);
    CHECK(w.passed);
}

TEST_CASE("scaled east ray simulates the original") {
    const Tas ray = with_seed({make_tile("O", {}, g("r", 2)), make_tile("R", {}, g("r", 2), {}, g("r", 2))}, "O");
    const auto sc = scale_system(ray, 2);
    const auto v = check_simulation(sc.sys, ray, sc.repr, kWindow);
    CHECK(v.passed);
    CHECK(v.t_states == 15);
}

TEST_CASE("scaled counter simulates the original") {
    const auto c = compile_counter(2, 0);
    const auto sc = scale_system(c.sys, 2);
    const auto v = check_simulation(sc.sys, c.sys, sc.repr, kWindow);
    INFO(v.detail);
    CHECK(v.passed);
}

TEST_CASE("broken simulators fail the expected clause") {
    const Tas t = zigzag5();
    const auto sc = scale_system(t, 2);

    SUBCASE("diagonal fuzz") {
        const Tas s = diagonal_fuzz().s;
        const auto v = check_simulation(s, t, sc.repr, kWindow);
        REQUIRE(v.failed_clause);
        CHECK(*v.failed_clause == Clause::CleanMapping);
        REQUIRE(v.witness.size() == 1);
        CHECK_FALSE(check_clean(sc.repr, s.tiles, replay(s, v.witness[0])).clean);
    }

    SUBCASE("rogue tile skips a step") {
        const Tas s = rogue_tile().s;
        const auto v = check_simulation(s, t, sc.repr, kWindow);
        REQUIRE(v.failed_clause);
        CHECK(*v.failed_clause == Clause::Follows);
        REQUIRE(v.witness.size() == 2);
        const Assembly a = apply_repr(sc.repr, s.tiles, t.tiles, replay(s, v.witness[0]));
        const Assembly b = apply_repr(sc.repr, s.tiles, t.tiles, replay(s, v.witness[1]));
        CHECK_FALSE(t_reachable(t, a, b));
    }

    SUBCASE("stranded representation") {
        const Broken b = stranded();
        const Tas& ft = b.t;
        const BlockRepr& pr = b.r;
        const Tas& s = b.s;
        const auto v = check_simulation(s, ft, pr, {0, 0, 4, 4});
        REQUIRE(v.failed_clause);
        CHECK(*v.failed_clause == Clause::Models);
        REQUIRE(v.witness.size() == 1);
        REQUIRE(v.t_witness.size() == 3);
        // The witness represents alpha and cannot reach the stuck successor.
        const Assembly w = replay(s, v.witness[0]);
        CHECK(apply_repr(pr, s.tiles, ft.tiles, w) == v.t_witness[0]);
        CHECK(w.at({1, 0}) == s.tiles.index("M[A]bad"));
        CHECK(check_models(s, ft, pr, {0, 0, 4, 4}).failed_clause == Clause::Models);
    }

    SUBCASE("dropped tile type") {
        const Tas chain = with_seed({make_tile("Z", {}, g("e", 2)), make_tile("A", {}, g("f", 2), {}, g("e", 2)),
                                     make_tile("C", {}, {}, {}, g("f", 2))},
                                    "Z");
        const BlockRepr r = identity_table(chain.tiles, "C");
        const auto v = check_simulation(chain, chain, r, {0, 0, 4, 4});
        REQUIRE(v.failed_clause);
        CHECK(*v.failed_clause == Clause::EquivProductions);
        CHECK(v.detail.find("terminal") != std::string::npos);
        REQUIRE(v.witness.size() == 1);
        CHECK(replay(chain, v.witness[0]).size() == 3);
        CHECK(check_follows(chain, chain, r, {0, 0, 4, 4}).passed);
        CHECK(check_models(chain, chain, r, {0, 0, 4, 4}).passed);
    }
}

TEST_CASE("budget exhaustion is inconclusive") {
    const Tas t = zigzag5();
    const auto sc = scale_system(t, 2);
    SimLimits lim;
    lim.max_states = 10;
    const auto v = check_simulation(sc.sys, t, sc.repr, kWindow, lim);
    CHECK(v.inconclusive);
    CHECK_FALSE(v.passed);
    CHECK_FALSE(v.failed_clause);
}

TEST_CASE("t_reachable") {
    const Tas t = fork_tas();
    Assembly a = t.seed, b = t.seed;
    b.place({1, 0}, t.tiles.index("A"));
    b.place({2, 0}, t.tiles.index("C"));
    CHECK(t_reachable(t, a, b));
    CHECK(t_reachable(t, b, b));
    CHECK_FALSE(t_reachable(t, b, a));
    Assembly c = t.seed;
    c.place({2, 0}, t.tiles.index("C"));
    CHECK_FALSE(t_reachable(t, a, c));
}
