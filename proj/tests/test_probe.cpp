#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <random>

#include "atam/construction.hpp"
#include "atam/probe.hpp"
#include "probe_fixtures.hpp"

using namespace atam;

namespace {

Assembly shape_of(const std::vector<Point>& pts, int tile = 0) {
    Assembly a;
    for (Point p : pts) a.place(p, tile);
    return a;
}

// Per-point search: can p leave through empty hull cells to below everything?
std::set<Point> boundary_oracle(const Assembly& a) {
    const Box b = a.bounds();
    std::set<int> cols;
    for (const auto& [p, t] : a.cells()) cols.insert(p.x);
    std::set<Point> out;
    for (const auto& [start, t] : a.cells()) {
        std::set<Point> seen{start};
        std::deque<Point> q{start};
        bool found = false;
        while (!q.empty() && !found) {
            const Point p = q.front();
            q.pop_front();
            for (Dir d : kDirs) {
                const Point r = p.step(d);
                if (!cols.count(r.x) || r.y > b.y1 + 2 || a.contains(r) || seen.count(r)) continue;
                if (r.y < b.y0) {
                    found = true;
                    break;
                }
                seen.insert(r);
                q.push_back(r);
            }
        }
        if (found) out.insert(start);
    }
    return out;
}

Assembly random_connected(std::mt19937_64& rng, int cells) {
    Assembly a;
    a.place({0, 0}, 0);
    std::vector<Point> pts{{0, 0}};
    std::uniform_int_distribution<int> dir(0, 3);
    while (static_cast<int>(a.size()) < cells) {
        const Point p = pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)].step(kDirs[dir(rng)]);
        if (a.contains(p)) continue;
        a.place(p, 0);
        pts.push_back(p);
    }
    return a;
}

bool king_connected(const std::vector<Point>& pts) {
    if (pts.empty()) return true;
    const std::set<Point> in(pts.begin(), pts.end());
    std::set<Point> seen{pts.front()};
    std::deque<Point> q{pts.front()};
    while (!q.empty()) {
        const Point p = q.front();
        q.pop_front();
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                const Point r{p.x + dx, p.y + dy};
                if (in.count(r) && seen.insert(r).second) q.push_back(r);
            }
    }
    return seen.size() == in.size();
}

// Vertical stack of `copies` units with an optional prefix on top.
Assembly stack(const std::vector<std::map<int, int>>& prefix, const std::vector<std::map<int, int>>& unit, int rows) {
    Assembly a;
    for (int r = 0; r < rows; ++r) {
        const auto& row = r < static_cast<int>(prefix.size()) ? prefix[r] : unit[(r - prefix.size()) % unit.size()];
        for (const auto& [dx, t] : row) a.place({dx, -r}, t);
    }
    return a;
}

struct Grown {
    Construction c;
    Assembly a;
};

const Grown& grown() {
    static const Grown g = [] {
        auto p = default_params();
        p.max_iteration = 3;
        Grown out{build_construction(p), {}};
        Grower gr(out.c.sys, out.c.window, Policy::lexmin());
        gr.run(SIZE_MAX);
        out.a = gr.assembly();
        return out;
    }();
    return g;
}

}  // namespace

TEST_CASE("southern boundary of simple shapes") {
    const auto row = shape_of({{0, 0}, {1, 0}, {2, 0}});
    CHECK(southern_boundary(row) == std::vector<Point>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(southern_boundary(shape_of({{4, 7}})) == std::vector<Point>{{4, 7}});
    CHECK(southern_boundary(Assembly{}).empty());

    // Cap with two legs: the legs and the underside of the cap, not the top.
    const auto cap = shape_of({{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {3, 2}, {3, 1}, {3, 0}, {1, 3}});
    const auto sb = southern_boundary(cap);
    const std::set<Point> got(sb.begin(), sb.end());
    CHECK(got == boundary_oracle(cap));
    CHECK(got.count({1, 2}));
    CHECK_FALSE(got.count({1, 3}));

    // Cup with a shelf inside: the shelf cannot see below.
    const auto cup = shape_of({{0, 3}, {0, 2}, {0, 1}, {0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2}, {3, 3}, {1, 2}});
    const auto cb = southern_boundary(cup);
    const std::set<Point> cup_got(cb.begin(), cb.end());
    CHECK(cup_got == boundary_oracle(cup));
    CHECK_FALSE(cup_got.count({1, 2}));
    CHECK_FALSE(cup_got.count({0, 3}));
    CHECK(cup_got.count({2, 0}));
}

TEST_CASE("southern boundary matches the per-point oracle") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const Assembly a = random_connected(rng, 2 + trial % 25);
        const auto sb = southern_boundary(a);
        const std::set<Point> got(sb.begin(), sb.end());
        CHECK(got == boundary_oracle(a));
        for (Point p : sb) CHECK(a.contains(p));
        CHECK(std::is_sorted(sb.begin(), sb.end(), [](Point x, Point y) { return std::tie(x.x, x.y) < std::tie(y.x, y.y); }));
        CHECK(king_connected(sb));
    }
}

TEST_CASE("arm shapes") {
    const auto one = stack({}, {{{0, 5}}}, 9);
    const ArmShape s1 = arm_shape(one);
    CHECK(s1.prefix.empty());
    CHECK(s1.period.size() == 1);

    const auto aperiodic = stack({{{0, 1}}, {{0, 2}}, {{0, 3}}, {{0, 4}}, {{0, 5}}}, {{}}, 5);
    const ArmShape s2 = arm_shape(aperiodic);
    CHECK_FALSE(s2.periodic());
    CHECK(s2.prefix.size() == 5);

    // A 3-wide unit of four rows under a two-row head, cut off mid-unit.
    const std::vector<std::map<int, int>> unit{{{0, 1}, {1, 2}}, {{1, 3}}, {{1, 3}, {2, 4}}, {{0, 6}, {2, 6}}};
    const std::vector<std::map<int, int>> head{{{0, 9}, {1, 9}, {2, 9}}, {{1, 8}}};
    const ArmShape s3 = arm_shape(stack(head, unit, 2 + 4 * 5 + 2));
    CHECK(s3.prefix == head);
    CHECK(s3.period == unit);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> tile(0, 2), len(1, 4), hd(0, 3);
        std::vector<std::map<int, int>> u(len(rng)), h(hd(rng));
        for (auto& r : u) r[0] = tile(rng), r[1] = tile(rng);
        for (auto& r : h) r[0] = 3 + tile(rng);
        const Assembly col = stack(h, u, static_cast<int>(h.size() + u.size() * 3 + 1));
        const ArmShape s = arm_shape(col);
        // The decomposition reproduces the column and is a fixed point.
        const Box b = col.bounds();
        const Assembly back = s.extend({b.x0, b.y1}, b.height());
        CHECK(back == col);
        CHECK(arm_shape(back) == s);
        CHECK(s.prefix.size() + s.period.size() <= h.size() + u.size());
    }
}

TEST_CASE("probe dodgers") {
    std::vector<ArmShape> shapes;
    for (int dx = 0; dx < 4; ++dx) shapes.push_back(arm_shape(stack({}, {{{dx, 7}}}, 3), 0));
    CHECK(probe_dodgers(Assembly{}, shapes, 0) == shapes);

    Assembly full;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y) full.place({x, y}, 1);
    CHECK(probe_dodgers(full, shapes, 0).empty());

    // One free column at x = 2.
    Assembly channel = full;
    for (int y = 0; y < 3; ++y) channel.erase({2, y});
    const auto d = probe_dodgers(channel, shapes, 0);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == shapes[2]);
    // Shifted by one, the easternmost shape also clears the probes.
    const auto shifted = probe_dodgers(channel, shapes, 1);
    CHECK(shifted == std::vector<ArmShape>{shapes[1], shapes[3]});

    // More probe tiles never let more shapes through.
    std::mt19937_64 rng(12);
    std::vector<ArmShape> wide;
    for (int i = 0; i < 12; ++i) {
        std::vector<std::map<int, int>> u(1 + i % 3);
        for (auto& r : u) r[static_cast<int>(rng() % 5)] = 1;
        wide.push_back(arm_shape(stack({}, u, static_cast<int>(u.size() * 2)), 0));
    }
    for (int trial = 0; trial < 50; ++trial) {
        Assembly small, big;
        for (int k = 0; k < 6; ++k) {
            const Point p{static_cast<int>(rng() % 6), static_cast<int>(rng() % 8)};
            small.place(p, 1);
            big.place(p, 1);
        }
        for (int k = 0; k < 4; ++k) big.place({static_cast<int>(rng() % 6), static_cast<int>(rng() % 8)}, 1);
        // Same frame for both: pin the corners.
        for (Point p : {Point{0, 0}, Point{5, 7}}) small.place(p, 1), big.place(p, 1);
        const auto ds = probe_dodgers(small, wide, 0), db = probe_dodgers(big, wide, 0);
        for (const auto& s : db) CHECK(std::find(ds.begin(), ds.end(), s) != ds.end());
    }
}

TEST_CASE("signatures compare structurally") {
    Signature a, b;
    a.row.place({0, 0}, 1);
    b.row.place({0, 0}, 1);
    CHECK(a == b);
    b.dodgers.push_back(arm_shape(stack({}, {{{0, 1}}}, 2)));
    CHECK_FALSE(a == b);
}

TEST_CASE("probe sets are validated") {
    ProbeSet p;
    p.left.place({0, 0}, 0);
    p.right.place({0, 0}, 0);
    p.gap = {1, 0};
    CHECK_THROWS_AS(p.validate(), InvalidProbes);
    p.right = Assembly{};
    p.gap = {0, 0};
    CHECK_THROWS_AS(p.validate(), InvalidProbes);
}

TEST_CASE("arm types from the empty subiterations") {
    const auto& g = grown();
    int empties = 0;
    for (const auto& r : g.c.reports) {
        if (!r.is_empty) continue;
        ++empties;
        for (int m : {1, 2}) {
            INFO("iteration " << r.i << ", m = " << m);
            const auto f = fixture::probe_fixture(g.c, g.a, r, m);
            const auto e = enumerate_arm_types(f.probes, f.U, m, f.t.temperature, f.query);
            CHECK(e.E.size() <= f.U.size());
            CHECK(e.E.count(f.true_arm));
            CHECK(e.exhausted == 0);
            for (const auto& t : e.E) CHECK(f.query.arm_tiles.count(t));
            // At m = 1 the gap touches the right probe, so its boundary tiles queue up.
            if (m == 1) CHECK_FALSE(e.queue.empty());
            for (Point p : e.queue) CHECK(f.probes.right.contains(p));

            const auto closed = fixture::probe_fixture(g.c, g.a, r, m, true);
            const auto none = enumerate_arm_types(closed.probes, closed.U, m, closed.t.temperature, closed.query);
            CHECK(none.E.empty());
        }
    }
    CHECK(empties == 3);
}

TEST_CASE("a tile with no matching glues contributes nothing") {
    Tas t;
    t.tiles = TileSet({make_tile("lone", {"x", 2}), make_tile("ARM:1", {"ARM:1", 2}, {}, {"ARM:1", 2})});
    ProbeSet p;
    p.left.place({-1, 0}, 0);
    p.gap = {0, 0};
    ArmQuery q;
    q.repr.m = 1;
    q.repr.rule = BlockRepr::Rule::Table;
    q.repr.table = {{{{std::string("ARM:1")}}, "ARM:1"}};
    q.arm_tiles = {"ARM:1"};
    const auto e = enumerate_arm_types(p, t.tiles, 1, 2, q);
    CHECK_FALSE(e.by_tile[0].has_value());
    CHECK(e.by_tile[1] == std::optional<std::string>("ARM:1"));
    CHECK(e.E.size() == 1);
    q.parallel = true;
    CHECK(enumerate_arm_types(p, t.tiles, 1, 2, q).E == e.E);
}
