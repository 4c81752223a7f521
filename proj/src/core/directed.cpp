#include "atam/core.hpp"

#include <unordered_set>

namespace atam {

std::string local_determinism_failure(const Tas& sys, const AssemblySequence& seq,
                                      const Box& window) {
    const TileSet& ts = sys.tiles;
    const Assembly alpha = seq.result();
    if (!frontier(sys, alpha, window).empty()) return "assembly is not terminal within the window";

    std::unordered_map<Point, long, PointHash> when;
    for (const auto& [p, t] : seq.seed.cells()) when[p] = -1;
    for (std::size_t i = 0; i < seq.steps.size(); ++i) when[seq.steps[i].loc] = static_cast<long>(i);

    // Input sides of every placed (non-seed) location.
    std::unordered_map<Point, unsigned, PointHash> in;
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        const auto& st = seq.steps[i];
        unsigned mask = 0;
        int sum = 0;
        for (Dir d : kDirs) {
            Point q = st.loc.step(d);
            auto it = when.find(q);
            if (it == when.end() || it->second >= static_cast<long>(i)) continue;
            int s = bond_strength(ts, st.tile, d, alpha.at(q));
            if (s > 0) {
                mask |= 1u << d;
                sum += s;
            }
        }
        if (sum != sys.temperature)
            return "tile " + ts[st.tile].name + " at (" + std::to_string(st.loc.x) + "," +
                   std::to_string(st.loc.y) + ") binds with strength " + std::to_string(sum);
        in[st.loc] = mask;
    }

    std::vector<int> acc(ts.size(), 0);
    std::vector<int> touched;
    auto competitor = [&](const Placement& st, unsigned skip) -> int {
        touched.clear();
        for (Dir d : kDirs) {
            if (skip & (1u << d)) continue;
            int nb = alpha.at(st.loc.step(d));
            if (nb < 0) continue;
            int gid = ts.glue_id(nb, opposite(d));
            if (gid < 0) continue;
            for (int t : ts.tiles_with(d, gid)) {
                if (acc[t] == 0) touched.push_back(t);
                acc[t] += ts.glue_strength(gid);
            }
        }
        int bad = -1;
        for (int t : touched) {
            if (t != st.tile && acc[t] >= sys.temperature && bad < 0) bad = t;
            acc[t] = 0;
        }
        return bad;
    };
    // Sides of `from` whose neighbor transitively used `from` as an input.
    auto descendant_sides = [&](Point from) {
        unsigned want = 0, found = 0;
        for (Dir d : kDirs)
            if (alpha.contains(from.step(d))) want |= 1u << d;
        std::unordered_map<Point, char, PointHash> seen{{from, 1}};
        std::vector<Point> stack{from};
        while (!stack.empty() && found != want) {
            const Point u = stack.back();
            stack.pop_back();
            for (Dir d : kDirs) {
                const Point v = u.step(d);
                auto it = in.find(v);
                if (it == in.end() || !(it->second & (1u << opposite(d))) || seen.count(v)) continue;
                seen[v] = 1;
                stack.push_back(v);
                for (Dir e : kDirs)
                    if (from.step(e) == v) found |= 1u << e;
            }
        }
        return found;
    };
    for (const auto& st : seq.steps) {
        // Neighbors that used this tile as an input are ignored.
        unsigned skip = 0;
        for (Dir d : kDirs) {
            auto it = in.find(st.loc.step(d));
            if (it != in.end() && (it->second & (1u << opposite(d)))) skip |= 1u << d;
        }
        int bad = competitor(st, skip);
        // So are later tiles that depend on this one through a longer chain:
        // none of them can be present while this location is still empty.
        if (bad >= 0) bad = competitor(st, skip | descendant_sides(st.loc));
        if (bad >= 0)
            return "tile " + ts[bad].name + " could also bind at (" + std::to_string(st.loc.x) + "," +
                   std::to_string(st.loc.y) + ")";
    }
    return {};
}

namespace {

DirectednessVerdict witness_from_conflict(const Tas& sys, const Grower& g) {
    DirectednessVerdict v;
    v.kind = DirectednessVerdict::Kind::NotDirected;
    v.method = "witness";
    const Conflict& c = *g.conflict();
    v.witness_loc = c.loc;
    v.tile_a = c.tile_a;
    v.tile_b = c.tile_b;
    AssemblySequence a;
    a.seed = sys.seed;
    a.steps.assign(g.order().begin(), g.order().begin() + static_cast<long>(c.step));
    AssemblySequence b = a;
    a.steps.push_back({c.loc, c.tile_a});
    b.steps.push_back({c.loc, c.tile_b});
    v.seq_a = std::move(a);
    v.seq_b = std::move(b);
    v.reason = "two tile types attachable at one location";
    return v;
}

}  // namespace

DirectednessVerdict is_directed_within(const Tas& sys, const Box& window,
                                       const DirectedLimits& limits) {
    DirectednessVerdict v;
    ExploreLimits el;
    el.max_states = limits.max_states;
    el.parallel = limits.parallel;
    ExploreResult ex = explore(sys, window, el);
    v.states = ex.states;
    if (ex.split) {
        v.kind = DirectednessVerdict::Kind::NotDirected;
        v.method = "exhaustive";
        v.witness_loc = *ex.split_loc;
        v.seq_a = ex.split->first;
        v.seq_b = ex.split->second;
        v.tile_a = v.seq_a->steps.back().tile;
        v.tile_b = v.seq_b->steps.back().tile;
        v.reason = "two producible assemblies disagree at one location";
        return v;
    }
    if (!ex.exhausted) {
        v.kind = DirectednessVerdict::Kind::Directed;
        v.method = "exhaustive";
        return v;
    }

    // Exploration was cut short: hunt for a witness over many interleavings,
    // then try to certify local determinism of a canonical terminal sequence.
    std::unordered_set<std::uint64_t> distinct;
    Grower ref(sys, window, Policy::lexmin());
    ref.run(SIZE_MAX);
    distinct.insert(ref.order_hash());
    if (ref.conflict()) return witness_from_conflict(sys, ref);

    std::vector<Policy> policies{Policy::lexmax(), Policy::fifo()};
    for (std::size_t r = 0; r < limits.interleavings; ++r)
        policies.push_back(Policy::random(limits.seed * 0x9e3779b97f4a7c15ULL + r));

    Grower g(sys, window, Policy::lexmin());
    for (const auto& pol : policies) {
        g.reset(pol);
        g.run(SIZE_MAX);
        distinct.insert(g.order_hash());
        if (g.conflict()) {
            auto w = witness_from_conflict(sys, g);
            w.states = v.states;
            w.interleavings = distinct.size();
            return w;
        }
        for (const auto& pl : g.order()) {
            if (ref.at(pl.loc) == pl.tile) continue;
            v.kind = DirectednessVerdict::Kind::NotDirected;
            v.method = "witness";
            v.witness_loc = pl.loc;
            v.tile_a = ref.at(pl.loc);
            v.tile_b = pl.tile;
            AssemblySequence a, b;
            a.seed = b.seed = sys.seed;
            a.steps = ref.order();
            b.steps = g.order();
            v.seq_a = std::move(a);
            v.seq_b = std::move(b);
            v.reason = "two terminal assemblies differ";
            v.interleavings = distinct.size();
            return v;
        }
        if (g.placed() != ref.placed()) {
            v.kind = DirectednessVerdict::Kind::Inconclusive;
            v.reason = "interleavings reached different sizes";
            v.interleavings = distinct.size();
            return v;
        }
    }
    v.interleavings = distinct.size();

    AssemblySequence canon;
    canon.seed = sys.seed;
    canon.steps = ref.order();
    std::string why = local_determinism_failure(sys, canon, window);
    if (why.empty()) {
        v.kind = DirectednessVerdict::Kind::Directed;
        v.method = "certificate";
        return v;
    }
    v.kind = DirectednessVerdict::Kind::Inconclusive;
    v.reason = "exploration budget reached; " + why;
    return v;
}

}  // namespace atam
