#include <algorithm>
#include <limits>

#include "atam/io.hpp"
#include "context.hpp"
#include "sim.hpp"

namespace atam {

using detail::floor_div;
using detail::show;

namespace {

void track(StripState& st, Point p) {
    if (p.y >= 0 && p.y <= st.cap) st.extent.include(p);
}

void note_peak(StripState& st, std::size_t extra = 0) {
    st.peak_cells = std::max(st.peak_cells, st.live_cells() + extra);
    if (st.gst) st.max_entries = std::max(st.max_entries, st.gst->size());
}

}  // namespace

std::size_t StripState::live_cells() const {
    std::size_t n = tiles.size() + phantoms.size();
    for (auto g = gst.get(); g; g = g->older().get()) n += g->retained_cells() + g->peak_work();
    return n;
}

StripState init_strips(const Tas& sys, int k, int c, long cap, const GstOptions& opts) {
    StripState st;
    st.sys = std::make_shared<const Tas>(sys);
    st.k = k;
    st.c = c;
    st.cap = cap;
    st.opts = opts;
    const int hi = static_cast<int>(std::min<long>(2L * k, cap));
    st.tiles = grow_below(sys, hi, opts);
    st.top = hi;
    for (const auto& [p, t] : st.tiles.cells()) track(st, p);
    note_peak(st);
    if (cap <= 2L * k) return st;
    st.cut = find_cut(sys, st.tiles, k, c, 1);
    st.gst = std::make_shared<GlueSequenceTable>(init_gst(sys, st.tiles, st.cut, c, opts));
    const auto& f = st.gst->lookup({});
    st.phantoms.insert(f.begin(), f.end());
    note_peak(st);
    return st;
}

bool update_assembly(StripState& st) {
    if (!st.gst) throw std::logic_error("update_assembly: no table; the strips already reach the cap");
    const Tas& sys = *st.sys;
    const int k = st.k, c = st.c;
    ++st.i;
    const int lo = (st.i - 2) * k;
    const int hi = static_cast<int>(std::min<long>(static_cast<long>(st.i) * k, st.cap));
    std::vector<Point> drop;
    for (const auto& [p, t] : st.tiles.cells())
        if (p.y < lo) drop.push_back(p);
    for (Point p : drop) st.tiles.erase(p);

    detail::Sim sim(sys, st.tiles, st.opts.max_placements);
    for (const auto& e : st.phantoms) sim.expose(e);
    const CutSpec cut = st.cut;
    auto in = [&](Point p) { return !cut.below(p) && p.y <= hi; };
    const int claim_y = (st.i - 1) * k + 1 - (c * c + 2 * c + 2);
    const int bl = floor_div(cut.x_left, c), br = floor_div(cut.x_right, c);
    std::set<Point> work = sim.frontier(in);
    sim.saturate(work, in, [&](Point p, int t) {
        const int bx = floor_div(p.x, c);
        if (p.y <= claim_y && bx > bl && bx < br)
            throw ClaimViolation("tile " + sys.tiles[t].name + " attached at " + show(p) +
                                 " between the cut's end blocks, at or below row " + std::to_string(claim_y));
        track(st, p);
        for (const auto& ev : sim.events(p, t)) {
            if (!cut.down_crossing(ev) || sim.occupied(ev.target()) || !st.gst->relevant(ev)) continue;
            st.sigma.push_back(ev);
            ++st.lookups;
            for (const auto& g : st.gst->lookup(st.sigma))
                if (st.phantoms.insert(g).second && sim.expose(g)) work.insert(g.target());
        }
        note_peak(st, sim.added().size());
    });
    for (const auto& [p, t] : sim.added().cells()) st.tiles.place(p, t);
    st.top = hi;
    note_peak(st);
    if (hi >= st.cap) return false;

    detail::Sim probe(sys, st.tiles, 0);
    for (const auto& e : st.phantoms) probe.expose(e);
    for (const auto& [p, t] : st.tiles.cells()) {
        if (p.y != hi) continue;
        const Point q = p.step(N);
        if (!probe.occupied(q) && probe.attachable(q) >= 0) return true;
    }
    for (const auto& e : st.phantoms)
        if (e.target().y == hi + 1 && !probe.occupied(e.target()) && probe.attachable(e.target()) >= 0) return true;
    return false;
}

void update_gst(StripState& st, const std::optional<CutSpec>& forced) {
    if (!st.gst) throw std::logic_error("update_gst: no table to extend");
    const CutSpec next = forced ? *forced : find_cut(*st.sys, st.tiles, st.k, st.c, st.i - 1);
    auto cx = std::make_shared<GlueSequenceTable::Context>();
    cx->sys = st.sys;
    for (const auto& [p, t] : st.tiles.cells())
        if (p.y >= st.cut.lowest() && p.y <= next.highest() + 1) cx->snapshot.place(p, t);
    cx->base_phantoms.assign(st.phantoms.begin(), st.phantoms.end());
    cx->base_sigma = st.sigma;
    cx->cut = next;
    cx->floor = st.cut;
    cx->c = st.c;
    cx->opts = st.opts;
    if (st.gst->older()) st.gst->older()->freeze();
    auto table = std::make_shared<GlueSequenceTable>(cx, st.gst);
    st.cut = next;
    st.gst = table;
    st.sigma.clear();
    const auto& f = table->lookup({});
    st.phantoms = std::set<GlueEvent>(f.begin(), f.end());
    note_peak(st);
}

int template_height(const std::vector<Point>& L) {
    int y0 = 0, y1 = 0;
    for (Point p : L) y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    return y1 - y0 + 1;
}

CharacteristicPrimeSpec prime_spec_from_json(const nlohmann::json& j) {
    try {
        CharacteristicPrimeSpec s;
        s.n = j.at("n").get<long>();
        if (s.n < 0) throw InputError("characteristic spec: n must be non-negative");
        std::set<Point> in_l;
        for (const auto& o : j.at("L")) {
            const Point p{o.at("dx").get<int>(), o.at("dy").get<int>()};
            if (!in_l.insert(p).second) throw InputError("characteristic spec: repeated offset in L");
            s.L.push_back(p);
        }
        if (s.L.empty()) throw InputError("characteristic spec: L is empty");
        for (const auto& cfg : j.at("C_n")) {
            std::map<Point, std::string> m;
            for (const auto& o : cfg) {
                const Point p{o.at("dx").get<int>(), o.at("dy").get<int>()};
                if (!in_l.count(p)) throw InputError("characteristic spec: C_n uses an offset outside L");
                m[p] = o.at("tile").get<std::string>();
            }
            s.C_n.push_back(std::move(m));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("characteristic spec: ") + e.what());
    }
}

nlohmann::json prime_spec_to_json(const CharacteristicPrimeSpec& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["L"] = nlohmann::json::array();
    for (Point p : s.L) j["L"].push_back({{"dx", p.x}, {"dy", p.y}});
    j["C_n"] = nlohmann::json::array();
    for (const auto& m : s.C_n) {
        nlohmann::json cfg = nlohmann::json::array();
        for (const auto& [p, name] : m) cfg.push_back({{"dx", p.x}, {"dy", p.y}, {"tile", name}});
        j["C_n"].push_back(cfg);
    }
    return j;
}

RPrimeReport characteristic_r_prime(const Tas& sys, const CharacteristicPrimeSpec& spec, int c,
                                    const GstOptions& opts) {
    if (c < 1) throw std::invalid_argument("characteristic_r_prime: c must be positive");
    const int k = strip_pitch(c, template_height(spec.L));
    if (spec.n > std::numeric_limits<int>::max() / 4) throw std::invalid_argument("characteristic_r_prime: n too large");
    StripState st = init_strips(sys, k, c, spec.n, opts);
    std::size_t strips = 1;
    bool grows = static_cast<bool>(st.gst);
    if (grows) {
        // Nothing to do when the first strips already stopped growing.
        detail::Sim probe(sys, st.tiles, 0);
        for (const auto& e : st.phantoms) probe.expose(e);
        grows = false;
        for (const auto& [p, t] : st.tiles.cells())
            if (p.y == st.top && !probe.occupied(p.step(N)) && probe.attachable(p.step(N)) >= 0) grows = true;
        for (const auto& e : st.phantoms)
            if (e.target().y == st.top + 1 && !probe.occupied(e.target()) && probe.attachable(e.target()) >= 0)
                grows = true;
    }
    while (grows && st.top < spec.n) {
        grows = update_assembly(st);
        ++strips;
        if (!grows || st.top >= spec.n) break;
        update_gst(st);
    }
    RPrimeReport r;
    r.k = k;
    for (Point o : spec.L) {
        const Point p{o.x, static_cast<int>(spec.n) + o.y};
        const int t = st.tiles.at(p);
        if (t >= 0) r.observed[o] = sys.tiles[t].name;
    }
    r.bit = std::find(spec.C_n.begin(), spec.C_n.end(), r.observed) != spec.C_n.end() ? 1 : 0;
    r.f_prime = st.extent.empty() ? 0 : st.extent.width();
    r.peak_cells = st.peak_cells;
    r.strips = strips;
    r.max_gst_entries = st.max_entries;
    r.lookups = st.lookups;
    return r;
}

}  // namespace atam
