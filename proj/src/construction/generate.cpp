#include <algorithm>
#include <map>

#include "atam/construction.hpp"
#include "machines.hpp"

namespace atam {

namespace {

using detail::SubLayout;

Dir dir_to(Point a, Point b) {
    for (Dir d : kDirs)
        if (a.step(d) == b) return d;
    throw std::logic_error("path points are not adjacent");
}

using Extras = std::map<Point, std::vector<std::pair<Dir, Glue>>>;

struct Emitter {
    std::vector<TileType> tiles;
    std::size_t placements = 1;  // the seed

    // A strength-2 chain of one-off tiles along pts, entered from `from`.
    void path(const std::string& ns, const std::vector<Point>& pts, Point from, const Glue& entry,
              const Extras& extras = {}) {
        if (pts.empty()) return;
        std::vector<std::array<Glue, 4>> g(pts.size());
        g[0][dir_to(pts[0], from)] = entry;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const Glue link{ns + "~" + std::to_string(k), 2};
            g[k - 1][dir_to(pts[k - 1], pts[k])] = link;
            g[k][dir_to(pts[k], pts[k - 1])] = link;
        }
        for (std::size_t k = 0; k < pts.size(); ++k) {
            auto it = extras.find(pts[k]);
            if (it != extras.end())
                for (const auto& [d, gl] : it->second) g[k][d] = gl;
            tiles.push_back(TileType{ns + std::to_string(k), g[k]});
        }
        placements += pts.size();
    }

    void add(std::vector<TileType> ts) {
        for (auto& t : ts) tiles.push_back(std::move(t));
    }
};

// Counter rows become planter columns: (x, y) -> (y, x).
std::array<Glue, 4> transpose(const std::array<Glue, 4>& g) {
    std::array<Glue, 4> t;
    t[E] = g[N];
    t[N] = g[E];
    t[W] = g[S];
    t[S] = g[W];
    return t;
}

// Emits one planter segment; returns the exit label on the east side of its
// bottom-right tile.
std::string planter_segment(Emitter& em, const SubLayout& L, const detail::Segment& s,
                            const std::string& entry) {
    const std::string ns = L.ns + "P/" + s.name + "/";
    const int h = L.height;
    const long width = s.x1 - s.x0 + 1;
    if (s.kind == detail::Segment::Counter) {
        const std::uint64_t top = std::uint64_t{1} << h;
        CounterOptions co;
        co.ns = ns;
        co.standalone = false;
        const CompiledCounter c = compile_counter(h, top - static_cast<std::uint64_t>(width), co);
        if (c.rows != width) throw std::logic_error("counter length mismatch");
        for (const auto& t : c.sys.tiles.tiles()) em.tiles.push_back(TileType{t.name, transpose(t.glues)});
        for (int q = 0; q < h; ++q) {
            std::array<Glue, 4> g;
            g[N] = c.row0_north[q];
            if (q == 0) g[S] = Glue{entry, 2};
            if (q > 0) g[W] = Glue{ns + "c0|" + std::to_string(q), 2};
            if (q + 1 < h) g[E] = Glue{ns + "c0|" + std::to_string(q + 1), 2};
            em.tiles.push_back(TileType{ns + "CTRIN" + std::to_string(q), transpose(g)});
        }
        em.placements += static_cast<std::size_t>(width) * h;
        return c.exit_label;
    }
    std::vector<Point> pts;
    for (long c = 0; c < width; ++c)
        for (int k = 0; k < h; ++k) pts.push_back({s.x0 + static_cast<int>(c), c % 2 == 0 ? k : h - 1 - k});
    Extras ex;
    for (const auto& [col, gl] : s.north) ex[{col, h - 1}].push_back({N, gl});
    const std::string out = ns + "out";
    ex[pts.back()].push_back({E, Glue{out, 2}});
    em.path(ns, pts, {s.x0 - 1, 0}, Glue{entry, 2}, ex);
    return out;
}

void bumpers(Emitter& em, const SubLayout& L) {
    for (int col : L.bumpers) {
        const std::string ns = L.ns + "BUMP/" + std::to_string(col) + "/";
        em.path(ns, {{col, L.P + 1}, {col, L.P + 2}}, {col, L.P}, Glue{L.ns + "BUMP|" + std::to_string(col), 2});
    }
}

// A stack of compiled machine blocks sharing one fixed end. Returns the last
// exit label (empty when the stack ends without one).
std::string machine_stack(Emitter& em, const ConstructionParams& p, const std::vector<detail::BlockGeom>& blocks,
                          const std::string& ns, int x_fixed, const std::string& start) {
    std::string entry = start;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& b = blocks[k];
        CompileOptions o;
        o.ns = ns + "b" + std::to_string(k) + "/";
        o.standalone = false;
        o.x_fixed = x_fixed;
        o.y0 = b.y0;
        o.row0_outward = true;
        o.exit_glue = b.exit;
        o.row_limit = p.step_limit;
        const CompiledTm c = compile_tm(b.plan.tm, b.plan.input, b.plan.space, b.plan.time, o);
        const long widest = *std::max_element(c.row_widths.begin(), c.row_widths.end());
        if (c.rows() != b.rows || c.row_widths[0] != b.tiles0 || widest != b.tiles || c.bit != b.bit)
            throw std::logic_error("compiled block disagrees with the layout");
        em.add(c.sys.tiles.tiles());
        for (long r = 1; r < c.rows(); ++r) em.placements += static_cast<std::size_t>(c.row_widths[r]);
        std::vector<Point> header;
        Extras ex;
        for (long t = 0; t < b.tiles0; ++t) {
            header.push_back({c.x_of(t), b.y0});
            ex[header.back()].push_back({N, c.row0_north[t]});
        }
        em.path(o.ns + "in/", header, {x_fixed, b.y0 - 1}, Glue{entry, 2}, ex);
        entry = c.exit_label;
    }
    return blocks.back().exit ? entry : std::string{};
}

void alley_tiles(Emitter& em) {
    for (const char* b : {"0", "1"}) {
        const std::string s = b;
        em.tiles.push_back(make_tile(s + "_PL", {}, Glue{"aLP" + s, 2}, {}, Glue{"aL" + s, 2}));
        em.tiles.push_back(make_tile(s + "_L", {}, Glue{"mL" + s, 1}, {}, Glue{"aLP" + s, 2}));
        em.tiles.push_back(make_tile(s + "_PR", {}, Glue{"aR" + s, 2}, {}, Glue{"aRP" + s, 2}));
        em.tiles.push_back(make_tile(s + "_R", {}, Glue{"aRP" + s, 2}, {}, Glue{"mR" + s, 1}));
        em.tiles.push_back(make_tile(s + "_M", {}, Glue{"mR" + s, 1}, Glue{"mB" + s, 2}, Glue{"mL" + s, 1}));
        em.tiles.push_back(make_tile(s + "_B", Glue{"mB" + s, 2}));
    }
}

std::string arm_label(std::uint64_t k) { return "ARM:" + std::to_string(k); }

void subiteration(Emitter& em, const ConstructionParams& p, const SubLayout& L, std::string& entry) {
    for (const auto& s : L.segs) entry = planter_segment(em, L, s, entry);
    bumpers(em, L);

    // leftComp and its output wall.
    const std::string lx = machine_stack(em, p, L.left, L.ns + "L/", L.x_R, L.ns + "L/start");
    {
        Extras ex;
        for (int q = 0; q < L.i; ++q)
            ex[{L.xa - 3, L.bit_rows[q]}].push_back({E, Glue{std::string("aL") + L.left_bits[q], 2}});
        const auto& last = L.left.back();
        em.path(L.ns + "LO/", L.left_out, {L.x_R, last.y0 + static_cast<int>(last.rows) - 1}, Glue{lx, 2}, ex);
    }

    // rightComp.
    {
        Extras ex;
        for (int q = 0; q < L.i; ++q)
            ex[{L.x_j0, L.bit_rows[q]}].push_back({W, Glue{std::string("aR") + L.right_bits[q], 2}});
        em.path(L.ns + "R/", L.right_path, {L.x_j0 + L.i - 1, L.P}, Glue{L.ns + "R/start", 2}, ex);
    }

    // Alley tiles: two on each side per bit, two more where bits agree.
    em.placements += 4 * static_cast<std::size_t>(L.i) + 2 * L.report.matching_positions.size();

    // topComp and, in the empty subiteration, the arm.
    const std::string tx = machine_stack(em, p, L.top, L.ns + "T/", L.x_T0, L.ns + "T/start");
    if (L.report.is_empty) {
        Extras ex;
        ex[L.arm_path.back()].push_back({S, Glue{arm_label(L.arm_type), 2}});
        const auto& last = L.top.back();
        em.path(L.ns + "A/", L.arm_path, {L.x_T0, last.y0 + static_cast<int>(last.rows) - 1}, Glue{tx, 2}, ex);
        em.placements += static_cast<std::size_t>(L.arm_path.back().y - 1 - L.P);
    }
}

}  // namespace

Construction build_construction(const ConstructionParams& p) {
    p.validate();
    Emitter em;
    em.tiles.push_back(make_tile("SEED", {}, Glue{"SEED>", 2}));
    alley_tiles(em);
    const std::uint64_t arm_types = p.a <= 12 ? std::uint64_t{1} << p.a : 0;
    std::set<std::uint64_t> arm_used;

    Construction out;
    std::string entry = "SEED>";
    int x = 1;
    int y_max = 0;
    for (int i = 1; i <= p.max_iteration; ++i) {
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << i); ++j) {
            const SubLayout L = detail::layout(p, i, j, x);
            if (L.x_end > p.width_limit) throw WidthLimitExceeded("construction exceeds the width limit");
            subiteration(em, p, L, entry);
            if (L.report.is_empty) arm_used.insert(L.arm_type);
            y_max = std::max(y_max, L.report.extent.y1);
            out.reports.push_back(L.report);
            x = L.x_end + 1;
        }
    }
    for (std::uint64_t k = 0; k < arm_types; ++k) arm_used.insert(k);
    for (std::uint64_t k : arm_used) {
        const Glue g{arm_label(k), 2};
        em.tiles.push_back(make_tile(arm_label(k), g, {}, g));
    }

    out.expected_tiles = em.placements;
    out.window = Box{0, 0, x - 1, y_max};
    out.sys.tiles = TileSet(std::move(em.tiles));
    out.sys.seed.place({0, 0}, 0);
    out.sys.temperature = 2;
    return out;
}

Tas generate_system(const ConstructionParams& p) { return build_construction(p).sys; }

std::string module_of(const std::string& name) {
    if (name == "SEED") return "seed";
    if (name.rfind("ARM:", 0) == 0) return "armColumn";
    if (name.size() >= 3 && (name[0] == '0' || name[0] == '1') && name[1] == '_') {
        const std::string s = name.substr(2);
        if (s == "PL" || s == "L") return "alleyLeft";
        if (s == "PR" || s == "R") return "alleyRight";
        return "alleyMid";
    }
    const auto a = name.find('/');
    if (a == std::string::npos) return "";
    const auto b = name.find('/', a + 1);
    const std::string tag = name.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
    static const std::map<std::string, std::string> tags{{"P", "planter"}, {"BUMP", "bumper"},
                                                         {"L", "leftComp"}, {"LO", "leftOut"},
                                                         {"R", "rightComp"}, {"T", "topComp"},
                                                         {"A", "arm"}};
    auto it = tags.find(tag);
    return it == tags.end() ? "" : it->second;
}

AlleyContents locate_bitalley(const TileSet& ts, const Assembly& asm_, const SubiterationReport& r) {
    AlleyContents out;
    const int xa = r.alley_x;
    auto name_at = [&](Point q) -> std::optional<std::string> {
        const int t = asm_.at(q);
        if (t < 0) return std::nullopt;
        return ts[t].name;
    };
    for (int y : r.bit_rows) {
        AlleyRow row;
        row.y = y;
        const auto l = name_at({xa - 1, y});
        const auto rr = name_at({xa + 1, y});
        if (!l || !rr) throw IncompleteRegion("alley row " + std::to_string(y) + " is not grown");
        row.left = *l;
        row.right = *rr;
        const auto m = name_at({xa, y});
        if (m && m->size() == 3 && m->substr(1) == "_M") {
            row.middle = *m;
            const auto b = name_at({xa, y - 1});
            if (b && b->size() == 3 && b->substr(1) == "_B") row.below = *b;
        }
        out.rows.push_back(row);
    }
    // The arm column, if any, is a run of ARM:k tiles in the gap column.
    std::optional<ArmColumn> col;
    for (int y = r.planter_top + 1; y <= r.extent.y1; ++y) {
        const auto n = name_at({xa, y});
        if (!n || n->rfind("ARM:", 0) != 0) {
            if (col) break;
            continue;
        }
        const std::uint64_t k = std::stoull(n->substr(4));
        if (!col) col = ArmColumn{xa, k, y, y};
        col->y_high = y;
    }
    out.arm_column = col;
    return out;
}

}  // namespace atam
