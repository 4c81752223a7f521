#include <algorithm>

#include "atam/construction.hpp"
#include "machines.hpp"

namespace atam {

namespace detail {

namespace {

long even_up(std::uint64_t v) {
    if (v > (1ULL << 40)) throw WidthLimitExceeded("spacing constant too large");
    const long n = static_cast<long>(v);
    return std::max(2L, n + (n & 1));
}

long left_space(const ConstructionParams& p, int i) { return even_up(sat_pow(p.left_base, i)); }
long top_space(const ConstructionParams& p, int i) { return even_up(sat_pow(p.top_base, i)); }
long gap_space(const ConstructionParams& p, int i) {
    return even_up((std::uint64_t{1} << i) + ceil_log2(static_cast<std::uint64_t>(i)) + p.gap_add);
}

int bitlen(std::uint64_t v) {
    int n = 1;
    while (v >> n) ++n;
    return n;
}

std::string bits_lsb(std::uint64_t v, int n) {
    std::string s;
    for (int q = 0; q < n; ++q) s += char('0' + ((v >> q) & 1));
    return s;
}

long input_tiles(const std::vector<std::string>& input) {
    // The run pads to two cells, compilation to an even count of at least four.
    return std::max<long>(2, (static_cast<long>(input.size()) + 1) / 2);
}

BlockGeom block(const RunPlan& plan, const ConstructionParams& p, int y0) {
    BlockGeom b;
    b.plan = plan;
    b.y0 = y0;
    const TmRun run = execute(plan, p);
    if (run.outcome == TmOutcome::AbortTime && run.trace.size() >= p.step_limit)
        throw WidthLimitExceeded("machine run exceeds the step limit");
    b.bit = run.bit();
    b.rows = static_cast<long>(run.trace.size()) + 1;
    b.tiles0 = input_tiles(plan.input);
    long far = 0;
    for (const auto& c : run.trace) far = std::max(far, c.head);
    b.tiles = std::max(b.tiles0, far / 2 + 1);
    return b;
}

struct Widths {
    long ls, lin, gap, rin, sp, tin, ts;
    int nL, nT;
    long total() const { return ls + lin + gap + rin + sp + tin + ts; }
};

long even_l(long v) { return v + (v & 1); }

Widths widths(const ConstructionParams& p, int i) {
    const int x = ceil_log2(static_cast<std::uint64_t>(i));
    const int bo = p.bumper_offset;
    Widths w{};
    const auto lp = a_plus_plan(x, p, Tape::OneWayLeft);
    const auto tp = a_plus_plan(x, p, Tape::OneWayRight);
    w.nL = static_cast<int>(std::max<long>(bitlen(static_cast<std::uint64_t>(x)), input_tiles(lp.front().input)));
    w.nT = static_cast<int>(std::max<long>(bitlen(static_cast<std::uint64_t>(i)) + i, input_tiles(tp.front().input)));
    w.ls = left_space(p, i);
    w.lin = even_l(2 * bo + w.nL);
    w.gap = gap_space(p, i);
    w.rin = even_l(2 * bo + i);
    w.sp = even_l(p.spacer);
    w.tin = even_l(2 * bo + w.nT);
    w.ts = top_space(p, i);
    return w;
}

void add_box(SubiterationReport& r, const std::string& m, Box b) {
    if (b.empty()) return;
    r.boxes.push_back({m, b});
}

// Splits a rectilinear path into maximal straight runs.
std::vector<Box> straight_runs(const std::vector<Point>& pts) {
    std::vector<Box> out;
    if (pts.empty()) return out;
    Box b;
    b.include(pts[0]);
    int dir = -1;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const int d = pts[k].x == pts[k - 1].x ? 0 : 1;
        if (dir != -1 && d != dir) {
            out.push_back(b);
            b = Box{};
            b.include(pts[k - 1]);
        }
        dir = d;
        b.include(pts[k]);
    }
    out.push_back(b);
    return out;
}

}  // namespace

std::string sub_ns(int i, std::uint64_t j) { return "s" + std::to_string(i) + "." + std::to_string(j) + "/"; }

int planter_height(const ConstructionParams& p, int i) {
    const long l = std::max({left_space(p, i), gap_space(p, i), top_space(p, i)});
    return std::max(2, ceil_log2(static_cast<std::uint64_t>(l)));
}

long subiteration_width(const ConstructionParams& p, int i) { return widths(p, i).total(); }

int subiteration_start(const ConstructionParams& p, int i, std::uint64_t j) {
    long x = 1;  // column 0 holds the seed
    for (int k = 1; k < i; ++k) x += subiteration_width(p, k) << k;
    x += subiteration_width(p, i) * static_cast<long>(j);
    if (x > p.width_limit) throw WidthLimitExceeded("construction exceeds the width limit");
    return static_cast<int>(x);
}

SubLayout layout(const ConstructionParams& p, int i, std::uint64_t j, int x_begin) {
    SubLayout L;
    L.i = i;
    L.j = j;
    L.ns = sub_ns(i, j);
    L.height = planter_height(p, i);
    L.P = L.height - 1;
    L.x_begin = x_begin;
    const Widths w = widths(p, i);
    const int bo = p.bumper_offset;
    const int x = ceil_log2(static_cast<std::uint64_t>(i));
    const int P = L.P;

    // Planter segments.
    int cur = x_begin;
    auto seg = [&](Segment::Kind k, const std::string& name, long width) -> Segment& {
        Segment s;
        s.kind = k;
        s.name = name;
        s.x0 = cur;
        s.x1 = cur + static_cast<int>(width) - 1;
        cur = s.x1 + 1;
        L.segs.push_back(s);
        return L.segs.back();
    };
    auto bump = [&](Segment& s, int col) {
        s.north.push_back({col, Glue{L.ns + "BUMP|" + std::to_string(col), 2}});
        L.bumpers.push_back(col);
    };
    seg(Segment::Counter, "LS", w.ls);
    {
        Segment& s = seg(Segment::Path, "LIN", w.lin);
        const int x0 = s.x0 + bo;
        L.x_R = x0 + w.nL - 1;
        bump(s, x0 - bo);
        const std::string xb = bits_lsb(static_cast<std::uint64_t>(x), w.nL);
        for (int c = 0; c < w.nL; ++c) {
            const int col = L.x_R - c;  // least significant digit at the fixed end
            if (c == 0)
                s.north.push_back({col, Glue{L.ns + "L/start", 2}});
            else
                s.north.push_back({col, Glue{L.ns + "L/in" + std::to_string(c) + "=" + xb[c], 1}});
        }
        bump(s, L.x_R + bo);
    }
    seg(Segment::Counter, "GAP", w.gap);
    {
        Segment& s = seg(Segment::Path, "RIN", w.rin);
        L.x_j0 = s.x0 + bo;
        L.xa = L.x_j0 - 3;
        bump(s, L.x_j0 - bo);
        for (int c = 0; c < i; ++c) {
            const int col = L.x_j0 + c;
            if (c == i - 1)
                s.north.push_back({col, Glue{L.ns + "R/start", 2}});
            else
                s.north.push_back({col, Glue{L.ns + "R/in" + std::to_string(c) + "=" + char('0' + ((j >> c) & 1)), 1}});
        }
        bump(s, L.x_j0 + i - 1 + bo);
    }
    seg(Segment::Path, "SP", w.sp);
    {
        Segment& s = seg(Segment::Path, "TIN", w.tin);
        L.x_T0 = s.x0 + bo;
        bump(s, L.x_T0 - bo);
        const std::string ib = bits_lsb(static_cast<std::uint64_t>(i), bitlen(static_cast<std::uint64_t>(i)));
        const std::string in = ib + bits_lsb(j, i);
        for (int c = 0; c < w.nT; ++c) {
            const int col = L.x_T0 + c;
            if (c == 0)
                s.north.push_back({col, Glue{L.ns + "T/start", 2}});
            else if (c < static_cast<int>(in.size()))
                s.north.push_back({col, Glue{L.ns + "T/in" + std::to_string(c) + "=" + in[c], 1}});
        }
        bump(s, L.x_T0 + w.nT - 1 + bo);
    }
    seg(Segment::Counter, "TS", w.ts);
    L.x_end = cur - 1;

    // Machine records.
    const std::string aplus = a_plus(x, p);
    L.left_bits = aplus.substr(0, i);
    L.right_bits = bits_lsb(j, i);

    // Alley rows: bit 0 highest, spaced bit_gap + 1 apart.
    const int h_top = p.alley_mult * (1 << x) + p.alley_add;
    for (int q = 0; q < i; ++q) L.bit_rows.push_back(P + h_top - (p.bit_gap + 1) * q);
    const int alley_low = L.bit_rows.back();
    if (alley_low - 1 <= P + 2) throw WidthLimitExceeded("alley constants leave no room above the bumpers");

    // leftComp: machine blocks stacked above the input, tape growing west.
    int y = P + 1;
    long widest = 0;
    for (const auto& plan : a_plus_plan(x, p, Tape::OneWayLeft)) {
        L.left.push_back(block(plan, p, y));
        y += static_cast<int>(L.left.back().rows);
        widest = std::max(widest, L.left.back().tiles);
    }
    const int y_left_top = y - 1;
    if (L.x_R - widest + 1 < L.x_begin) throw WidthLimitExceeded("leftComp outgrows its spacing");
    {
        const int yo = std::max(y_left_top + 1, P + h_top);
        for (int yy = y_left_top + 1; yy <= yo; ++yy) L.left_out.push_back({L.x_R, yy});
        for (int xx = L.x_R + 1; xx <= L.xa - 3; ++xx) L.left_out.push_back({xx, yo});
        for (int yy = yo - 1; yy >= alley_low; --yy) L.left_out.push_back({L.xa - 3, yy});
    }

    // rightComp: along the input row, then up the alley's east wall.
    const int right_top = P + h_top;
    for (int c = i - 1; c >= 0; --c) L.right_path.push_back({L.x_j0 + c, P + 1});
    for (int yy = P + 2; yy <= right_top; ++yy) L.right_path.push_back({L.x_j0, yy});

    // topComp: A⁺ again on a rightward tape, then the B runs when nothing matched.
    SubiterationReport& r = L.report;
    r.i = i;
    r.j = j;
    r.a_plus_bits = L.left_bits;
    for (int q = 0; q < i; ++q)
        if (L.left_bits[q] == L.right_bits[q]) r.matching_positions.insert(q);
    r.is_empty = r.matching_positions.empty();
    y = P + 1;
    widest = 0;
    auto top_plan = a_plus_plan(x, p, Tape::OneWayRight);
    if (r.is_empty)
        for (auto& b : b_plan(i, p, Tape::OneWayRight)) top_plan.push_back(std::move(b));
    std::string arm;
    for (std::size_t k = 0; k < top_plan.size(); ++k) {
        L.top.push_back(block(top_plan[k], p, y));
        y += static_cast<int>(L.top.back().rows);
        widest = std::max(widest, L.top.back().tiles);
        if (k >= static_cast<std::size_t>(1) << x) arm += char('0' + L.top.back().bit);
    }
    for (std::size_t k = 0; k < L.left.size(); ++k)
        if (L.left[k].bit != L.top[k].bit) throw std::logic_error("mirrored machine disagrees");
    if (!r.is_empty) L.top.back().exit = false;
    const int y_top_top = y - 1;
    if (L.x_T0 + widest - 1 > L.x_end) throw WidthLimitExceeded("topComp outgrows its spacing");
    if (r.is_empty) {
        L.arm_bits = arm;
        r.arm_bits = arm;
        for (int q = 0; q < p.a; ++q)
            if (arm[q] == '1') L.arm_type |= std::uint64_t{1} << q;
        const int ya = std::max(y_top_top + 1, right_top + 2);
        for (int yy = y_top_top + 1; yy <= ya; ++yy) L.arm_path.push_back({L.x_T0, yy});
        for (int xx = L.x_T0 - 1; xx >= L.xa; --xx) L.arm_path.push_back({xx, ya});
    }

    // Bounding boxes.
    r.planter_top = P;
    r.alley_x = L.xa;
    r.bit_rows = L.bit_rows;
    add_box(r, "planter", Box{L.x_begin, 0, L.x_end, P});
    for (int col : L.bumpers) add_box(r, "bumper", Box{col, P + 1, col, P + 2});
    {
        long wl = 0;
        for (const auto& b : L.left) wl = std::max(wl, b.tiles);
        add_box(r, "leftComp", Box{L.x_R - static_cast<int>(wl) + 1, P + 1, L.x_R, y_left_top});
        for (const auto& b : straight_runs(L.left_out)) add_box(r, "leftOut", b);
    }
    add_box(r, "rightComp", Box{L.x_j0, P + 1, L.x_j0 + i - 1, P + 1});
    add_box(r, "rightComp", Box{L.x_j0, P + 2, L.x_j0, right_top});
    {
        long wt = 0;
        for (const auto& b : L.top) wt = std::max(wt, b.tiles);
        add_box(r, "topComp", Box{L.x_T0, P + 1, L.x_T0 + static_cast<int>(wt) - 1, y_top_top});
    }
    if (r.is_empty) {
        for (const auto& b : straight_runs(L.arm_path)) add_box(r, "arm", b);
        add_box(r, "armColumn", Box{L.xa, P + 1, L.xa, L.arm_path.back().y - 1});
    }
    add_box(r, "alleyLeft", Box{L.xa - 2, alley_low, L.xa - 1, L.bit_rows.front()});
    add_box(r, "alleyRight", Box{L.xa + 1, alley_low, L.xa + 2, L.bit_rows.front()});
    for (int q : r.matching_positions) add_box(r, "alleyMid", Box{L.xa, L.bit_rows[q] - 1, L.xa, L.bit_rows[q]});
    for (const auto& mb : r.boxes) {
        r.extent.include({mb.box.x0, mb.box.y0});
        r.extent.include({mb.box.x1, mb.box.y1});
    }
    return L;
}

}  // namespace detail

std::uint64_t SubiterationReport::arm_type() const {
    std::uint64_t k = 0;
    if (arm_bits)
        for (std::size_t q = 0; q < arm_bits->size(); ++q)
            if ((*arm_bits)[q] == '1') k |= std::uint64_t{1} << q;
    return k;
}

std::string SubiterationReport::j_bits() const {
    std::string s;
    for (int q = 0; q < i; ++q) s += char('0' + ((j >> q) & 1));
    return s;
}

SubiterationReport predict_layout(const ConstructionParams& p, int i, std::uint64_t j) {
    if (i < 1 || i > p.max_iteration) throw OutOfRange("predict_layout: iteration out of range");
    if (j >= (std::uint64_t{1} << i)) throw OutOfRange("predict_layout: subiteration out of range");
    return detail::layout(p, i, j, detail::subiteration_start(p, i, j)).report;
}

}  // namespace atam
