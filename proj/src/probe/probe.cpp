#include <algorithm>
#include <deque>
#include <exception>
#include <set>
#include <tuple>

#include "atam/probe.hpp"

namespace atam {

std::vector<Point> southern_boundary(const std::vector<Point>& dom) {
    if (dom.empty()) return {};
    const std::set<Point> in(dom.begin(), dom.end());
    std::set<int> cols;
    int y0 = dom.front().y, y1 = dom.front().y;
    for (Point p : dom) cols.insert(p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    // Empty cells of the column hull reachable from the row below everything.
    auto open = [&](Point p) { return cols.count(p.x) && p.y >= y0 - 1 && p.y <= y1 + 1 && !in.count(p); };
    std::set<Point> seen;
    std::deque<Point> q;
    for (int x : cols) seen.insert({x, y0 - 1}), q.push_back({x, y0 - 1});
    while (!q.empty()) {
        const Point p = q.front();
        q.pop_front();
        for (Dir d : kDirs) {
            const Point r = p.step(d);
            if (open(r) && seen.insert(r).second) q.push_back(r);
        }
    }
    std::vector<Point> out;
    for (Point p : in)
        for (Dir d : kDirs)
            if (seen.count(p.step(d))) {
                out.push_back(p);
                break;
            }
    std::sort(out.begin(), out.end(), [](Point a, Point b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
    return out;
}

std::vector<Point> southern_boundary(const Assembly& config) {
    std::vector<Point> dom;
    for (const auto& [p, t] : config.cells()) dom.push_back(p);
    return southern_boundary(dom);
}

const ArmShape::Row* ArmShape::row(long r) const {
    if (r < 0) return nullptr;
    if (r < static_cast<long>(prefix.size())) return &prefix[r];
    if (period.empty()) return nullptr;
    return &period[(r - prefix.size()) % period.size()];
}

Assembly ArmShape::extend(Point top, long rows) const {
    Assembly out;
    for (long r = 0; r < rows; ++r) {
        const Row* row_r = row(r);
        if (!row_r) break;
        for (const auto& [dx, t] : *row_r) out.place({top.x + dx, top.y - static_cast<int>(r)}, t);
    }
    return out;
}

bool ArmShape::operator<(const ArmShape& o) const { return std::tie(prefix, period) < std::tie(o.prefix, o.period); }

ArmShape arm_shape(const Assembly& column, std::optional<int> x_origin) {
    ArmShape s;
    if (column.empty()) return s;
    const Box b = column.bounds();
    std::vector<ArmShape::Row> rows(static_cast<std::size_t>(b.height()));
    const int x0 = x_origin.value_or(b.x0);
    for (const auto& [p, t] : column.cells()) rows[b.y1 - p.y][p.x - x0] = t;
    const long n = static_cast<long>(rows.size());
    long best_p = n, best_q = 0;
    for (long q = 1; 2 * q <= n; ++q) {
        // Smallest prefix after which every row repeats q rows later.
        long p = n - q;
        while (p > 0 && rows[p - 1] == rows[p - 1 + q]) --p;
        if (n - p < 2 * q) continue;
        if (p + q < best_p + best_q) best_p = p, best_q = q;
    }
    s.prefix.assign(rows.begin(), rows.begin() + best_p);
    if (best_q > 0) s.period.assign(rows.begin() + best_p, rows.begin() + best_p + best_q);
    return s;
}

std::vector<ArmShape> probe_dodgers(const Assembly& probes, const std::vector<ArmShape>& shapes, int offset) {
    if (probes.empty()) return shapes;
    const Box b = probes.bounds();
    std::vector<ArmShape> out;
    for (const auto& s : shapes) {
        bool hit = false;
        const Assembly arm = s.extend({b.x0 + offset, b.y1}, b.height());
        for (const auto& [p, t] : arm.cells()) hit = hit || probes.contains(p);
        if (!hit) out.push_back(s);
    }
    return out;
}

void ProbeSet::validate() const {
    for (const auto& [p, t] : left.cells())
        if (right.contains(p)) throw InvalidProbes("left and right probes overlap");
    if (left.contains(gap) || right.contains(gap)) throw InvalidProbes("the gap point is occupied by a probe");
}

namespace {

long diameter(const Box& b) { return std::max(b.width(), b.height()) - 1; }

// Nearest complete block, around the gap, that maps to an arm type.
std::optional<std::string> arm_in(const ArmQuery& q, const TileSet& U, const Assembly& a, const std::vector<Point>& grown,
                                  Point gap) {
    const int m = q.repr.m;
    const Point g = block_of(gap, m);
    std::set<std::tuple<int, int, int>> blocks;  // (distance, y, x)
    for (Point p : grown) {
        const Point b = block_of(p, m);
        blocks.insert({std::max(std::abs(b.x - g.x), std::abs(b.y - g.y)), b.y, b.x});
    }
    for (const auto& [dist, by, bx] : blocks) {
        bool full = true;
        for (int j = 0; j < m && full; ++j)
            for (int i = 0; i < m && full; ++i) full = a.contains({bx * m + i, by * m + j});
        if (!full) continue;
        const auto t = repr_block(q.repr, U, a, {bx, by});
        if (t && q.arm_tiles.count(*t)) return t;
    }
    return std::nullopt;
}

}  // namespace

ArmEnumeration enumerate_arm_types(const ProbeSet& probes, const TileSet& U, int c, int temperature,
                                   const ArmQuery& q) {
    probes.validate();
    ArmEnumeration out;
    std::vector<Point> star;
    Box win;
    win.include(probes.gap);
    star.push_back(probes.gap);
    for (const auto* part : {&probes.left, &probes.right})
        for (const auto& [p, t] : part->cells()) star.push_back(p), win.include(p);
    const auto sb = southern_boundary(star);
    const std::set<Point> on_star(sb.begin(), sb.end());

    // Right-probe tiles on the boundary of the whole configuration, by
    // distance from the gap along that boundary.
    std::map<Point, int> dist{{probes.gap, 0}};
    std::deque<Point> bfs{probes.gap};
    while (!bfs.empty()) {
        const Point p = bfs.front();
        bfs.pop_front();
        for (Dir d : kDirs) {
            const Point r = p.step(d);
            if (on_star.count(r) && dist.emplace(r, dist[p] + 1).second) bfs.push_back(r);
        }
    }
    std::vector<std::tuple<int, Point>> keyed;
    for (const auto& [p, t] : probes.right.cells())
        if (auto it = dist.find(p); it != dist.end()) keyed.push_back({it->second, p});
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [d, p] : keyed) out.queue.push_back(p);

    const int margin = 2 * c + 2;
    win = {win.x0 - margin, win.y0 - margin, win.x1 + margin, win.y1 + margin};
    const long n = static_cast<long>(U.size());
    out.by_tile.assign(U.size(), std::nullopt);
    std::vector<char> ran_out(U.size(), 0);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) if (q.parallel)
    for (long t = 0; t < n; ++t) {
        try {
            Tas sys;
            sys.tiles = U;
            sys.temperature = temperature;
            sys.seed = probes.left;
            sys.seed.place(probes.gap, static_cast<int>(t));
            for (std::size_t popped = 0;; ++popped) {
                Grower g(sys, win, Policy::lexmin());
                Box placed;
                placed.include(probes.gap);
                std::vector<Point> grown{probes.gap};
                bool wide = false;
                std::size_t steps = 0;
                while (g.step()) {
                    if (++steps > q.max_steps) throw BudgetExhausted("arm growth budget");
                    const Point p = g.order().back().loc;
                    placed.include(p);
                    grown.push_back(p);
                    if (diameter(placed) > 2 * c) {
                        wide = true;
                        break;
                    }
                }
                if (wide) {
                    out.by_tile[t] = arm_in(q, U, g.assembly(), grown, probes.gap);
                    break;
                }
                if (popped == out.queue.size()) break;
                const Point next = out.queue[popped];
                sys.seed.place(next, probes.right.at(next));
            }
        } catch (const BudgetExhausted&) {
            ran_out[t] = 1;
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (long t = 0; t < n; ++t) {
        out.exhausted += ran_out[t];
        if (out.by_tile[t]) out.E.insert(*out.by_tile[t]);
    }
    return out;
}

}  // namespace atam
