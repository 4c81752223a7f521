#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atam/gst.hpp"

namespace atam::detail {

inline int floor_div(int a, int m) { return a >= 0 ? a / m : -((-a + m - 1) / m); }

std::string show(Point p);

// Growth over a fixed base assembly plus exposed glues of assumed tiles.
// Placements go to `added`; the base is never modified.
class Sim {
public:
    Sim(const Tas& sys, const Assembly& base, std::size_t budget) : sys_(sys), base_(base), budget_(budget) {}

    int at(Point p) const {
        const int t = added_.at(p);
        return t >= 0 ? t : base_.at(p);
    }
    bool occupied(Point p) const { return at(p) >= 0; }

    // Returns false when the glue was already exposed or binds nothing.
    bool expose(const GlueEvent& e);
    bool exposed(const GlueEvent& e) const;

    // The single tile type that can attach at p, -1 if none.
    int attachable(Point p) const;

    // Empty cells next to a tile or an exposed glue, inside the region.
    template <class In>
    std::set<Point> frontier(In in) const {
        std::set<Point> out;
        auto near = [&](Point p) {
            for (Dir d : kDirs) {
                const Point q = p.step(d);
                if (!occupied(q) && in(q)) out.insert(q);
            }
        };
        for (const auto& [p, t] : base_.cells()) near(p);
        for (const auto& [p, t] : added_.cells()) near(p);
        for (const auto& [k, g] : ph_) {
            const Point q = k.first.step(static_cast<Dir>(k.second));
            if (!occupied(q) && in(q)) out.insert(q);
        }
        return out;
    }

    // Attaches until no cell of the region can take a tile. `on_place(p, t)`
    // runs after each placement and may add cells to `work`.
    template <class In, class On>
    void saturate(std::set<Point>& work, In in, On on_place) {
        while (!work.empty()) {
            const Point p = *work.begin();
            work.erase(work.begin());
            if (occupied(p) || !in(p)) continue;
            const int t = attachable(p);
            if (t < 0) continue;
            if (++placed_ > budget_) throw BudgetExhausted("placement budget exhausted at " + show(p));
            added_.place(p, t);
            for (Dir d : kDirs) {
                const Point q = p.step(d);
                if (!occupied(q) && in(q)) work.insert(q);
            }
            on_place(p, t);
        }
    }

    // Glue events shown by a tile at p.
    std::vector<GlueEvent> events(Point p, int t) const;

    const Assembly& added() const { return added_; }
    std::size_t phantom_count() const { return ph_.size(); }

private:
    int facing(Point p, Dir d) const;

    const Tas& sys_;
    const Assembly& base_;
    Assembly added_;
    std::map<std::pair<Point, int>, int> ph_;  // (cell, side) -> glue id
    std::size_t budget_;
    std::size_t placed_ = 0;
};

}  // namespace atam::detail
