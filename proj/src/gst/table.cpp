#include <algorithm>
#include <functional>
#include <limits>

#include "context.hpp"
#include "sim.hpp"

namespace atam {

using detail::show;

namespace {

enum Kind { kClaim = 0, kNotDirected = 1, kBudget = 2 };

[[noreturn]] void rethrow(int kind, const std::string& msg) {
    if (kind == kNotDirected) throw NotDirected(msg);
    if (kind == kBudget) throw BudgetExhausted(msg);
    throw ClaimViolation(msg);
}

// Downward edges (upper cell, side) across the cut for columns x0..x1.
std::vector<std::pair<Point, Dir>> cut_edges(const CutSpec& cut, int x0, int x1) {
    std::vector<std::pair<Point, Dir>> out;
    for (int x = x0; x <= x1; ++x) out.push_back({{x, (x <= cut.x_left ? cut.y_left : cut.y_right) + 1}, S});
    if (cut.y_left < cut.y_right && cut.x_left >= x0 && cut.x_left < x1)
        for (int y = cut.y_left + 1; y <= cut.y_right; ++y) out.push_back({{cut.x_left, y}, E});
    if (cut.y_left > cut.y_right && cut.x_left >= x0 && cut.x_left < x1)
        for (int y = cut.y_right + 1; y <= cut.y_left; ++y) out.push_back({{cut.x_left + 1, y}, W});
    return out;
}

}  // namespace

GlueSequenceTable::GlueSequenceTable(std::shared_ptr<const Context> ctx, std::shared_ptr<GlueSequenceTable> older)
    : cut_(ctx->cut), max_len_(4 * ctx->c), ctx_(std::move(ctx)), older_(std::move(older)) {
    const TileSet& ts = ctx_->sys->tiles;
    if (ctx_->snapshot.empty()) return;
    const Box b = ctx_->snapshot.bounds();
    for (auto [u, d] : cut_edges(cut_, b.x0, b.x1)) {
        if (ctx_->snapshot.contains(u) || ctx_->snapshot.contains(u.step(d))) continue;
        for (int g = 0; g < static_cast<int>(ts.glue_count()); ++g)
            if (!ts.tiles_with(d, g).empty() && !ts.tiles_with(opposite(d), g).empty())
                domain_.push_back({{ts.glue_label(g), ts.glue_strength(g)}, d, u});
    }
    std::sort(domain_.begin(), domain_.end());
}

bool GlueSequenceTable::relevant(const GlueEvent& e) const {
    if (!ctx_) {
        // Frozen: only what has been seen can be asked again.
        return true;
    }
    const TileSet& ts = ctx_->sys->tiles;
    const auto g = ts.glue_lookup(e.glue.label);
    return g && !ts.tiles_with(opposite(e.dir), *g).empty();
}

const std::set<GlueEvent>& GlueSequenceTable::lookup(const Sequence& seq) {
    if (auto it = memo_.find(seq); it != memo_.end()) return it->second;
    if (auto it = failed_.find(seq); it != failed_.end()) rethrow(it->second.first, it->second.second);
    try {
        evaluate(seq);
    } catch (const NotDirected& e) {
        failed_[seq] = {kNotDirected, e.what()};
        throw;
    } catch (const BudgetExhausted& e) {
        failed_[seq] = {kBudget, e.what()};
        throw;
    } catch (const ClaimViolation& e) {
        failed_[seq] = {kClaim, e.what()};
        throw;
    }
    return memo_.at(seq);
}

void GlueSequenceTable::evaluate(const Sequence& seq) {
    if (!ctx_)
        throw ClaimViolation("a sequence of " + std::to_string(seq.size()) +
                             " events reached a table below the retained strips");
    if (static_cast<int>(seq.size()) > max_len_)
        throw ClaimViolation("more than " + std::to_string(max_len_) + " glues crossed one cut downward");
    const Context& cx = *ctx_;
    detail::Sim sim(*cx.sys, cx.snapshot, cx.opts.max_placements);
    for (const auto& e : cx.base_phantoms) sim.expose(e);
    auto in = [&](Point p) { return cut_.below(p) && !(cx.floor && cx.floor->below(p)); };

    Sequence pi = cx.base_sigma;
    std::set<Point> assumed;
    std::set<GlueEvent> out;
    std::set<Point> work = sim.frontier(in);
    auto record = [&](const GlueEvent& ev) {
        if (cut_.up_crossing(ev) && !cx.snapshot.contains(ev.target()) && !assumed.count(ev.target()))
            out.insert(ev);
    };
    for (const auto& e : cx.base_phantoms) record(e);
    auto on_place = [&](Point p, int t) {
        for (const auto& ev : sim.events(p, t)) {
            record(ev);
            if (!cx.floor || !older_ || !cx.floor->down_crossing(ev) || sim.occupied(ev.target())) continue;
            if (!older_->relevant(ev)) continue;
            pi.push_back(ev);
            for (const auto& g : older_->lookup(pi))
                if (sim.expose(g)) {
                    record(g);
                    work.insert(g.target());
                }
        }
    };
    sim.saturate(work, in, on_place);
    memo_.emplace(Sequence{}, out);
    Sequence prefix;
    for (const auto& e : seq) {
        prefix.push_back(e);
        assumed.insert(e.loc);
        // An assumed tile's glue may cover a crossing that was already reported.
        for (auto it = out.begin(); it != out.end();) it = it->target() == e.loc ? out.erase(it) : std::next(it);
        if (sim.expose(e)) work.insert(e.target());
        sim.saturate(work, in, on_place);
        memo_.emplace(prefix, out);
    }
    peak_work_ = std::max(peak_work_, sim.added().size() + sim.phantom_count());
}

std::size_t GlueSequenceTable::backfill() {
    Sequence seq;
    std::set<std::pair<Point, int>> used;
    std::function<void()> rec = [&] {
        try {
            lookup(seq);
        } catch (const NotDirected&) {
            return;
        }
        if (memo_.size() > (ctx_ ? ctx_->opts.max_entries : std::numeric_limits<std::size_t>::max()))
            throw BudgetExhausted("table backfill exceeded " + std::to_string(ctx_->opts.max_entries) + " entries");
        if (static_cast<int>(seq.size()) == max_len_) return;
        for (const auto& e : domain_) {
            if (!used.insert({e.loc, static_cast<int>(e.dir)}).second) continue;
            seq.push_back(e);
            rec();
            seq.pop_back();
            used.erase({e.loc, static_cast<int>(e.dir)});
        }
    };
    rec();
    return memo_.size();
}

void GlueSequenceTable::freeze() {
    ctx_.reset();
    older_.reset();
}

std::size_t GlueSequenceTable::retained_cells() const {
    return ctx_ ? ctx_->snapshot.size() + ctx_->base_phantoms.size() : 0;
}

GlueSequenceTable init_gst(const Tas& sys, const Assembly& strip, const CutSpec& cut, int c, const GstOptions& opts) {
    auto cx = std::make_shared<GlueSequenceTable::Context>();
    cx->sys = std::make_shared<const Tas>(sys);
    for (const auto& [p, t] : strip.cells())
        if (p.y <= cut.highest() + 1) cx->snapshot.place(p, t);
    cx->cut = cut;
    cx->c = c;
    cx->opts = opts;
    return GlueSequenceTable(cx, nullptr);
}

}  // namespace atam
