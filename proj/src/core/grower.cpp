#include "atam/core.hpp"

#include <algorithm>
#include <numeric>

namespace atam {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Grower::Grower(const Tas& sys, const Box& window, const Policy& policy)
    : sys_(&sys), win_(window), policy_(policy) {
    if (window.empty()) throw std::invalid_argument("empty growth window");
    if (window.width() * window.height() > (1LL << 31))
        throw std::invalid_argument("growth window too large");
    width_ = static_cast<int>(window.width());
    const std::size_t cells = static_cast<std::size_t>(window.width() * window.height());
    grid_.assign(cells, -1);
    cand_.assign(cells, -1);
    pos_.assign(cells, -1);
    scratch_.assign(sys.tiles.size(), 0);

    std::vector<int> idx(sys.tiles.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return sys.tiles[a].name < sys.tiles[b].name; });
    rank_.assign(idx.size(), 0);
    for (std::size_t r = 0; r < idx.size(); ++r) rank_[idx[r]] = static_cast<int>(r);

    reset(policy);
}

void Grower::reset(const Policy& policy) {
    policy_ = policy;
    for (int c : dirty_) {
        grid_[c] = -1;
        cand_[c] = -1;
        pos_[c] = -1;
    }
    dirty_.clear();
    multi_.clear();
    active_.clear();
    fifo_.clear();
    fifo_head_ = 0;
    ordered_.clear();
    order_.clear();
    placed_count_ = 0;
    conflict_.reset();
    hash_ = 1469598103934665603ULL;
    rng_ = policy.seed;

    std::vector<Placement> seed = sys_->seed.sorted();
    for (const auto& pl : seed) {
        if (!win_.contains(pl.loc)) continue;
        int c = cell(pl.loc);
        grid_[c] = pl.tile;
        dirty_.push_back(c);
        ++placed_count_;
    }
    for (const auto& pl : seed) {
        if (!win_.contains(pl.loc)) continue;
        for (Dir d : kDirs) {
            Point q = pl.loc.step(d);
            if (win_.contains(q) && grid_[cell(q)] < 0) refresh(cell(q));
        }
    }
}

int Grower::at(Point p) const { return win_.contains(p) ? grid_[cell(p)] : -1; }

Assembly Grower::assembly() const {
    Assembly a;
    for (const auto& pl : sys_->seed.sorted())
        if (win_.contains(pl.loc)) a.place(pl.loc, pl.tile);
    for (const auto& pl : order_) a.place(pl.loc, pl.tile);
    return a;
}

void Grower::activate(int c) {
    if (pos_[c] >= 0) return;
    pos_[c] = static_cast<int>(active_.size());
    active_.push_back(c);
    switch (policy_.kind) {
        case PolicyKind::LexMin:
        case PolicyKind::LexMax: ordered_.insert(c); break;
        case PolicyKind::Fifo: fifo_.push_back(c); break;
        case PolicyKind::Random: break;
    }
}

void Grower::deactivate(int c) {
    int p = pos_[c];
    if (p < 0) return;
    int last = active_.back();
    active_[p] = last;
    pos_[last] = p;
    active_.pop_back();
    pos_[c] = -1;
    if (policy_.kind == PolicyKind::LexMin || policy_.kind == PolicyKind::LexMax)
        ordered_.erase(c);
}

void Grower::refresh(int c) {
    const TileSet& ts = sys_->tiles;
    const Point p = point(c);
    touched_.clear();
    for (Dir d : kDirs) {
        Point q = p.step(d);
        if (!win_.contains(q)) continue;
        int nb = grid_[cell(q)];
        if (nb < 0) continue;
        int gid = ts.glue_id(nb, opposite(d));
        if (gid < 0) continue;
        int s = ts.glue_strength(gid);
        for (int t : ts.tiles_with(d, gid)) {
            if (scratch_[t] == 0) touched_.push_back(t);
            scratch_[t] += s;
        }
    }
    int first = -1;
    int count = 0;
    std::vector<int>* many = nullptr;
    for (int t : touched_) {
        if (scratch_[t] >= sys_->temperature) {
            ++count;
            if (count == 1) {
                first = t;
            } else {
                if (!many) {
                    many = &multi_[c];
                    many->assign(1, first);
                }
                many->push_back(t);
            }
        }
        scratch_[t] = 0;
    }
    if (count == 0) return;
    if (cand_[c] < 0) dirty_.push_back(c);
    if (many) {
        std::sort(many->begin(), many->end(),
                  [&](int a, int b) { return rank_[a] < rank_[b]; });
        first = many->front();
        if (!conflict_) conflict_ = Conflict{p, (*many)[0], (*many)[1], order_.size()};
    }
    cand_[c] = first;
    activate(c);
}

int Grower::choose() {
    switch (policy_.kind) {
        case PolicyKind::LexMin: return *ordered_.begin();
        case PolicyKind::LexMax: return *ordered_.rbegin();
        case PolicyKind::Fifo:
            while (pos_[fifo_[fifo_head_]] < 0) ++fifo_head_;
            return fifo_[fifo_head_++];
        case PolicyKind::Random: return active_[splitmix(rng_) % active_.size()];
    }
    return active_.front();
}

void Grower::place(int c, int tile) {
    grid_[c] = tile;
    deactivate(c);
    multi_.erase(c);
    ++placed_count_;
    const Point p = point(c);
    order_.push_back({p, tile});
    hash_ = (hash_ ^ static_cast<std::uint64_t>(c)) * 1099511628211ULL;
    hash_ = (hash_ ^ static_cast<std::uint64_t>(tile)) * 1099511628211ULL;
    for (Dir d : kDirs) {
        Point q = p.step(d);
        if (win_.contains(q) && grid_[cell(q)] < 0) refresh(cell(q));
    }
}

bool Grower::step() {
    if (active_.empty()) return false;
    int c = choose();
    int tile = cand_[c];
    if (policy_.kind == PolicyKind::LexMax || policy_.kind == PolicyKind::Random) {
        auto it = multi_.find(c);
        if (it != multi_.end()) {
            const auto& v = it->second;
            tile = policy_.kind == PolicyKind::LexMax ? v.back() : v[splitmix(rng_) % v.size()];
        }
    }
    place(c, tile);
    return true;
}

std::size_t Grower::run(std::size_t max_steps) {
    std::size_t n = 0;
    while (n < max_steps && step()) ++n;
    return n;
}

Assembly AssemblySequence::result() const {
    Assembly a = seed;
    for (const auto& s : steps) a.place(s.loc, s.tile);
    return a;
}

std::optional<long> AssemblySequence::index_of(Point loc) const {
    if (seed.contains(loc)) return -1;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i].loc == loc) return static_cast<long>(i);
    return std::nullopt;
}

Assembly replay(const Tas& sys, const AssemblySequence& seq) {
    Assembly a = seq.seed;
    for (const auto& s : seq.steps) {
        if (a.contains(s.loc)) throw OccupiedLocation("replay places twice at one location");
        if (binding_strength(sys.tiles, a, s.loc, s.tile) < sys.temperature)
            throw InsufficientStrength("replay step " + sys.tiles[s.tile].name + " cannot bind");
        a.place(s.loc, s.tile);
    }
    return a;
}

AssemblySequence run_sequence(const Tas& sys, const Policy& policy, std::size_t max_steps,
                              const Box& window) {
    Grower g(sys, window, policy);
    g.run(max_steps);
    AssemblySequence seq;
    seq.seed = sys.seed;
    seq.steps = g.order();
    return seq;
}

}  // namespace atam
