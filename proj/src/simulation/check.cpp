#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "decoder.hpp"

namespace atam {

namespace {

using Key = std::vector<std::array<int, 3>>;

Key key_of(const Assembly& a) {
    Key k;
    for (const auto& pl : a.sorted()) k.push_back({pl.loc.y, pl.loc.x, pl.tile});
    return k;
}

Assembly assembly_of(const std::vector<Placement>& cells) {
    Assembly a;
    for (const auto& pl : cells) a.place(pl.loc, pl.tile);
    return a;
}

bool before(const Placement& a, const Placement& b) {
    if (a.loc != b.loc) return a.loc < b.loc;
    return a.tile < b.tile;
}

// Canonical states are sorted by (y, x), so inclusion is a merge.
bool sub(const std::vector<Placement>& a, const std::vector<Placement>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end(), before);
}

std::string show(const Point& p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

struct Context {
    const Tas& s;
    const Tas& t;
    detail::Decoder dec;
    ExploreResult es, et;
    std::vector<int> image;                 // per S state: T state id, -1 when not T-producible
    std::vector<Assembly> stray;            // images that are not T states, by S state
    std::map<Key, int> t_id;
    std::vector<std::vector<int>> by_image;  // T state -> S states
    bool budget_out = false;

    Context(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& tw, const SimLimits& lim)
        : s(s_sys), t(t_sys), dec(r, s_sys.tiles, &t_sys.tiles) {
        ExploreLimits el;
        el.max_states = lim.max_states;
        el.keep_graph = true;
        el.parallel = lim.parallel;
        es = explore(s, scale_window(tw, r.m), el);
        et = explore(t, tw, el);
        budget_out = es.exhausted || et.exhausted;
        if (budget_out) return;
        for (std::size_t k = 0; k < et.graph.states.size(); ++k)
            t_id.emplace(key_of(assembly_of(et.graph.states[k])), static_cast<int>(k));
        by_image.resize(et.graph.states.size());
        image.resize(es.graph.states.size(), -1);
        stray.resize(es.graph.states.size());
        for (std::size_t k = 0; k < es.graph.states.size(); ++k) {
            Assembly img = dec.image(es.graph.states[k]);
            auto it = t_id.find(key_of(img));
            if (it != t_id.end()) {
                image[k] = it->second;
                by_image[it->second].push_back(static_cast<int>(k));
            } else {
                stray[k] = std::move(img);
            }
        }
    }

    Assembly s_asm(int k) const { return assembly_of(es.graph.states[k]); }
    Assembly t_asm(int k) const { return assembly_of(et.graph.states[k]); }
    Assembly img(int k) const { return image[k] >= 0 ? t_asm(image[k]) : stray[k]; }

    AssemblySequence seq(int k) const {
        AssemblySequence q;
        q.seed = s.seed;
        for (int v = k; es.graph.parent[v] >= 0; v = es.graph.parent[v]) q.steps.push_back(es.graph.via[v]);
        std::reverse(q.steps.begin(), q.steps.end());
        return q;
    }

    SimulationVerdict base() const {
        SimulationVerdict v;
        v.s_states = es.states;
        v.t_states = et.states;
        if (budget_out) {
            v.inconclusive = true;
            v.detail = es.exhausted ? "exploration budget ran out on S" : "exploration budget ran out on T";
        } else {
            v.passed = true;
        }
        return v;
    }

    void fail(SimulationVerdict& v, Clause c, std::string why) const {
        v.passed = false;
        v.failed_clause = c;
        v.detail = std::move(why);
    }

    SimulationVerdict clean() const {
        auto v = base();
        if (!v.passed) return v;
        for (std::size_t k = 0; k < es.graph.states.size(); ++k) {
            const CleanReport c = dec.clean(es.graph.states[k]);
            if (!c.clean) {
                fail(v, Clause::CleanMapping, "block " + show(*c.violation) + " is not next to a mapped block");
                v.witness.push_back(seq(static_cast<int>(k)));
                return v;
            }
        }
        return v;
    }

    SimulationVerdict follows() const {
        auto v = base();
        if (!v.passed) return v;
        for (std::size_t a = 0; a < es.graph.succ.size(); ++a)
            for (int b : es.graph.succ[a]) {
                if (image[a] >= 0 && image[a] == image[b]) continue;
                const Assembly ia = img(static_cast<int>(a)), ib = img(b);
                if (ia == ib || t_reachable(t, ia, ib)) continue;
                fail(v, Clause::Follows, "an S step maps to assemblies not connected in T");
                v.witness = {seq(static_cast<int>(a)), seq(b)};
                v.t_witness = {ia, ib};
                return v;
            }
        return v;
    }

    SimulationVerdict models() const {
        auto v = base();
        if (!v.passed) return v;
        for (std::size_t al = 0; al < et.graph.succ.size(); ++al) {
            const auto& group = by_image[al];
            const auto& nexts = et.graph.succ[al];
            if (nexts.empty()) continue;
            auto reaches = [&](int sa, int beta) {
                for (int sb : by_image[beta])
                    if (sub(es.graph.states[sa], es.graph.states[sb])) return true;
                return false;
            };
            // The largest admissible witness set: states continuing to every successor.
            std::vector<int> pi;
            for (int sa : group) {
                bool good = true;
                for (int beta : nexts) good = good && reaches(sa, beta);
                if (good) pi.push_back(sa);
            }
            for (int sa : group) {
                if (std::binary_search(pi.begin(), pi.end(), sa)) continue;
                int via = -1;
                for (int beta : nexts)
                    if (reaches(sa, beta)) via = beta;
                if (via < 0) continue;
                bool covered = false;
                for (int p : pi) covered = covered || sub(es.graph.states[p], es.graph.states[sa]);
                if (covered) continue;
                int stuck = -1;
                for (int beta : nexts)
                    if (!reaches(sa, beta)) stuck = beta;
                fail(v, Clause::Models,
                     "an S assembly representing alpha is stranded: it cannot continue to one successor "
                     "and no admissible ancestor represents alpha");
                v.witness = {seq(sa)};
                v.t_witness = {t_asm(static_cast<int>(al)), t_asm(stuck), t_asm(via)};
                return v;
            }
        }
        return v;
    }

    SimulationVerdict equiv() const {
        auto v = clean();
        if (!v.passed) return v;
        for (std::size_t k = 0; k < image.size(); ++k)
            if (image[k] < 0) {
                fail(v, Clause::EquivProductions, "an S assembly represents a T assembly that is not producible");
                v.witness = {seq(static_cast<int>(k))};
                v.t_witness = {stray[k]};
                return v;
            }
        const std::set<int> t_term(et.terminal.begin(), et.terminal.end());
        std::set<int> s_term;
        for (int k : es.terminal) {
            s_term.insert(image[k]);
            if (!t_term.count(image[k])) {
                fail(v, Clause::EquivProductions, "a terminal S assembly represents a non-terminal T assembly");
                v.witness = {seq(k)};
                v.t_witness = {t_asm(image[k])};
                return v;
            }
        }
        for (int k : t_term)
            if (!s_term.count(k)) {
                fail(v, Clause::EquivProductions, "a terminal T assembly is not represented by a terminal S assembly");
                v.t_witness = {t_asm(k)};
                return v;
            }
        for (std::size_t a = 0; a < by_image.size(); ++a)
            if (by_image[a].empty()) {
                fail(v, Clause::EquivProductions, "a producible T assembly has no S representative");
                v.t_witness = {t_asm(static_cast<int>(a))};
                return v;
            }
        return v;
    }
};

}  // namespace

std::string clause_name(Clause c) {
    switch (c) {
        case Clause::EquivProductions: return "EquivProductions";
        case Clause::Follows: return "Follows";
        case Clause::Models: return "Models";
        case Clause::CleanMapping: return "CleanMapping";
    }
    return "?";
}

bool t_reachable(const Tas& t_sys, const Assembly& alpha, const Assembly& beta) {
    for (const auto& [p, tile] : alpha.cells())
        if (beta.at(p) != tile) return false;
    Assembly cur = alpha;
    std::vector<Placement> rest;
    for (const auto& pl : beta.sorted())
        if (!alpha.contains(pl.loc)) rest.push_back(pl);
    // Attachment only gets easier as tiles are added, so greedy order is complete.
    bool progress = true;
    while (!rest.empty() && progress) {
        progress = false;
        for (std::size_t i = 0; i < rest.size();) {
            if (binding_strength(t_sys.tiles, cur, rest[i].loc, rest[i].tile) >= t_sys.temperature) {
                cur.place(rest[i].loc, rest[i].tile);
                rest.erase(rest.begin() + static_cast<long>(i));
                progress = true;
            } else {
                ++i;
            }
        }
    }
    return rest.empty();
}

SimulationVerdict check_clean_all(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& t_window,
                                  const SimLimits& lim) {
    return Context(s_sys, t_sys, r, t_window, lim).clean();
}

SimulationVerdict check_equiv_productions(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r,
                                          const Box& t_window, const SimLimits& lim) {
    return Context(s_sys, t_sys, r, t_window, lim).equiv();
}

SimulationVerdict check_follows(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& t_window,
                                const SimLimits& lim) {
    return Context(s_sys, t_sys, r, t_window, lim).follows();
}

SimulationVerdict check_models(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& t_window,
                               const SimLimits& lim) {
    return Context(s_sys, t_sys, r, t_window, lim).models();
}

SimulationVerdict check_simulation(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& t_window,
                                   const SimLimits& lim) {
    const Context c(s_sys, t_sys, r, t_window, lim);
    for (auto check : {&Context::clean, &Context::follows, &Context::models, &Context::equiv}) {
        auto v = (c.*check)();
        if (!v.passed) return v;
    }
    return c.base();
}

}  // namespace atam
