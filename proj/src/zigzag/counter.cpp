#include <stdexcept>

#include "atam/zigzag.hpp"
#include "collector.hpp"

namespace atam {

namespace {

// Even rows run west to east and increment with an in-row carry. They also
// hand each bit the prefix-AND of the new lower bits, which is the carry the
// following east-to-west row needs.
enum Role { kLow, kMid, kHigh };

const char* role_tag(Role r) { return r == kLow ? "L" : r == kHigh ? "M" : "I"; }

}  // namespace

CompiledCounter compile_counter(int bits, std::uint64_t start, const CounterOptions& opts) {
    if (bits < 2 || bits > 62) throw std::invalid_argument("counter width must be in [2, 62]");
    if (static_cast<std::size_t>(bits) > opts.width_limit)
        throw UncompilableTopology("counter wider than the column-width limit");
    const std::uint64_t top = (std::uint64_t{1} << bits) - 1;
    if (start > top) throw std::invalid_argument("counter start does not fit");
    const std::string& ns = opts.ns;
    detail::TileCollector tc(ns);

    auto ve = [&](int bit, int carry, Role r, bool turn) {
        return Glue{ns + (turn ? "cet|" : "ce|") + std::to_string(bit) + std::to_string(carry) +
                        role_tag(r),
                    turn ? 2 : 1};
    };
    auto vo = [&](int bit, Role r, bool turn) {
        return Glue{ns + (turn ? "cot|" : "co|") + std::to_string(bit) + role_tag(r), turn ? 2 : 1};
    };
    auto he = [&](int carry, int pa) {
        return Glue{ns + "che|" + std::to_string(carry) + std::to_string(pa), 1};
    };
    auto ho = [&](int pa) { return Glue{ns + "cho|" + std::to_string(pa), 1}; };
    const Glue exit{ns + "CX", 2};

    CompiledCounter out;
    out.bits = bits;
    out.start = start;
    out.rows = static_cast<long>(top - start + 1);
    out.exit_label = exit.label;

    for (int r = 0; r < 3; ++r) {
        const Role role = static_cast<Role>(r);
        for (int bit = 0; bit < 2; ++bit) {
            // Even row cell: south from an odd row, carry and prefix-AND from the west.
            for (int carry = 0; carry < 2; ++carry)
                for (int pa = 0; pa < 2; ++pa) {
                    if (role == kLow && !(carry && pa)) continue;
                    const int nb = bit ^ carry;
                    const int pa2 = pa & nb;
                    std::array<Glue, 4> g;
                    g[S] = vo(bit, role, role == kLow);
                    if (role != kLow) g[W] = he(carry, pa);
                    if (role == kHigh)
                        g[N] = pa2 ? exit : ve(nb, pa, role, true);
                    else {
                        g[N] = ve(nb, pa, role, false);
                        g[E] = he(bit & carry, pa2);
                    }
                    tc.intern("CTR" + std::to_string(nb), g);
                }
            // Odd row cell: south from an even row, prefix-AND from the east.
            for (int carry = 0; carry < 2; ++carry)
                for (int pa = 0; pa < 2; ++pa) {
                    if (role == kHigh && !pa) continue;
                    const int nb = bit ^ carry;
                    const int pa2 = pa & nb;
                    std::array<Glue, 4> g;
                    g[S] = ve(bit, carry, role, role == kHigh);
                    if (role != kHigh) g[E] = ho(pa);
                    if (role == kLow)
                        g[N] = pa2 ? exit : vo(nb, role, true);
                    else {
                        g[N] = vo(nb, role, false);
                        g[W] = ho(pa2);
                    }
                    tc.intern("CTR" + std::to_string(nb), g);
                }
        }
    }

    // Row 0 holds the start value.
    int pa = 1;
    for (int p = 0; p < bits; ++p) {
        const Role role = p == 0 ? kLow : p == bits - 1 ? kHigh : kMid;
        const int bit = static_cast<int>((start >> p) & 1);
        std::array<Glue, 4> g;
        const int pa2 = pa & bit;
        if (role == kHigh && pa2) {
            g[N] = exit;
            out.exit_point = {p, 0};
        } else {
            g[N] = ve(bit, pa, role, role == kHigh);
        }
        out.row0_north.push_back(g[N]);
        pa = pa2;
        if (opts.standalone) {
            if (p > 0) g[W] = Glue{ns + "cSB|" + std::to_string(p), 2};
            if (p + 1 < bits) g[E] = Glue{ns + "cSB|" + std::to_string(p + 1), 2};
            out.sys.seed.place({p, 0}, tc.intern("CTRIN" + std::to_string(bit), g));
        }
    }
    if (start != top) {
        // Final row index rows-1: even rows end at the high bit, odd at the low bit.
        out.exit_point = {(out.rows - 1) % 2 == 0 ? bits - 1 : 0, static_cast<int>(out.rows - 1)};
    }
    out.sys.tiles = TileSet(tc.take());
    out.sys.temperature = 2;
    return out;
}

std::uint64_t decode_counter_row(const CompiledCounter& c, const Assembly& asm_, long row) {
    if (row < 0 || row >= c.rows) throw IncompleteRow("counter row " + std::to_string(row) + " does not exist");
    std::uint64_t v = 0;
    for (int p = 0; p < c.bits; ++p) {
        const int t = asm_.at({p, static_cast<int>(row)});
        if (t < 0) throw IncompleteRow("counter row " + std::to_string(row) + " is missing a bit");
        const std::string& name = c.sys.tiles[t].name;
        const char b = name[name.rfind('#') - 1];
        if (b == '1') v |= std::uint64_t{1} << p;
    }
    return v;
}

}  // namespace atam
