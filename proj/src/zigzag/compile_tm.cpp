#include "atam/zigzag.hpp"

#include "collector.hpp"

#include <algorithm>
#include <optional>

namespace atam {

namespace {

// Each tile holds two adjacent tape cells; cell 0 is nearer the fixed end.
// What row r tells row r + 1 about a tile.
struct VInfo {
    std::string sym[2];
    std::string here;  // head of the next configuration sits in this tile
    int here_at = 0;
    std::string leave;  // head moves into the neighbouring tile along the next row
    long fixed = -1;    // index of the next row; only on tile 0
    long end = -1;      // tape width in cells; only on the last tile
    int lim = 3;        // cells of this tile and the next below the space cap
    bool cap = false;   // next row is the time-cap row
    char halt = 0;      // next row is a halt copy ('A' or 'R')
    bool abort = false; // next row is an abort copy
    bool turn = false;  // strength-2 glue the next row starts from
};

// Message passed along a row. Heads enter the receiver at its near cell.
struct HInfo {
    std::string arrive;  // head of this row's configuration
    std::string moved;   // head of the next configuration
    bool cap_next = false;
    bool cap_row = false;
    char halt_next = 0;
    bool abort_next = false;
    char halt_row = 0;
    bool abort_row = false;
    long ext = -1;  // receiver is a new tile; value is the new width
};

std::string vlabel(const std::string& ns, const VInfo& v) {
    std::string s = ns + (v.turn ? "T|" : "V|") + v.sym[0] + "," + v.sym[1] + "|";
    if (!v.here.empty()) s += v.here + "^" + std::to_string(v.here_at);
    s += "|" + v.leave + "|";
    if (v.fixed >= 0) s += std::to_string(v.fixed);
    s += "|";
    if (v.end >= 0) s += std::to_string(v.end);
    s += "|";
    if (v.lim < 3) s += "L" + std::to_string(v.lim);
    if (v.cap) s += "c";
    if (v.halt) s += v.halt;
    if (v.abort) s += "x";
    return s;
}

std::string hlabel(const std::string& ns, const char* tag, const HInfo& h) {
    std::string s = ns + tag + h.arrive + "|" + h.moved + "|";
    if (h.cap_next) s += "n";
    if (h.cap_row) s += "c";
    if (h.halt_next) s += std::string("h") + h.halt_next;
    if (h.abort_next) s += "a";
    if (h.halt_row) s += std::string("H") + h.halt_row;
    if (h.abort_row) s += "X";
    if (h.ext >= 0) s += "|" + std::to_string(h.ext);
    return s;
}

struct CellOut {
    std::string prefix;
    std::string sym[2];
    std::string head;
    int head_at = 0;
    std::optional<VInfo> north;
    std::optional<Glue> exit;
    std::optional<HInfo> next;
    int bit = -1;  // set on copy rows
};

struct Compiler {
    const TuringMachine& tm;
    std::uint64_t space_cap, time_cap;
    const CompileOptions& opts;
    detail::TileCollector tiles{opts.ns};

    // How many cells from `base` on lie below the space cap, at most 3.
    int limit_from(long base) const {
        const auto b = static_cast<std::uint64_t>(base);
        return b >= space_cap ? 0 : static_cast<int>(std::min<std::uint64_t>(3, space_cap - b));
    }

    CellOut rule(const std::optional<VInfo>& south, const std::optional<HInfo>& in, bool out_row) const {
        CellOut o;
        o.sym[0] = south ? south->sym[0] : tm.blank;
        o.sym[1] = south ? south->sym[1] : tm.blank;
        const bool at_fixed = south && south->fixed >= 0;
        const long end = south ? south->end : in->ext;
        const int near = out_row ? 0 : 1;

        const char halt = (south && south->halt) ? south->halt : (in ? in->halt_row : 0);
        const bool abort = (south && south->abort) || (in && in->abort_row);
        const bool last = out_row ? end >= 0 : at_fixed;

        if (halt || abort) {
            // Copy row: frozen image of the previous configuration.
            o.prefix = halt == 'A' ? "HALT:ACCEPT|" : halt == 'R' ? "HALT:REJECT|" : "ABORT:";
            if (south) {
                o.head = south->here;
                o.head_at = south->here_at;
            }
            o.bit = halt == 'A' ? 1 : 0;
            if (!last) {
                HInfo n;
                n.halt_row = halt;
                n.abort_row = !halt;
                o.next = n;
            }
            if (at_fixed && opts.exit_glue)
                o.exit = Glue{opts.ns + "X|" + std::to_string(o.bit), 2};
            return o;
        }

        const bool row_cap = (south && south->cap) || (in && in->cap_row);
        VInfo nv;
        nv.sym[0] = o.sym[0];
        nv.sym[1] = o.sym[1];
        nv.end = end;
        nv.lim = south ? south->lim : 3;
        if (end >= 0) nv.lim = limit_from(end - 2);
        HInfo nx;
        nx.cap_row = row_cap;
        nx.cap_next = in && in->cap_next;
        nx.halt_next = in ? in->halt_next : 0;
        nx.abort_next = (in && in->abort_next) || row_cap;
        if (at_fixed) {
            nv.fixed = south->fixed + 1;
            if (static_cast<std::uint64_t>(south->fixed) + 1 == time_cap) {
                nv.cap = true;
                if (out_row) nx.cap_next = true;
            }
        }

        std::string head;
        int at = 0;
        if (south && !south->here.empty()) {
            head = south->here;
            at = south->here_at;
        }
        if (in && !in->arrive.empty()) {
            head = in->arrive;
            at = near;
        }
        o.head = head;
        o.head_at = at;

        if (!head.empty()) {
            const Transition* tr = tm.step(head, o.sym[at]);
            if (tm.halting(head) || !tr) {
                nx.halt_next = head == tm.accept ? 'A' : 'R';
                nv.here = head;
                nv.here_at = at;
            } else if (row_cap) {
                nv.here = head;
                nv.here_at = at;
            } else {
                const int outward = tm.tape == Tape::OneWayRight ? 'R' : 'L';
                const bool mv_out = tr->move == outward;
                int j = at + (mv_out ? 1 : -1);
                if (j < 0 && at_fixed) j = 0;
                if (mv_out && j >= nv.lim) {
                    nx.abort_next = true;
                    nv.here = head;
                    nv.here_at = at;
                } else {
                    nv.sym[at] = tr->write;
                    if (j == 0 || j == 1) {
                        nv.here = tr->next;
                        nv.here_at = j;
                    } else if ((j == 2) == out_row) {
                        nx.moved = tr->next;
                    } else {
                        nv.leave = tr->next;
                    }
                }
            }
        } else if (south && !south->leave.empty()) {
            nx.arrive = south->leave;
        } else if (in && !in->moved.empty()) {
            nv.here = in->moved;
            nv.here_at = near;
        }
        nv.halt = nx.halt_next;
        nv.abort = nx.abort_next;
        nv.cap = nv.cap || nx.cap_next;

        // The last tile of an outward row grows the tape when a head leaves it.
        if (out_row && end >= 0 && (!nx.moved.empty() || !nx.arrive.empty())) {
            nx.ext = end + 2;
            nv.end = -1;
        }
        const bool ends_row = out_row ? nv.end >= 0 : at_fixed;
        nv.turn = ends_row;
        o.north = nv;
        if (!ends_row) o.next = nx;
        return o;
    }
};

}  // namespace

CompiledTm compile_tm(const TuringMachine& tm, const std::vector<std::string>& input,
                      std::uint64_t space_cap, std::uint64_t time_cap, const CompileOptions& opts) {
    tm.validate();
    for (const auto& s : input)
        if (s.empty() || s.find_first_of("@#|~:,^") != std::string::npos)
            throw std::invalid_argument("input symbol is empty or reserved");

    CompiledTm out;
    out.ns = opts.ns;
    out.tape = tm.tape;
    out.run = run_tm(tm, input, space_cap, time_cap, opts.row_limit);
    out.bit = out.run.bit() ? 1 : 0;
    TmConfig c0 = out.run.trace.front();
    if (c0.tape.size() > space_cap) throw UncompilableTopology("input is wider than the space cap");
    while (c0.tape.size() < 4 || c0.tape.size() % 2) c0.tape.push_back(tm.blank);
    const long tiles0 = static_cast<long>(c0.tape.size() / 2);
    if (static_cast<std::size_t>(tiles0) > opts.width_limit)
        throw UncompilableTopology("input is wider than the column-width limit");

    Compiler cc{tm, space_cap, time_cap, opts};
    out.out_dx = tm.tape == Tape::OneWayRight ? 1 : -1;
    bool row_out;
    if (opts.standalone) {
        out.x_fixed = tm.tape == Tape::OneWayRight ? 0 : static_cast<int>(tiles0 - 1);
        out.y0 = 0;
        // Even rows run west to east.
        row_out = tm.tape == Tape::OneWayRight;
    } else {
        out.x_fixed = opts.x_fixed;
        out.y0 = opts.y0;
        row_out = opts.row0_outward;
    }
    const Dir toward_hi = out.out_dx > 0 ? E : W;  // side facing tile t + 1
    const Dir toward_lo = opposite(toward_hi);
    const std::string& ns = opts.ns;

    // Row 0 is evaluated from a synthetic south row describing the input.
    std::vector<std::optional<VInfo>> south(tiles0);
    for (long t = 0; t < tiles0; ++t) {
        VInfo v;
        v.sym[0] = c0.tape[2 * t];
        v.sym[1] = c0.tape[2 * t + 1];
        if (t == 0) {
            v.here = tm.start;
            v.fixed = 0;
        }
        if (t == tiles0 - 1) v.end = 2 * tiles0;
        v.lim = cc.limit_from(2 * t);
        v.cap = time_cap == 0;
        south[t] = v;
    }

    Assembly seed;
    Box fp;
    for (long row = 0;; ++row) {
        if (static_cast<std::size_t>(row) >= opts.row_limit)
            throw UncompilableTopology("row limit exceeded");
        const long w = static_cast<long>(south.size());
        if (static_cast<std::size_t>(w) > opts.width_limit)
            throw UncompilableTopology("row wider than the column-width limit");
        const bool seed_row = row == 0;
        const int y = out.y0 + static_cast<int>(row);
        const char* tag = row_out ? "Ho|" : "Hi|";
        std::vector<std::optional<VInfo>> north(w);
        std::optional<HInfo> in;
        bool copy_row = false;
        long placed = 0;

        auto glue_of = [&](const std::optional<HInfo>& h) -> Glue {
            if (!h) return {};
            return Glue{hlabel(ns, tag, *h), h->ext >= 0 ? 2 : 1};
        };
        auto emit = [&](long t, const std::optional<VInfo>& s, const std::optional<HInfo>& hin) {
            CellOut o = cc.rule(s, hin, row_out);
            std::array<Glue, 4> g;
            if (o.north) g[N] = Glue{vlabel(ns, *o.north), o.north->turn ? 2 : 1};
            if (o.exit) g[N] = *o.exit;
            if (s && !seed_row) g[S] = Glue{vlabel(ns, *s), s->turn ? 2 : 1};
            g[row_out ? toward_lo : toward_hi] = glue_of(hin);
            g[row_out ? toward_hi : toward_lo] = glue_of(o.next);
            std::string body = o.prefix + o.sym[0] + "," + o.sym[1];
            if (!o.head.empty()) body += "@" + o.head + "^" + std::to_string(o.head_at);
            const Point loc{out.x_of(t), y};
            fp.include(loc);
            if (seed_row) {
                // Seed tiles are held together by strength-2 bonds.
                body = "IN:" + body;
                g[toward_lo] = t > 0 ? Glue{ns + "SB|" + std::to_string(t), 2} : Glue{};
                g[toward_hi] = t + 1 < w ? Glue{ns + "SB|" + std::to_string(t + 1), 2} : Glue{};
                if (opts.standalone) seed.place(loc, cc.tiles.intern(body, g));
            } else {
                cc.tiles.intern(body, g);
            }
            if (o.exit) {
                out.exit_label = o.exit->label;
                out.exit_point = loc;
            }
            if (!o.prefix.empty()) copy_row = true;
            ++placed;
            return o;
        };

        for (long k = 0; k < w; ++k) {
            const long t = row_out ? k : w - 1 - k;
            CellOut o = emit(t, south[t], in);
            north[t] = o.north;
            in = o.next;
        }
        if (in && in->ext >= 0) {
            CellOut o = emit(w, std::nullopt, in);
            north.push_back(o.north);
        }
        out.row_widths.push_back(placed);
        if (seed_row) {
            for (const auto& v : north)
                out.row0_north.push_back(v ? Glue{vlabel(ns, *v), v->turn ? 2 : 1} : Glue{});
        }
        if (copy_row) break;
        south = std::move(north);
        row_out = !row_out;
    }

    out.footprint = fp;
    out.sys.tiles = TileSet(cc.tiles.take());
    out.sys.seed = std::move(seed);
    out.sys.temperature = 2;
    return out;
}

TmConfig decode_row(const CompiledTm& c, const Assembly& asm_, long row) {
    if (row < 0 || row >= c.rows()) throw IncompleteRow("row " + std::to_string(row) + " does not exist");
    const long w = c.row_widths[row];
    const int y = c.y0 + static_cast<int>(row);
    TmConfig cfg;
    cfg.head = -1;
    for (long t = 0; t < w; ++t) {
        const int id = asm_.at({c.x_of(t), y});
        if (id < 0) throw IncompleteRow("row " + std::to_string(row) + " is missing tile " + std::to_string(t));
        // [kind prefix] sym,sym[@state^cell]#n after the namespace
        std::string name = c.sys.tiles[id].name.substr(c.ns.size());
        if (auto k = name.find_last_of(":|"); k != std::string::npos) name = name.substr(k + 1);
        name = name.substr(0, name.rfind('#'));
        const auto at = name.find('@');
        const std::string cells = name.substr(0, at);
        const auto comma = cells.find(',');
        cfg.tape.push_back(cells.substr(0, comma));
        cfg.tape.push_back(cells.substr(comma + 1));
        if (at != std::string::npos) {
            if (cfg.head >= 0) throw IncompleteRow("row " + std::to_string(row) + " shows two heads");
            const auto caret = name.rfind('^');
            cfg.state = name.substr(at + 1, caret - at - 1);
            cfg.head = 2 * t + std::stol(name.substr(caret + 1));
        }
    }
    if (cfg.head < 0) throw IncompleteRow("row " + std::to_string(row) + " shows no head");
    return cfg;
}

}  // namespace atam
