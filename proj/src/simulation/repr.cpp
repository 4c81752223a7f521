#include <algorithm>

#include "atam/io.hpp"
#include "decoder.hpp"

namespace atam {

namespace {

int floor_div(int a, int m) { return a >= 0 ? a / m : -((-a + m - 1) / m); }

bool well_shaped(const BlockRepr::Cells& c, int m) {
    if (static_cast<int>(c.size()) != m) return false;
    for (const auto& row : c)
        if (static_cast<int>(row.size()) != m) return false;
    return true;
}

}  // namespace

std::string macro_mark(const std::string& t_name) { return "M[" + t_name + "]"; }

std::optional<std::string> decode_mark(const std::string& s_name) {
    if (s_name.rfind("M[", 0) != 0) return std::nullopt;
    const auto close = s_name.rfind(']');
    if (close == std::string::npos || close < 2) return std::nullopt;
    return s_name.substr(2, close - 2);
}

void BlockRepr::validate() const {
    if (m < 1) throw InvalidRepr("block size m must be positive");
    if (rule == Rule::Prefix) return;
    for (std::size_t a = 0; a < table.size(); ++a) {
        const auto& ea = table[a];
        if (!well_shaped(ea.block, m)) throw InvalidRepr("table entry " + std::to_string(a) + " is not m x m");
        bool any = false;
        for (const auto& row : ea.block)
            for (const auto& c : row) any |= c.has_value();
        if (!any) throw InvalidRepr("table entry " + std::to_string(a) + " is empty");
        for (std::size_t b = 0; b < a; ++b) {
            const auto& eb = table[b];
            if (eb.maps_to == ea.maps_to) continue;
            bool compatible = true;
            for (int y = 0; y < m && compatible; ++y)
                for (int x = 0; x < m && compatible; ++x)
                    if (ea.block[y][x] && eb.block[y][x] && *ea.block[y][x] != *eb.block[y][x])
                        compatible = false;
            // Their union is a block both entries sit under.
            if (compatible)
                throw InvalidRepr("entries " + std::to_string(b) + " and " + std::to_string(a) +
                                  " share a superblock but map to " + eb.maps_to + " and " + ea.maps_to);
        }
    }
}

BlockRepr repr_from_json(const nlohmann::json& j) {
    BlockRepr r;
    try {
        if (!j.is_object()) throw InputError("repr must be a JSON object");
        r.m = j.at("m").get<int>();
        const std::string rule = j.value("rule", std::string("table"));
        if (rule == "prefix")
            r.rule = BlockRepr::Rule::Prefix;
        else if (rule == "table")
            r.rule = BlockRepr::Rule::Table;
        else
            throw InputError("unknown repr rule: " + rule);
        if (j.contains("table"))
            for (const auto& e : j.at("table")) {
                BlockRepr::Entry en;
                en.maps_to = e.at("maps_to").get<std::string>();
                for (const auto& row : e.at("block")) {
                    en.block.emplace_back();
                    for (const auto& c : row)
                        en.block.back().push_back(c.is_null() ? std::nullopt
                                                              : std::optional<std::string>(c.get<std::string>()));
                }
                r.table.push_back(std::move(en));
            }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad repr: ") + e.what());
    }
    r.validate();
    return r;
}

nlohmann::json repr_to_json(const BlockRepr& r) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& e : r.table) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : e.block) {
            nlohmann::json cells = nlohmann::json::array();
            for (const auto& c : row) cells.push_back(c ? nlohmann::json(*c) : nlohmann::json(nullptr));
            rows.push_back(cells);
        }
        table.push_back({{"block", rows}, {"maps_to", e.maps_to}});
    }
    return {{"m", r.m}, {"rule", r.rule == BlockRepr::Rule::Prefix ? "prefix" : "table"}, {"table", table}};
}

Point block_of(Point p, int m) { return {floor_div(p.x, m), floor_div(p.y, m)}; }

namespace detail {

Decoder::Decoder(const BlockRepr& r, const TileSet& s, const TileSet* t)
    : m_(r.m), rule_(r.rule), t_(t) {
    if (r.m < 1) throw InvalidRepr("block size m must be positive");
    if (rule_ == BlockRepr::Rule::Prefix) {
        for (const auto& tt : s.tiles()) mark_.push_back(decode_mark(tt.name));
        return;
    }
    for (const auto& e : r.table) {
        if (!well_shaped(e.block, m_)) throw InvalidRepr("table entry is not m x m");
        Pattern p;
        p.to = e.maps_to;
        bool possible = true;
        for (int y = 0; y < m_; ++y)
            for (int x = 0; x < m_; ++x)
                if (e.block[y][x]) {
                    const auto id = s.find(*e.block[y][x]);
                    if (!id) possible = false;
                    else p.cells.push_back({y * m_ + x, *id});
                }
        if (p.cells.empty()) throw InvalidRepr("empty table entry");
        if (possible) patterns_.push_back(std::move(p));
    }
}

int Decoder::target(const std::string& name) const {
    if (!t_) return -2;
    const auto id = t_->find(name);
    if (!id) throw InvalidRepr("repr maps to unknown tile " + name);
    return *id;
}

int Decoder::decode(const std::vector<int>& cells) const {
    const auto name = decode_name(cells);
    return name ? target(*name) : -1;
}

std::optional<std::string> Decoder::decode_name(const std::vector<int>& cells) const {
    const std::string* hit = nullptr;
    auto take = [&](const std::string& to) {
        if (hit && *hit != to) throw InvalidRepr("block decodes to both " + *hit + " and " + to);
        hit = &to;
    };
    if (rule_ == BlockRepr::Rule::Prefix) {
        for (int c : cells)
            if (c >= 0 && mark_[c]) take(*mark_[c]);
    } else {
        for (const auto& p : patterns_) {
            bool ok = true;
            for (auto [cell, tile] : p.cells)
                if (cells[cell] != tile) {
                    ok = false;
                    break;
                }
            if (ok) take(p.to);
        }
    }
    if (!hit) return std::nullopt;
    return *hit;
}

std::map<Point, std::vector<int>> Decoder::blocks(const std::vector<Placement>& cells) const {
    std::map<Point, std::vector<int>> out;
    for (const auto& pl : cells) {
        const Point b = block_of(pl.loc, m_);
        auto& v = out[b];
        if (v.empty()) v.assign(static_cast<std::size_t>(m_) * m_, -1);
        v[(pl.loc.y - b.y * m_) * m_ + (pl.loc.x - b.x * m_)] = pl.tile;
    }
    return out;
}

Assembly Decoder::image(const std::vector<Placement>& cells) const {
    Assembly a;
    for (const auto& [b, v] : blocks(cells)) {
        const int t = decode(v);
        if (t >= 0) a.place(b, t);
    }
    return a;
}

CleanReport Decoder::clean(const std::vector<Placement>& cells) const {
    const auto bl = blocks(cells);
    CleanReport rep;
    if (bl.size() <= 1) return rep;
    std::map<Point, bool> mapped;
    for (const auto& [b, v] : bl) mapped[b] = decode(v) != -1;
    for (const auto& [b, is] : mapped) {
        if (is) continue;
        bool near = false;
        for (Dir d : kDirs) {
            auto it = mapped.find(b.step(d));
            near |= it != mapped.end() && it->second;
        }
        if (!near) return {false, b};
    }
    return rep;
}

}  // namespace detail

std::optional<std::string> repr_block(const BlockRepr& r, const TileSet& s, const Assembly& a, Point b) {
    std::vector<Placement> cells;
    for (int y = 0; y < r.m; ++y)
        for (int x = 0; x < r.m; ++x) {
            const Point q{b.x * r.m + x, b.y * r.m + y};
            if (const int t = a.at(q); t >= 0) cells.push_back({q, t});
        }
    if (cells.empty()) return std::nullopt;
    const detail::Decoder dec(r, s);
    return dec.decode_name(dec.blocks(cells).begin()->second);
}

Assembly apply_repr(const BlockRepr& r, const TileSet& s, const TileSet& t, const Assembly& a) {
    return detail::Decoder(r, s, &t).image(a.sorted());
}

CleanReport check_clean(const BlockRepr& r, const TileSet& s, const Assembly& a) {
    return detail::Decoder(r, s).clean(a.sorted());
}

}  // namespace atam
