#include <iomanip>
#include <map>
#include <sstream>

#include "atam/cli.hpp"
#include "atam/construction.hpp"

namespace atam::cli {

namespace {

constexpr const char* kPalette = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

Box region(const Assembly& a, const std::optional<Box>& crop) { return crop ? *crop : a.bounds(); }

// Tile name with a macrotile mark and cell suffix stripped.
std::string base_name(const std::string& name) {
    std::string s = name;
    if (s.rfind("M[", 0) == 0) {
        const auto close = s.find(']');
        if (close != std::string::npos) s = s.substr(2, close - 2);
    }
    return s;
}

std::string colour_for(const std::string& name) {
    static const std::map<std::string, std::string> by_module{
        {"seed", "#333333"},     {"planter", "#8c564b"},   {"bumper", "#7f7f7f"},  {"leftComp", "#1f77b4"},
        {"leftOut", "#aec7e8"},  {"rightComp", "#2ca02c"}, {"topComp", "#9467bd"}, {"arm", "#d62728"},
        {"armColumn", "#ff7f0e"}, {"alleyLeft", "#17becf"}, {"alleyRight", "#bcbd22"}, {"alleyMid", "#e377c2"}};
    const std::string b = base_name(name);
    auto it = by_module.find(module_of(b));
    if (it != by_module.end()) return it->second;
    // Anything else: a stable hue from the prefix up to the first separator.
    const std::string prefix = b.substr(0, b.find_first_of("_:/"));
    const std::string h = digest(prefix);
    return "#" + h.substr(0, 6);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string render_text(const TileSet& ts, const Assembly& a, const std::optional<Box>& crop) {
    const Box b = region(a, crop);
    std::map<int, char> key;
    std::vector<int> order;
    std::ostringstream os;
    for (int y = b.y1; y >= b.y0; --y) {
        for (int x = b.x0; x <= b.x1; ++x) {
            const int t = a.at({x, y});
            if (t < 0) {
                os << '.';
                continue;
            }
            auto it = key.find(t);
            if (it == key.end()) {
                const char c = order.size() < 62 ? kPalette[order.size()] : '#';
                it = key.emplace(t, c).first;
                order.push_back(t);
            }
            os << it->second;
        }
        os << '\n';
    }
    os << '\n';
    for (std::size_t k = 0; k < order.size() && k < 62; ++k) os << kPalette[k] << ' ' << ts[order[k]].name << '\n';
    if (order.size() > 62) os << "# " << order.size() - 62 << " more\n";
    return os.str();
}

std::string render_svg(const TileSet& ts, const Assembly& a, const std::optional<Box>& crop) {
    const Box b = region(a, crop);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << b.width() << ' ' << b.height()
       << "\" width=\"" << 8 * b.width() << "\" height=\"" << 8 * b.height() << "\">\n";
    for (const auto& pl : a.sorted()) {
        if (!b.contains(pl.loc)) continue;
        const std::string& name = ts[pl.tile].name;
        // SVG y grows downward.
        os << "<rect x=\"" << pl.loc.x - b.x0 << "\" y=\"" << b.y1 - pl.loc.y
           << "\" width=\"1\" height=\"1\" fill=\"" << colour_for(name) << "\"><title>" << escape(name)
           << "</title></rect>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace atam::cli
