#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "atam/cli.hpp"
#include "atam/construction.hpp"
#include "atam/gst.hpp"
#include "atam/io.hpp"
#include "atam/simulation.hpp"

namespace atam::cli {

namespace {

json box_json(const Box& b) { return {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}}; }

json sequence_json(const TileSet& ts, const AssemblySequence& q) {
    json steps = json::array();
    for (const auto& pl : q.steps) steps.push_back({{"x", pl.loc.x}, {"y", pl.loc.y}, {"tile", ts[pl.tile].name}});
    return {{"seed", assembly_to_json(ts, q.seed)}, {"steps", steps}};
}

json report_json(const SubiterationReport& r) {
    json boxes = json::array();
    for (const auto& mb : r.boxes) boxes.push_back({{"module", mb.module}, {"box", box_json(mb.box)}});
    json j{{"i", r.i},
           {"j", r.j},
           {"j_bits", r.j_bits()},
           {"a_plus_bits", r.a_plus_bits},
           {"is_empty", r.is_empty},
           {"matching_positions", r.matching_positions},
           {"planter_top", r.planter_top},
           {"alley_x", r.alley_x},
           {"bit_rows", r.bit_rows},
           {"extent", box_json(r.extent)},
           {"boxes", boxes}};
    j["arm_bits"] = r.arm_bits ? json(*r.arm_bits) : json(nullptr);
    if (r.arm_bits) j["arm_type"] = r.arm_type();
    return j;
}

Policy make_policy(const std::string& name, std::optional<std::uint64_t> seed) {
    if (name.empty()) return seed ? Policy::random(*seed) : Policy::lexmin();
    if (name == "lexmin") return Policy::lexmin();
    if (name == "lexmax") return Policy::lexmax();
    if (name == "fifo") return Policy::fifo();
    if (name == "random") return Policy::random(seed.value_or(0));
    throw InputError("unknown policy: " + name);
}

// Shared state of one invocation: inputs read, outputs written, and the
// manifest describing both.
class Session {
public:
    Session(std::ostream& out) : out_(out) {
        m_["tool_version"] = kToolVersion;
        m_["inputs"] = json::object();
        m_["outputs"] = json::object();
        m_["budgets"] = json::object();
        m_["policy_seed"] = 0;
        m_["window"] = nullptr;
    }

    // Read once, so pipes work and the digest matches what was parsed.
    json read(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot open " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        const std::string bytes = ss.str();
        m_["inputs"][path] = digest(bytes);
        try {
            return json::parse(bytes);
        } catch (const json::parse_error& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    void write(const std::string& path, const std::string& content) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot write " + path);
        f << content;
        if (!f) throw InputError("cannot write " + path);
        m_["outputs"][path] = digest(content);
    }

    void emit(const json& j) {
        const std::string s = j.dump(2) + "\n";
        out_ << s;
        m_["outputs"]["<stdout>"] = digest(s);
        json v = j.contains("verdict") ? j["verdict"] : j;
        for (const char* bulky : {"assembly", "system", "reports", "repr", "text", "witness", "t_witness"}) v.erase(bulky);
        m_["verdicts"] = v;
    }

    json& manifest() { return m_; }

private:
    std::ostream& out_;
    json m_;
};

int simulate(Session& s, const std::string& system, std::optional<std::size_t> steps,
             const std::optional<std::string>& window, const std::string& policy,
             std::optional<std::uint64_t> seed, const std::string& out, const std::string& svg,
             const std::string& text, const std::optional<std::string>& crop) {
    const Tas sys = tas_from_json(s.read(system));
    const std::size_t n = steps.value_or(default_budget());
    Box win;
    if (window) {
        win = parse_box(*window);
    } else {
        // The seed with a margin on every side.
        win = sys.seed.bounds();
        win = {win.x0 - 64, win.y0 - 64, win.x1 + 64, win.y1 + 64};
    }
    const Policy pol = make_policy(policy, seed);
    s.manifest()["policy_seed"] = pol.seed;
    s.manifest()["window"] = box_json(win);
    s.manifest()["budgets"]["steps"] = n;

    Grower g(sys, win, pol);
    const std::size_t made = g.run(n);
    const Assembly a = g.assembly();
    json summary{{"placements", a.size()},
                 {"steps", made},
                 {"terminal", frontier(sys, a, win).empty()},
                 {"order_hash", digest(std::to_string(g.order_hash()))}};
    if (const auto& c = g.conflict())
        summary["conflict"] = {{"x", c->loc.x},
                               {"y", c->loc.y},
                               {"tiles", {sys.tiles[c->tile_a].name, sys.tiles[c->tile_b].name}},
                               {"step", c->step}};
    else
        summary["conflict"] = nullptr;

    const json asm_json = assembly_to_json(sys.tiles, a);
    if (!out.empty())
        s.write(out, asm_json.dump(2) + "\n");
    else
        summary["assembly"] = asm_json;
    const std::optional<Box> cb = crop ? std::optional<Box>(parse_box(*crop)) : std::nullopt;
    if (!svg.empty()) s.write(svg, render_svg(sys.tiles, a, cb));
    if (!text.empty()) s.write(text, render_text(sys.tiles, a, cb));
    s.emit(summary);
    return kPass;
}

int generate(Session& s, const std::string& params, const std::string& out, const std::string& report) {
    const ConstructionParams p = params.empty() ? default_params() : params_from_json(s.read(params));
    const Construction c = build_construction(p);
    json reports = json::array();
    for (const auto& r : c.reports) reports.push_back(report_json(r));
    json summary{{"tiles", c.sys.tiles.size()},
                 {"subiterations", c.reports.size()},
                 {"arm_types", 1ULL << p.a},
                 {"window", box_json(c.window)},
                 {"expected_tiles", c.expected_tiles}};
    const json sys = tas_to_json(c.sys);
    if (!out.empty())
        s.write(out, sys.dump(2) + "\n");
    else
        summary["system"] = sys;
    if (!report.empty())
        s.write(report, reports.dump(2) + "\n");
    else
        summary["reports"] = reports;
    s.manifest()["window"] = box_json(c.window);
    s.emit(summary);
    return kPass;
}

int verify(Session& s, const std::string& s_file, const std::string& t_file, const std::string& r_file,
           const std::string& window, std::optional<std::size_t> budget, bool parallel, const std::string& out) {
    const Tas ss = tas_from_json(s.read(s_file));
    const Tas ts = tas_from_json(s.read(t_file));
    const BlockRepr r = repr_from_json(s.read(r_file));
    const Box win = parse_box(window);
    SimLimits lim;
    lim.max_states = budget.value_or(default_budget());
    lim.parallel = parallel;
    s.manifest()["window"] = box_json(win);
    s.manifest()["budgets"]["max_states"] = lim.max_states;

    const SimulationVerdict v = check_simulation(ss, ts, r, win, lim);
    json witness = json::array(), t_witness = json::array();
    for (const auto& q : v.witness) witness.push_back(sequence_json(ss.tiles, q));
    for (const auto& a : v.t_witness) t_witness.push_back(assembly_to_json(ts.tiles, a));
    json verdict{{"passed", v.passed},
                 {"inconclusive", v.inconclusive},
                 {"failed_clause", v.failed_clause ? json(clause_name(*v.failed_clause)) : json(nullptr)},
                 {"bounded", v.bounded},
                 {"detail", v.detail},
                 {"s_states", v.s_states},
                 {"t_states", v.t_states},
                 {"witness", witness},
                 {"t_witness", t_witness}};
    if (!out.empty()) s.write(out, verdict.dump(2) + "\n");
    s.emit({{"verdict", verdict}});
    if (v.inconclusive) return kBudget;
    return v.passed ? kPass : kVerdictFail;
}

int gst(Session& s, const std::string& system, const std::string& spec_file, int c,
        std::optional<std::size_t> budget, std::size_t max_entries, const std::string& out) {
    const Tas sys = tas_from_json(s.read(system));
    const CharacteristicPrimeSpec spec = prime_spec_from_json(s.read(spec_file));
    if (c < 1) throw InputError("--scale-c must be positive");
    GstOptions opts;
    opts.max_placements = budget.value_or(default_budget());
    opts.max_entries = max_entries;
    s.manifest()["budgets"]["max_placements"] = opts.max_placements;
    s.manifest()["budgets"]["max_entries"] = opts.max_entries;

    const RPrimeReport r = characteristic_r_prime(sys, spec, c, opts);
    json observed = json::array();
    for (const auto& [p, name] : r.observed) observed.push_back({{"dx", p.x}, {"dy", p.y}, {"tile", name}});
    json report{{"bit", r.bit},
                {"observed", observed},
                {"k", r.k},
                {"f_prime", r.f_prime},
                {"peak_cells", r.peak_cells},
                {"strips", r.strips},
                {"max_gst_entries", r.max_gst_entries},
                {"lookups", r.lookups}};
    if (!out.empty()) s.write(out, report.dump(2) + "\n");
    s.emit(report);
    return kPass;
}

int scale(Session& s, const std::string& system, int m, const std::string& out, const std::string& repr) {
    const Tas t = tas_from_json(s.read(system));
    if (m < 1) throw InputError("--m must be positive");
    const Scaled sc = scale_system(t, m);
    const json sys = tas_to_json(sc.sys), rj = repr_to_json(sc.repr);
    json summary{{"tiles", sc.sys.tiles.size()}, {"seed_tiles", sc.sys.seed.size()}, {"m", m}};
    if (!out.empty())
        s.write(out, sys.dump(2) + "\n");
    else
        summary["system"] = sys;
    if (!repr.empty())
        s.write(repr, rj.dump(2) + "\n");
    else
        summary["repr"] = rj;
    s.emit(summary);
    return kPass;
}

int render(Session& s, const std::string& system, const std::string& assembly, const std::string& svg,
           const std::string& text, const std::optional<std::string>& crop) {
    const Tas sys = tas_from_json(s.read(system));
    const Assembly a = assembly_from_json(sys.tiles, s.read(assembly));
    const std::optional<Box> cb = crop ? std::optional<Box>(parse_box(*crop)) : std::nullopt;
    if (!svg.empty()) s.write(svg, render_svg(sys.tiles, a, cb));
    const std::string grid = render_text(sys.tiles, a, cb);
    if (!text.empty()) s.write(text, grid);
    s.emit({{"placements", a.size()}, {"text", grid}});
    return kPass;
}

std::vector<std::string> strip_manifest_flag(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--manifest") {
            ++k;
            continue;
        }
        if (args[k].rfind("--manifest=", 0) == 0) continue;
        out.push_back(args[k]);
    }
    return out;
}

int replay(const std::string& path, std::ostream& out, std::ostream& err) {
    const json m = read_json_file(path);
    std::vector<std::string> args;
    try {
        args = m.at("argv").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!args.empty() && args[0] == "replay") throw InputError("a manifest cannot replay a replay");
    json mismatches = json::array();
    for (const auto& [name, d] : m.at("inputs").items())
        if (file_digest(name) != d.get<std::string>()) mismatches.push_back(name);
    if (!mismatches.empty()) {
        out << json{{"replayed", m.value("command", "")}, {"identical", false}, {"changed_inputs", mismatches}}
                       .dump(2)
            << "\n";
        return kVerdictFail;
    }
    std::ostringstream sub;
    const int code = run(args, sub, err);
    const json& recorded = m.at("outputs");
    for (const auto& [name, d] : recorded.items()) {
        const std::string now = name == "<stdout>" ? digest(sub.str()) : file_digest(name);
        if (now != d.get<std::string>()) mismatches.push_back(name);
    }
    const bool same_code = m.value("exit", -1) == code;
    if (!same_code) mismatches.push_back("<exit>");
    out << json{{"replayed", m.value("command", "")}, {"identical", mismatches.empty()}, {"mismatches", mismatches}}
                   .dump(2)
        << "\n";
    return mismatches.empty() ? kPass : kVerdictFail;
}

void report_error(std::ostream& err, int code, const std::string& kind, const std::string& msg) {
    err << json{{"error", kind}, {"message", msg}, {"exit", code}}.dump() << "\n";
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "missing";
    std::ostringstream ss;
    ss << f.rdbuf();
    return digest(ss.str());
}

Box parse_box(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoi(part, &used));
            if (used != part.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("bad box \"" + s + "\": expected x0,y0,x1,y1");
        }
    }
    if (v.size() != 4) throw InputError("bad box \"" + s + "\": expected x0,y0,x1,y1");
    Box b{v[0], v[1], v[2], v[3]};
    if (b.empty()) throw InputError("box \"" + s + "\" is empty");
    return b;
}

std::size_t default_budget() {
    const char* env = std::getenv("ATAM_FORGE_BUDGET");
    if (!env) return kDefaultBudget;
    try {
        std::size_t used = 0;
        const std::string v = env;
        const unsigned long long b = std::stoull(v, &used);
        if (used != v.size() || v.find('-') != std::string::npos) throw InputError("");
        return static_cast<std::size_t>(b);
    } catch (const std::exception&) {
        throw InputError(std::string("ATAM_FORGE_BUDGET is not a non-negative integer: ") + env);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate, simulate, verify and analyse aTAM systems", "atam-forge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "Write a run manifest here");
    app.fallthrough();

    // simulate
    std::string sim_sys, sim_out, sim_svg, sim_text, sim_policy;
    std::optional<std::size_t> sim_steps;
    std::optional<std::string> sim_window, sim_crop;
    std::optional<std::uint64_t> sim_seed;
    auto* sim = app.add_subcommand("simulate", "Grow a system under one attachment policy");
    sim->add_option("system", sim_sys, "System JSON")->required();
    sim->add_option("--steps", sim_steps, "Attachment budget");
    sim->add_option("--window", sim_window, "x0,y0,x1,y1 (default: seed bounds plus 64)");
    sim->add_option("--policy", sim_policy, "lexmin, lexmax, fifo or random")
        ->check(CLI::IsMember({"lexmin", "lexmax", "fifo", "random"}));
    sim->add_option("--policy-seed", sim_seed, "Seed of the random policy");
    sim->add_option("--out", sim_out, "Assembly JSON");
    sim->add_option("--svg", sim_svg, "SVG render");
    sim->add_option("--text", sim_text, "Text grid render");
    sim->add_option("--crop", sim_crop, "Render only x0,y0,x1,y1");

    // generate
    std::string gen_params, gen_out, gen_report;
    auto* gen = app.add_subcommand("generate", "Build the construction from parameters");
    gen->add_option("params", gen_params, "Parameter JSON (default: toy parameters)");
    gen->add_option("--out", gen_out, "System JSON");
    gen->add_option("--report", gen_report, "Subiteration report JSON");

    // verify
    std::string ver_s, ver_t, ver_r, ver_window, ver_out;
    std::optional<std::size_t> ver_budget;
    bool ver_parallel = false;
    auto* ver = app.add_subcommand("verify", "Check that S simulates T inside a window");
    ver->add_option("S", ver_s, "Simulating system")->required();
    ver->add_option("T", ver_t, "Simulated system")->required();
    ver->add_option("repr", ver_r, "Representation function JSON")->required();
    ver->add_option("--window", ver_window, "T-window x0,y0,x1,y1")->required();
    ver->add_option("--budget", ver_budget, "States per explored system");
    ver->add_flag("--parallel", ver_parallel, "Parallel exploration");
    ver->add_option("--out", ver_out, "Verdict JSON");

    // gst
    std::string gst_sys, gst_spec, gst_out;
    int gst_c = 1;
    std::optional<std::size_t> gst_budget;
    std::size_t gst_entries = GstOptions{}.max_entries;
    auto* gs = app.add_subcommand("gst", "Characteristic bit of a scaled zig-zag in bounded space");
    gs->add_option("system", gst_sys, "System JSON")->required();
    gs->add_option("spec", gst_spec, "Characteristic spec JSON")->required();
    gs->add_option("--scale-c", gst_c, "Scale constant c")->required();
    gs->add_option("--budget", gst_budget, "Placements per procedure");
    gs->add_option("--max-entries", gst_entries, "Table entries per backfill");
    gs->add_option("--out", gst_out, "Report JSON");

    // scale
    std::string sc_sys, sc_out, sc_repr;
    int sc_m = 2;
    auto* sc = app.add_subcommand("scale", "Replace each tile by an m x m macrotile");
    sc->add_option("system", sc_sys, "System JSON")->required();
    sc->add_option("--m", sc_m, "Block size");
    sc->add_option("--out", sc_out, "Scaled system JSON");
    sc->add_option("--repr", sc_repr, "Representation function JSON");

    // render
    std::string rd_sys, rd_asm, rd_svg, rd_text;
    std::optional<std::string> rd_crop;
    auto* rd = app.add_subcommand("render", "Render an assembly");
    rd->add_option("system", rd_sys, "System JSON")->required();
    rd->add_option("assembly", rd_asm, "Assembly JSON")->required();
    rd->add_option("--svg", rd_svg, "SVG render");
    rd->add_option("--text", rd_text, "Text grid render");
    rd->add_option("--crop", rd_crop, "Render only x0,y0,x1,y1");

    // replay
    std::string rp_manifest;
    auto* rp = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
    rp->add_option("manifest", rp_manifest, "Manifest JSON")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kPass;
    } catch (const CLI::ParseError& e) {
        report_error(err, kInputError, "usage", e.what());
        return kInputError;
    }

    Session s(out);
    const auto t0 = std::chrono::steady_clock::now();
    int code = kPass;
    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (*sim)
            code = simulate(s, sim_sys, sim_steps, sim_window, sim_policy, sim_seed, sim_out, sim_svg, sim_text,
                            sim_crop);
        else if (*gen)
            code = generate(s, gen_params, gen_out, gen_report);
        else if (*ver)
            code = verify(s, ver_s, ver_t, ver_r, ver_window, ver_budget, ver_parallel, ver_out);
        else if (*gs)
            code = gst(s, gst_sys, gst_spec, gst_c, gst_budget, gst_entries, gst_out);
        else if (*sc)
            code = scale(s, sc_sys, sc_m, sc_out, sc_repr);
        else if (*rd)
            code = render(s, rd_sys, rd_asm, rd_svg, rd_text, rd_crop);
        else if (*rp)
            return replay(rp_manifest, out, err);
    } catch (const BudgetExhausted& e) {
        code = kBudget;
        report_error(err, code, "BudgetExhausted", e.what());
    } catch (const WidthLimitExceeded& e) {
        code = kGenerationLimit;
        report_error(err, code, "WidthLimitExceeded", e.what());
    } catch (const SizeLimitExceeded& e) {
        code = kGenerationLimit;
        report_error(err, code, "SizeLimitExceeded", e.what());
    } catch (const ClaimViolation& e) {
        code = kVerdictFail;
        report_error(err, code, "ClaimViolation", e.what());
    } catch (const InputError& e) {
        code = kInputError;
        report_error(err, code, "InputError", e.what());
    } catch (const InvalidRepr& e) {
        code = kInputError;
        report_error(err, code, "InvalidRepr", e.what());
    } catch (const NotDirected& e) {
        code = kInputError;
        report_error(err, code, "NotDirected", e.what());
    } catch (const NoConnectingPath& e) {
        code = kInputError;
        report_error(err, code, "NoConnectingPath", e.what());
    } catch (const json::exception& e) {
        code = kInputError;
        report_error(err, code, "InputError", e.what());
    } catch (const std::exception& e) {
        code = kInputError;
        report_error(err, code, "Error", e.what());
    }

    if (!manifest_path.empty()) {
        json& m = s.manifest();
        m["command"] = command;
        m["argv"] = strip_manifest_flag(args);
        m["exit"] = code;
        m["wall_clock_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (!m.contains("verdicts")) m["verdicts"] = nullptr;
        try {
            write_json_file(manifest_path, m);
        } catch (const InputError& e) {
            report_error(err, kInputError, "InputError", e.what());
            if (code == kPass) code = kInputError;
        }
    }
    return code;
}

}  // namespace atam::cli
