#include "atam/construction.hpp"

#include <algorithm>

#include "atam/io.hpp"
#include "machines.hpp"

namespace atam {

namespace {

Transition tr(std::string next, std::string write, char move) {
    return Transition{std::move(next), std::move(write), move};
}

TuringMachine skeleton(Tape tape, std::vector<std::string> states) {
    TuringMachine tm;
    tm.states = std::move(states);
    tm.tape = tape;
    tm.start = tm.states.front();
    tm.accept = "acc";
    tm.reject = "rej";
    return tm;
}

// Marks the least significant cell, walks to the far blank, walks back to
// the mark and accepts iff the marked digit was 0.
TuringMachine toy_even() {
    auto tm = skeleton(Tape::OneWayLeft, {"mark", "out", "back", "acc", "rej"});
    tm.delta[{"mark", "0"}] = tr("out", "z", 'L');
    tm.delta[{"mark", "1"}] = tr("out", "o", 'L');
    for (const char* d : {"0", "1"}) {
        tm.delta[{"out", d}] = tr("out", d, 'L');
        tm.delta[{"back", d}] = tr("back", d, 'R');
    }
    tm.delta[{"out", "_"}] = tr("back", "_", 'R');
    tm.delta[{"back", "z"}] = tr("acc", "0", 'R');
    tm.delta[{"back", "o"}] = tr("rej", "1", 'R');
    return tm;
}

TuringMachine toy_reject() {
    auto tm = skeleton(Tape::OneWayLeft, {"go", "acc", "rej"});
    for (const char* d : {"0", "1", "_"}) tm.delta[{"go", d}] = tr("rej", d, 'L');
    return tm;
}

// Parity of the one bits, scanning outward.
TuringMachine toy_odd_ones() {
    auto tm = skeleton(Tape::OneWayRight, {"even", "odd", "acc", "rej"});
    tm.delta[{"even", "0"}] = tr("even", "0", 'R');
    tm.delta[{"even", "1"}] = tr("odd", "1", 'R');
    tm.delta[{"odd", "0"}] = tr("odd", "0", 'R');
    tm.delta[{"odd", "1"}] = tr("even", "1", 'R');
    tm.delta[{"even", "_"}] = tr("rej", "_", 'L');
    tm.delta[{"odd", "_"}] = tr("acc", "_", 'L');
    return tm;
}

TuringMachine toy_accept() {
    auto tm = skeleton(Tape::OneWayRight, {"go", "acc", "rej"});
    for (const char* d : {"0", "1", "_"}) tm.delta[{"go", d}] = tr("acc", d, 'R');
    return tm;
}

}  // namespace

int ceil_log2(std::uint64_t x) {
    int r = 0;
    while (r < 64 && (std::uint64_t{1} << r) < x) ++r;
    return r;
}

std::uint64_t sat_pow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < e; ++k) {
        if (b != 0 && r > kNoCap / b) return kNoCap;
        r *= b;
    }
    return r;
}

void ConstructionParams::validate() const {
    if (a < 1) throw std::invalid_argument("a must be at least 1");
    if (a > 30) throw std::invalid_argument("a is limited to 30 bits");
    if (max_iteration < 1) throw std::invalid_argument("max_iteration must be at least 1");
    if (max_iteration > 16) throw std::invalid_argument("max_iteration is limited to 16");
    for (long c : {long(bit_gap), long(alley_mult), long(alley_add), long(gap_add), long(spacer),
                   long(bumper_offset), width_limit, long(step_limit)})
        if (c <= 0) throw std::invalid_argument("structural constants must be positive");
    if (left_base < 1 || top_base < 1) throw std::invalid_argument("spacing bases must be positive");
    if (bumper_offset < 2) throw std::invalid_argument("bumper_offset must be at least 2");
    for (const auto* m : {&A, &A_H, &B, &B_H}) m->validate();
}

ConstructionParams default_params() {
    ConstructionParams p;
    p.A = toy_even();
    p.A_H = toy_reject();
    p.B = toy_odd_ones();
    p.B_H = toy_accept();
    return p;
}

ConstructionParams params_from_json(const nlohmann::json& j) {
    ConstructionParams p = default_params();
    try {
        if (!j.is_object()) throw InputError("construction params must be a JSON object");
        if (j.contains("A")) p.A = tm_from_json(j.at("A"));
        if (j.contains("A_H")) p.A_H = tm_from_json(j.at("A_H"));
        if (j.contains("B")) p.B = tm_from_json(j.at("B"));
        if (j.contains("B_H")) p.B_H = tm_from_json(j.at("B_H"));
        p.a = j.value("a", p.a);
        p.max_iteration = j.value("max_iteration", p.max_iteration);
        if (j.contains("constants")) {
            const auto& c = j.at("constants");
            p.bit_gap = c.value("bit_gap", p.bit_gap);
            p.alley_mult = c.value("alley_mult", p.alley_mult);
            p.alley_add = c.value("alley_add", p.alley_add);
            p.gap_add = c.value("gap_add", p.gap_add);
            p.spacer = c.value("spacer", p.spacer);
            p.bumper_offset = c.value("bumper_offset", p.bumper_offset);
            p.left_base = c.value("left_base", p.left_base);
            p.top_base = c.value("top_base", p.top_base);
            p.width_limit = c.value("width_limit", p.width_limit);
            p.step_limit = c.value("step_limit", p.step_limit);
        }
        p.validate();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad construction params: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("bad construction params: ") + e.what());
    }
    return p;
}

nlohmann::json params_to_json(const ConstructionParams& p) {
    return {{"A", tm_to_json(p.A)},
            {"A_H", tm_to_json(p.A_H)},
            {"B", tm_to_json(p.B)},
            {"B_H", tm_to_json(p.B_H)},
            {"a", p.a},
            {"max_iteration", p.max_iteration},
            {"constants",
             {{"bit_gap", p.bit_gap},
              {"alley_mult", p.alley_mult},
              {"alley_add", p.alley_add},
              {"gap_add", p.gap_add},
              {"spacer", p.spacer},
              {"bumper_offset", p.bumper_offset},
              {"left_base", p.left_base},
              {"top_base", p.top_base},
              {"width_limit", p.width_limit},
              {"step_limit", p.step_limit}}}};
}

namespace detail {

TuringMachine oriented(const TuringMachine& tm, Tape tape) {
    return tm.tape == tape ? tm : mirror_tm(tm);
}

std::vector<std::string> binary_input(std::uint64_t v, Tape tape) {
    std::string s;
    do {
        s.insert(s.begin(), char('0' + (v & 1)));
        v >>= 1;
    } while (v);
    // Least significant digit sits at the fixed end.
    if (tape == Tape::OneWayRight) std::reverse(s.begin(), s.end());
    return symbols(s);
}

std::vector<RunPlan> a_plus_plan(int x, const ConstructionParams& p, Tape tape) {
    std::vector<RunPlan> out;
    const std::uint64_t lo = std::uint64_t{1} << x, hi = std::uint64_t{1} << (x + 1);
    auto add = [&](const TuringMachine& m, std::uint64_t y) {
        RunPlan r;
        r.tm = oriented(m, tape);
        r.value = y;
        r.input = binary_input(y, tape);
        r.space = sat_pow(2, 2 * y);
        if (r.space != kNoCap) ++r.space;
        r.time = y >= 64 ? kNoCap : sat_pow(2, std::uint64_t{1} << y);
        out.push_back(std::move(r));
    };
    for (std::uint64_t y = lo; y + 1 < hi; ++y) add(p.A, y);
    add(p.A_H, hi);
    return out;
}

std::vector<RunPlan> b_plan(int i, const ConstructionParams& p, Tape tape) {
    std::vector<RunPlan> out;
    for (int k = i; k < i + p.a; ++k) {
        RunPlan r;
        r.tm = oriented(k + 1 < i + p.a ? p.B : p.B_H, tape);
        r.value = static_cast<std::uint64_t>(k);
        r.input = binary_input(r.value, tape);
        r.space = sat_pow(3, std::uint64_t(k) * std::uint64_t(k));
        if (r.space != kNoCap) ++r.space;
        r.time = kNoCap;
        out.push_back(std::move(r));
    }
    return out;
}

TmRun execute(const RunPlan& r, const ConstructionParams& p) {
    return run_tm(r.tm, r.input, r.space, r.time, p.step_limit);
}

std::string record(const std::vector<RunPlan>& plan, const ConstructionParams& p) {
    std::string s;
    for (const auto& r : plan) s += execute(r, p).bit() ? '1' : '0';
    return s;
}

}  // namespace detail

std::string a_plus(int x, const ConstructionParams& p) {
    if (x < 0) throw std::invalid_argument("a_plus: x must be non-negative");
    if (x > 20) throw std::invalid_argument("a_plus: x too large");
    return detail::record(detail::a_plus_plan(x, p, Tape::OneWayLeft), p);
}

std::optional<std::string> machine_r(int i, std::uint64_t j, const ConstructionParams& p) {
    if (i < 1 || i > 62 || j >= (std::uint64_t{1} << i)) throw OutOfRange("machine_r: need 0 <= j < 2^i");
    const std::string bits = a_plus(ceil_log2(static_cast<std::uint64_t>(i)), p);
    for (int q = 0; q < i; ++q)
        if (bits[q] - '0' == static_cast<int>((j >> q) & 1)) return std::nullopt;
    return detail::record(detail::b_plan(i, p, Tape::OneWayRight), p);
}

}  // namespace atam
