#pragma once

#include <random>

#include "atam/zigzag.hpp"

namespace fixture {

inline atam::Transition tr(std::string next, std::string write, char move) {
    return atam::Transition{std::move(next), std::move(write), move};
}

// 1^n -> 1^(n+1), one-way-right tape.
inline atam::TuringMachine unary_successor() {
    atam::TuringMachine tm;
    tm.states = {"scan", "acc", "rej"};
    tm.blank = "_";
    tm.tape = atam::Tape::OneWayRight;
    tm.start = "scan";
    tm.accept = "acc";
    tm.reject = "rej";
    tm.delta[{"scan", "1"}] = tr("scan", "1", 'R');
    tm.delta[{"scan", "_"}] = tr("acc", "1", 'R');
    tm.delta[{"scan", "0"}] = tr("rej", "0", 'R');
    return tm;
}

// Binary increment, most significant bit at the fixed (west) end.
inline atam::TuringMachine binary_incrementer() {
    atam::TuringMachine tm;
    tm.states = {"right", "carry", "acc", "rej"};
    tm.blank = "_";
    tm.tape = atam::Tape::OneWayRight;
    tm.start = "right";
    tm.accept = "acc";
    tm.reject = "rej";
    tm.delta[{"right", "0"}] = tr("right", "0", 'R');
    tm.delta[{"right", "1"}] = tr("right", "1", 'R');
    tm.delta[{"right", "_"}] = tr("carry", "_", 'L');
    tm.delta[{"carry", "1"}] = tr("carry", "0", 'L');
    tm.delta[{"carry", "0"}] = tr("acc", "1", 'L');
    tm.delta[{"carry", "_"}] = tr("rej", "_", 'L');
    return tm;
}

inline atam::TuringMachine halts_at_once() {
    atam::TuringMachine tm;
    tm.states = {"acc", "rej"};
    tm.start = "acc";
    tm.accept = "acc";
    tm.reject = "rej";
    return tm;
}

// Walks outward forever.
inline atam::TuringMachine runaway() {
    atam::TuringMachine tm;
    tm.states = {"go", "acc", "rej"};
    tm.start = "go";
    tm.accept = "acc";
    tm.reject = "rej";
    for (const char* s : {"0", "1", "_"}) tm.delta[{"go", s}] = tr("go", s, 'R');
    return tm;
}

inline atam::TuringMachine random_tm(std::mt19937_64& rng, int states, atam::Tape tape) {
    atam::TuringMachine tm;
    for (int i = 0; i < states; ++i) tm.states.push_back("q" + std::to_string(i));
    tm.states.push_back("acc");
    tm.states.push_back("rej");
    tm.start = "q0";
    tm.accept = "acc";
    tm.reject = "rej";
    tm.tape = tape;
    const std::vector<std::string> alpha{"0", "1", "_"};
    std::uniform_int_distribution<int> pick(0, states + 1);
    std::uniform_int_distribution<int> sym(0, 2);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution hole(0.08);
    for (int i = 0; i < states; ++i)
        for (const auto& a : alpha) {
            if (hole(rng)) continue;
            tm.delta[{tm.states[i], a}] =
                tr(tm.states[pick(rng)], alpha[sym(rng)], coin(rng) ? 'L' : 'R');
        }
    return tm;
}

inline std::vector<std::string> random_input(std::mt19937_64& rng, int maxlen) {
    std::uniform_int_distribution<int> len(0, maxlen);
    std::bernoulli_distribution coin(0.5);
    std::vector<std::string> in(len(rng));
    for (auto& s : in) s = coin(rng) ? "1" : "0";
    return in;
}

// Growth window comfortably around a compiled machine.
inline atam::Box window_of(const atam::CompiledTm& c) {
    atam::Box b = c.footprint;
    return {b.x0 - 2, b.y0 - 2, b.x1 + 2, b.y1 + 2};
}

}  // namespace fixture
