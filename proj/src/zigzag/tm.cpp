#include "atam/zigzag.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "atam/io.hpp"

namespace atam {

namespace {

bool bad_name(const std::string& s) {
    return s.empty() || s.find_first_of("@#|~:,^") != std::string::npos;
}

}  // namespace

const Transition* TuringMachine::step(const std::string& q, const std::string& sym) const {
    auto it = delta.find({q, sym});
    return it == delta.end() ? nullptr : &it->second;
}

void TuringMachine::validate() const {
    std::set<std::string> st(states.begin(), states.end());
    if (st.size() != states.size()) throw std::invalid_argument("duplicate state name");
    for (const auto& q : states)
        if (bad_name(q)) throw std::invalid_argument("state name '" + q + "' is empty or reserved");
    if (bad_name(blank)) throw std::invalid_argument("blank symbol is empty or reserved");
    for (const auto* q : {&start, &accept, &reject})
        if (!st.count(*q)) throw std::invalid_argument("unknown state '" + *q + "'");
    if (accept == reject) throw std::invalid_argument("accept and reject coincide");
    for (const auto& [key, tr] : delta) {
        if (!st.count(key.first) || !st.count(tr.next))
            throw std::invalid_argument("transition uses an unknown state");
        if (halting(key.first)) throw std::invalid_argument("transition out of a halting state");
        if (bad_name(key.second) || bad_name(tr.write))
            throw std::invalid_argument("tape symbol is empty or reserved");
        if (tr.move != 'L' && tr.move != 'R') throw std::invalid_argument("move must be L or R");
    }
}

TuringMachine tm_from_json(const nlohmann::json& j) {
    try {
        TuringMachine tm;
        tm.states = j.at("states").get<std::vector<std::string>>();
        tm.blank = j.at("blank").get<std::string>();
        const std::string tape = j.at("tape").get<std::string>();
        if (tape == "one-way-left")
            tm.tape = Tape::OneWayLeft;
        else if (tape == "one-way-right")
            tm.tape = Tape::OneWayRight;
        else
            throw std::invalid_argument("tape must be one-way-left or one-way-right");
        tm.start = j.at("start").get<std::string>();
        tm.accept = j.at("accept").get<std::string>();
        tm.reject = j.at("reject").get<std::string>();
        for (const auto& d : j.at("delta")) {
            Transition tr;
            tr.next = d.at("next").get<std::string>();
            tr.write = d.at("write").get<std::string>();
            const std::string mv = d.at("move").get<std::string>();
            if (mv.size() != 1) throw std::invalid_argument("move must be L or R");
            tr.move = mv[0];
            auto key = std::make_pair(d.at("state").get<std::string>(), d.at("read").get<std::string>());
            if (!tm.delta.emplace(key, tr).second)
                throw std::invalid_argument("two transitions for (" + key.first + ", " + key.second + ")");
        }
        tm.validate();
        return tm;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad Turing machine: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("bad Turing machine: ") + e.what());
    }
}

nlohmann::json tm_to_json(const TuringMachine& tm) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [key, tr] : tm.delta)
        d.push_back({{"state", key.first},
                     {"read", key.second},
                     {"next", tr.next},
                     {"write", tr.write},
                     {"move", std::string(1, tr.move)}});
    return {{"states", tm.states},
            {"blank", tm.blank},
            {"tape", tm.tape == Tape::OneWayLeft ? "one-way-left" : "one-way-right"},
            {"start", tm.start},
            {"accept", tm.accept},
            {"reject", tm.reject},
            {"delta", d}};
}

TuringMachine mirror_tm(const TuringMachine& tm) {
    TuringMachine m = tm;
    m.tape = tm.tape == Tape::OneWayLeft ? Tape::OneWayRight : Tape::OneWayLeft;
    for (auto& [key, tr] : m.delta) tr.move = tr.move == 'L' ? 'R' : 'L';
    return m;
}

std::vector<std::string> symbols(const std::string& s) {
    std::vector<std::string> out;
    for (char c : s) out.emplace_back(1, c);
    return out;
}

bool same_config(const TmConfig& a, const TmConfig& b, const std::string& blank) {
    if (a.head != b.head || a.state != b.state) return false;
    const std::size_t n = std::max(a.tape.size(), b.tape.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& x = i < a.tape.size() ? a.tape[i] : blank;
        const std::string& y = i < b.tape.size() ? b.tape[i] : blank;
        if (x != y) return false;
    }
    return true;
}

std::string render_config(const TmConfig& c, Tape tape) {
    std::ostringstream os;
    const long w = static_cast<long>(c.tape.size());
    for (long i = 0; i < w; ++i) {
        long p = tape == Tape::OneWayRight ? i : w - 1 - i;
        if (p == c.head) os << '[' << c.state << ']';
        os << c.tape[p];
    }
    return os.str();
}

const char* outcome_name(TmOutcome o) {
    switch (o) {
        case TmOutcome::Accept: return "accept";
        case TmOutcome::Reject: return "reject";
        case TmOutcome::AbortTime: return "abort-time";
        case TmOutcome::AbortSpace: return "abort-space";
    }
    return "?";
}

long TmRun::max_width() const {
    long w = 0;
    for (const auto& c : trace) w = std::max(w, static_cast<long>(c.tape.size()));
    return w;
}

TmRun run_tm(const TuringMachine& tm, const std::vector<std::string>& input,
             std::uint64_t space_cap, std::uint64_t time_cap, std::size_t step_limit) {
    TmConfig c;
    c.tape = input;
    if (tm.tape == Tape::OneWayLeft) std::reverse(c.tape.begin(), c.tape.end());
    while (c.tape.size() < 2) c.tape.push_back(tm.blank);
    c.state = tm.start;
    TmRun run;
    run.trace.push_back(c);
    const int outward = tm.tape == Tape::OneWayRight ? 'R' : 'L';
    for (std::uint64_t k = 0;; ++k) {
        if (c.state == tm.accept) {
            run.outcome = TmOutcome::Accept;
            return run;
        }
        if (c.state == tm.reject) {
            run.outcome = TmOutcome::Reject;
            return run;
        }
        if (k == time_cap || k >= step_limit) {
            run.outcome = TmOutcome::AbortTime;
            return run;
        }
        const Transition* tr = tm.step(c.state, c.tape[c.head]);
        if (!tr) {
            run.outcome = TmOutcome::Reject;
            return run;
        }
        long np = c.head + (tr->move == outward ? 1 : -1);
        if (np < 0) np = 0;
        if (static_cast<std::uint64_t>(np) >= space_cap) {
            run.outcome = TmOutcome::AbortSpace;
            return run;
        }
        c.tape[c.head] = tr->write;
        c.head = np;
        c.state = tr->next;
        if (np == static_cast<long>(c.tape.size())) c.tape.push_back(tm.blank);
        run.trace.push_back(c);
    }
}

}  // namespace atam
