// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Two-counter machine text format, one state per line:
//
//   q0 INC c1 q1
//   q1 DECZ c2 q1 q2     # decrement target, then zero target
//   HALT q2
//
// The first listed state is initial. Exactly one state must HALT; "q2 HALT"
// is accepted too. Counters are written c1/c2 or 1/2.

#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ptai/dsl.hpp"
#include "ptai/gadgets.hpp"

namespace ptai {

inline TwoCounterMachine parse_machine(std::string_view text) {
    using K = ParseError::Kind;
    struct Line {
        std::size_t number;
        std::vector<std::string> words;
    };
    std::vector<Line> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t n = 1; std::getline(in, raw); ++n) {
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ws(raw);
        Line line{n, {}};
        for (std::string w; ws >> w;) line.words.push_back(w);
        if (!line.words.empty()) lines.push_back(std::move(line));
    }
    if (lines.empty()) throw ParseError(K::Semantic, 1, 1, "machine has no states");

    TwoCounterMachine m;
    std::unordered_map<std::string, std::size_t> index;
    auto is_halt = [](const Line& line) { return line.words.size() == 2 && (line.words[0] == "HALT" || line.words[1] == "HALT"); };
    for (auto& line : lines) {
        if (is_halt(line) && line.words[0] == "HALT") std::swap(line.words[0], line.words[1]);
        if (!index.emplace(line.words[0], m.states.size()).second)
            throw ParseError(K::Semantic, line.number, 1, "duplicate state '" + line.words[0] + "'");
        m.states.push_back(line.words[0]);
    }
    m.program.resize(m.states.size());

    auto state = [&](const Line& line, const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw ParseError(K::Semantic, line.number, 1, "unknown state '" + name + "'");
        return it->second;
    };
    auto counter = [&](const Line& line, const std::string& w) {
        if (w == "1" || w == "c1") return 1;
        if (w == "2" || w == "c2") return 2;
        throw ParseError(K::Syntax, line.number, 1, "counter must be c1 or c2, found '" + w + "'");
    };

    bool halted = false;
    for (std::size_t q = 0; q < lines.size(); ++q) {
        const auto& line = lines[q];
        const auto& w = line.words;
        const std::string op = w.size() > 1 ? w[1] : "";
        if (op == "HALT" && w.size() == 2) {
            if (halted) throw ParseError(K::Semantic, line.number, 1, "more than one HALT state");
            halted = true;
            m.halt = q;
        } else if (op == "INC" && w.size() == 4) {
            m.program[q] = Instruction{Instruction::Kind::Inc, counter(line, w[2]), state(line, w[3]), 0};
        } else if (op == "DECZ" && w.size() == 5) {
            m.program[q] = Instruction{Instruction::Kind::DecOrZero, counter(line, w[2]), state(line, w[3]), state(line, w[4])};
        } else {
            throw ParseError(K::Syntax, line.number, 1, "expected '<state> INC c <next>', '<state> DECZ c <next> <zero>' or 'HALT <state>'");
        }
    }
    if (!halted) throw ParseError(K::Semantic, lines.back().number, 1, "no HALT state");
    m.initial = 0;
    validate_machine(m);
    return m;
}

inline std::string serialize_machine(const TwoCounterMachine& m) {
    std::string out;
    auto emit = [&](std::size_t q) {
        const auto& ins = m.program[q];
        if (!ins) {
            out += "HALT " + m.states[q] + "\n";
            return;
        }
        out += m.states[q];
        if (ins->kind == Instruction::Kind::Inc)
            out += " INC c" + std::to_string(ins->counter) + " " + m.states[ins->next];
        else
            out += " DECZ c" + std::to_string(ins->counter) + " " + m.states[ins->next] + " " + m.states[ins->next_if_zero];
        out += "\n";
    };
    emit(m.initial);
    for (std::size_t q = 0; q < m.states.size(); ++q)
        if (q != m.initial) emit(q);
    return out;
}

} // namespace ptai
