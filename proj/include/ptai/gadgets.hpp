// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptai/classify.hpp"
#include "ptai/semantics.hpp"

namespace ptai {

// Minsky machine over counters c1, c2.
struct Instruction {
    enum class Kind { Inc, DecOrZero };

    Kind kind = Kind::Inc;
    int counter = 1;               // 1 or 2
    std::size_t next = 0;          // after increment / decrement
    std::size_t next_if_zero = 0;  // DecOrZero only

    bool operator==(const Instruction&) const = default;
};

struct TwoCounterMachine {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::size_t halt = 0;
    std::vector<std::optional<Instruction>> program; // per state; empty exactly for halt

    bool operator==(const TwoCounterMachine&) const = default;
};

inline void validate_machine(const TwoCounterMachine& m) {
    const std::size_t n = m.states.size();
    if (n == 0 || m.program.size() != n) throw ModelError("machine has no states or a mismatched program");
    if (m.initial >= n || m.halt >= n) throw ModelError("machine initial or halt state does not exist");
    for (std::size_t q = 0; q < n; ++q) {
        const auto& ins = m.program[q];
        if (q == m.halt) {
            if (ins) throw ModelError("halt state " + m.states[q] + " has an instruction");
            continue;
        }
        if (!ins) throw ModelError("state " + m.states[q] + " has no instruction");
        if (ins->counter != 1 && ins->counter != 2) throw ModelError("state " + m.states[q] + ": counter must be 1 or 2");
        if (ins->next >= n || (ins->kind == Instruction::Kind::DecOrZero && ins->next_if_zero >= n))
            throw ModelError("state " + m.states[q] + " jumps to a missing state");
    }
}

struct MachineConfig {
    std::size_t state = 0;
    std::uint64_t c1 = 0;
    std::uint64_t c2 = 0;

    bool operator==(const MachineConfig&) const = default;
};

// Trace from (q0, 0, 0); at most max_steps instructions, stops at halt.
inline std::vector<MachineConfig> simulate_2cm(const TwoCounterMachine& m, std::size_t max_steps) {
    validate_machine(m);
    std::vector<MachineConfig> trace{{m.initial, 0, 0}};
    while (trace.size() <= max_steps && trace.back().state != m.halt) {
        MachineConfig c = trace.back();
        const Instruction& ins = *m.program[c.state];
        std::uint64_t& counter = ins.counter == 1 ? c.c1 : c.c2;
        if (ins.kind == Instruction::Kind::Inc) {
            ++counter;
            c.state = ins.next;
        } else if (counter == 0) {
            c.state = ins.next_if_zero;
        } else {
            --counter;
            c.state = ins.next;
        }
        trace.push_back(c);
    }
    return trace;
}

struct GadgetPaths {
    std::vector<EdgeId> upper;
    std::vector<EdgeId> lower;
    std::vector<EdgeId> zero; // DecOrZero only
};

// Encoding of a machine as a bounded PTA with only upper-bound invariants
// over clocks x1, x2, z and one parameter a in [0, 1]. In an anchor location
// with z = 0, x1 = 1 - a*c1 and x2 = 1 - a*c2.
struct GadgetModel {
    PtaModel model;
    ClockId x1 = 0, x2 = 0, z = 0;
    ParamId a = 0;
    LabelId circle = 0, white = 0;
    LocationId init = 0, error = 0, halt = 0;
    std::vector<LocationId> anchor;     // per machine state
    std::vector<EdgeId> init_path;
    std::vector<GadgetPaths> gadgets;   // per machine state
    std::vector<bool> waits;            // locations where the faithful run lets time elapse
};

namespace detail {

class GadgetBuilder {
  public:
    explicit GadgetBuilder(GadgetModel& g) : g_(g) {
        g_.x1 = b_.clock("x1");
        g_.x2 = b_.clock("x2");
        g_.z = b_.clock("z");
        g_.a = b_.param("a");
        b_.bound(g_.a, 0, 1);
        g_.circle = b_.label("circle");
        g_.white = b_.label("white");
    }

    // Upper-bound location `clock <= [a +] d` plus its strict twin leading to the error location.
    LocationId bounded(const std::string& name, ClockId clock, bool with_a, int d) {
        Constraint inv{{make_inequality(clock, Relation::Le, with_a ? std::vector<ParamId>{g_.a} : std::vector<ParamId>{}, d)}};
        LocationId loc = add(name, inv, g_.circle, false);
        inv.inequalities[0].rel = Relation::Lt;
        LocationId lure = add(name + "_lure", inv, g_.white, false);
        b_.edge(loc, lure);
        b_.edge(lure, g_.error);
        return loc;
    }

    // Unconstrained location where time elapses; may give up to the error location.
    LocationId wait(const std::string& name) {
        LocationId loc = add(name, {}, g_.circle, true);
        b_.edge(loc, g_.error);
        return loc;
    }

    LocationId add(const std::string& name, Constraint inv, LabelId label, bool waits) {
        LocationId loc = b_.location(name, std::move(inv), {b_.peek().labels[label]});
        g_.waits.resize(loc + 1, false);
        g_.waits[loc] = waits;
        return loc;
    }

    struct Stage {
        ClockId clock;
        bool with_a;
        int d;
    };

    // anchor -> [z <= 0] -> wait -> [first] -(reset)-> wait -> [second] -(reset)-> wait -> [z <= ...] -(reset z)-> target
    std::vector<EdgeId> branch(const std::string& prefix, LocationId from, LocationId to, Stage first, Stage second,
                               bool z_with_a) {
        LocationId g0 = bounded(prefix + "0", g_.z, false, 0);
        LocationId g1 = wait(prefix + "1");
        LocationId g2 = bounded(prefix + "2", first.clock, first.with_a, first.d);
        LocationId g3 = wait(prefix + "3");
        LocationId g4 = bounded(prefix + "4", second.clock, second.with_a, second.d);
        LocationId g5 = wait(prefix + "5");
        LocationId g6 = bounded(prefix + "6", g_.z, z_with_a, 1);
        return {b_.edge(from, g0),
                b_.edge(g0, g1),
                b_.edge(g1, g2),
                b_.edge(g2, g3, {}, std::nullopt, {first.clock}),
                b_.edge(g3, g4),
                b_.edge(g4, g5, {}, std::nullopt, {second.clock}),
                b_.edge(g5, g6),
                b_.edge(g6, to, {}, std::nullopt, {g_.z})};
    }

    ModelBuilder& builder() { return b_; }

  private:
    GadgetModel& g_;
    ModelBuilder b_;
};

} // namespace detail

inline GadgetModel encode(const TwoCounterMachine& m) {
    validate_machine(m);
    GadgetModel g;
    detail::GadgetBuilder gb(g);
    auto& b = gb.builder();

    g.error = gb.add("l_error", {}, g.white, false);
    g.init = gb.wait("init");
    b.initial(g.init);
    LocationId init_x1 = gb.bounded("init_x1", g.x1, false, 1);
    LocationId init_x2 = gb.bounded("init_x2", g.x2, false, 1);

    g.anchor.resize(m.states.size());
    for (std::size_t q = 0; q < m.states.size(); ++q) {
        if (q == m.halt) g.anchor[q] = g.halt = gb.add("l_halt", {}, g.circle, false);
        else g.anchor[q] = gb.bounded("at_" + m.states[q], g.z, false, 0);
    }
    g.init_path = {b.edge(g.init, init_x1), b.edge(init_x1, init_x2),
                   b.edge(init_x2, g.anchor[m.initial], {}, std::nullopt, {g.z})};

    g.gadgets.resize(m.states.size());
    for (std::size_t q = 0; q < m.states.size(); ++q) {
        if (!m.program[q]) continue;
        const Instruction& ins = *m.program[q];
        const ClockId own = ins.counter == 1 ? g.x1 : g.x2;
        const ClockId other = ins.counter == 1 ? g.x2 : g.x1;
        const std::string& name = m.states[q];
        auto& paths = g.gadgets[q];
        LocationId from = g.anchor[q], to = g.anchor[ins.next];
        if (ins.kind == Instruction::Kind::Inc) {
            paths.upper = gb.branch(name + "_inc_up", from, to, {other, false, 1}, {own, true, 1}, false);
            paths.lower = gb.branch(name + "_inc_lo", from, to, {own, true, 1}, {other, false, 1}, false);
        } else {
            paths.upper = gb.branch(name + "_dec_up", from, to, {own, false, 1}, {other, true, 1}, true);
            paths.lower = gb.branch(name + "_dec_lo", from, to, {other, true, 1}, {own, false, 1}, true);
            LocationId zero = gb.bounded(name + "_zero", own, false, 1);
            paths.zero = {b.edge(from, zero), b.edge(zero, g.anchor[ins.next_if_zero])};
        }
    }
    g.model = std::move(b).build();
    return g;
}

class GadgetRunError : public Error {
  public:
    GadgetRunError(std::size_t machine_step, const std::string& what)
        : Error("machine step " + std::to_string(machine_step) + ": " + what), machine_step_(machine_step) {}

    // 1-based index of the instruction whose gadget failed; 0 is the init gadget.
    [[nodiscard]] std::size_t machine_step() const { return machine_step_; }

  private:
    std::size_t machine_step_;
};

struct AnchorVisit {
    std::size_t run_index = 0; // index into Run::state_at
    MachineConfig config;
};

struct FaithfulRun {
    Run run;
    std::vector<AnchorVisit> anchors;
};

// The last-moment run simulating `steps` machine instructions under a = v_a:
// every edge leaving a waiting location is taken exactly when the bounded
// clock of the target location reaches its bound.
inline FaithfulRun faithful_run(const GadgetModel& g, const TwoCounterMachine& m, const Rational& v_a,
                                std::size_t steps) {
    if (v_a <= 0 || v_a >= 1) throw ValuationError("a must lie in (0, 1)");
    const auto trace = simulate_2cm(m, steps);
    const ParamValuation v({v_a});
    const PtaModel& model = g.model;
    FaithfulRun out{Run{initial_state(model), {}}, {}};
    ConcreteState s = out.run.initial;

    auto walk = [&](const std::vector<EdgeId>& path, std::size_t machine_step) {
        for (EdgeId e : path) {
            Rational delay = 0;
            const auto& target_inv = model.locations[model.edges[e].target].invariant;
            if (g.waits[s.location] && target_inv.inequalities.size() == 1) {
                const auto& ineq = target_inv.inequalities[0];
                delay = evaluate(ineq.bound, v) - s.clocks[ineq.clock];
                if (delay < 0)
                    throw GadgetRunError(machine_step, "clock " + model.clocks[ineq.clock] + " = " +
                                                           to_string(s.clocks[ineq.clock]) + " already exceeds " +
                                                           format_inequality(model, ineq) + " in " +
                                                           model.locations[s.location].name);
            }
            try {
                ConcreteState next = step(model, v, s, delay, e);
                out.run.steps.push_back({delay, e, next});
                s = std::move(next);
            } catch (const StepError& err) {
                throw GadgetRunError(machine_step, err.what());
            }
        }
    };
    auto arrive = [&](const MachineConfig& c, std::size_t machine_step) {
        const Rational x1 = 1 - v_a * static_cast<std::int64_t>(c.c1);
        const Rational x2 = 1 - v_a * static_cast<std::int64_t>(c.c2);
        if (s.location != g.anchor[c.state] || s.clocks[g.x1] != x1 || s.clocks[g.x2] != x2 || s.clocks[g.z] != 0)
            throw GadgetRunError(machine_step, "anchor state does not encode the machine configuration");
        out.anchors.push_back({out.run.steps.size(), c});
    };

    walk(g.init_path, 0);
    arrive(trace[0], 0);
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        const MachineConfig& c = trace[i];
        const Instruction& ins = *m.program[c.state];
        const Rational& own = s.clocks[ins.counter == 1 ? g.x1 : g.x2];
        const Rational& other = s.clocks[ins.counter == 1 ? g.x2 : g.x1];
        const GadgetPaths& paths = g.gadgets[c.state];
        const std::uint64_t counter = ins.counter == 1 ? c.c1 : c.c2;
        if (ins.kind == Instruction::Kind::Inc) walk(own <= other ? paths.upper : paths.lower, i + 1);
        else if (counter == 0) walk(paths.zero, i + 1);
        else walk(own >= other ? paths.upper : paths.lower, i + 1);
        arrive(trace[i + 1], i + 1);
    }
    return out;
}

} // namespace ptai
