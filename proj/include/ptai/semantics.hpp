// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptai/model.hpp"

namespace ptai {

using ClockValuation = std::vector<Rational>;

struct ConcreteState {
    LocationId location = 0;
    ClockValuation clocks;

    bool operator==(const ConcreteState&) const = default;
};

struct RunStep {
    Rational delay{0};
    EdgeId edge = 0;
    ConcreteState state; // state reached after the delay and the edge

    bool operator==(const RunStep&) const = default;
};

// Alternating sequence of states and combined delay+edge transitions.
struct Run {
    ConcreteState initial;
    std::vector<RunStep> steps;

    [[nodiscard]] std::size_t length() const { return steps.size(); }
    // Index 0 is the initial state, index i the state after the i-th step.
    [[nodiscard]] const ConcreteState& state_at(std::size_t i) const {
        return i == 0 ? initial : steps.at(i - 1).state;
    }
    [[nodiscard]] const ConcreteState& final_state() const { return state_at(steps.size()); }

    bool operator==(const Run&) const = default;
};

enum class StepPhase { Delay, Guard, TargetInvariant, Shape };

inline std::string_view to_string(StepPhase phase) {
    switch (phase) {
    case StepPhase::Delay: return "delay";
    case StepPhase::Guard: return "guard";
    case StepPhase::TargetInvariant: return "target invariant";
    case StepPhase::Shape: return "shape";
    }
    return "?";
}

class StepError : public Error {
  public:
    StepError(StepPhase phase, const std::string& what) : Error(std::string(to_string(phase)) + ": " + what), phase_(phase) {}

    [[nodiscard]] StepPhase phase() const { return phase_; }

  private:
    StepPhase phase_;
};

inline ConcreteState initial_state(const PtaModel& model) {
    return {model.initial, ClockValuation(model.clocks.size(), Rational(0))};
}

// Index of the first inequality of c that w violates under v.
inline std::optional<std::size_t> first_violation(const ClockValuation& w, const Constraint& c, const ParamValuation& v) {
    for (std::size_t i = 0; i < c.inequalities.size(); ++i) {
        const auto& ineq = c.inequalities[i];
        if (ineq.clock >= w.size()) throw ModelError("unresolved clock #" + std::to_string(ineq.clock));
        if (!holds(w[ineq.clock], ineq.rel, evaluate(ineq.bound, v))) return i;
    }
    return std::nullopt;
}

inline bool satisfies(const ClockValuation& w, const Constraint& c, const ParamValuation& v) {
    return !first_violation(w, c, v).has_value();
}

namespace detail {

inline std::optional<StepError> check_delay(const PtaModel& model, const ParamValuation& v, const ConcreteState& s,
                                            const Rational& d, ConcreteState& out) {
    if (d < 0) return StepError(StepPhase::Delay, "negative delay " + to_string(d));
    const auto& inv = model.locations.at(s.location).invariant;
    // Each inequality holds on an interval of delays, so holding at both ends
    // means holding on all of [0, d].
    if (auto bad = first_violation(s.clocks, inv, v))
        return StepError(StepPhase::Delay, "invariant " + format_inequality(model, inv.inequalities[*bad]) +
                                               " violated before the delay in " + model.locations[s.location].name);
    out.location = s.location;
    out.clocks = s.clocks;
    for (auto& c : out.clocks) c += d;
    if (auto bad = first_violation(out.clocks, inv, v))
        return StepError(StepPhase::Delay, "invariant " + format_inequality(model, inv.inequalities[*bad]) +
                                               " violated after delay " + to_string(d) + " in " +
                                               model.locations[s.location].name);
    return std::nullopt;
}

inline std::optional<StepError> check_discrete(const PtaModel& model, const ParamValuation& v, const ConcreteState& s,
                                               EdgeId e, ConcreteState& out) {
    if (e >= model.edges.size()) return StepError(StepPhase::Shape, "no edge #" + std::to_string(e));
    const Edge& edge = model.edges[e];
    if (edge.source != s.location)
        return StepError(StepPhase::Shape, "edge " + edge_name(model, e) + " does not leave " +
                                               model.locations.at(s.location).name);
    if (auto bad = first_violation(s.clocks, edge.guard, v))
        return StepError(StepPhase::Guard, "guard " + format_inequality(model, edge.guard.inequalities[*bad]) +
                                               " of " + edge_name(model, e) + " unsatisfied");
    out.location = edge.target;
    out.clocks = s.clocks;
    for (ClockId c : edge.resets) out.clocks.at(c) = 0;
    const auto& inv = model.locations[edge.target].invariant;
    if (auto bad = first_violation(out.clocks, inv, v))
        return StepError(StepPhase::TargetInvariant, "invariant " + format_inequality(model, inv.inequalities[*bad]) +
                                                         " of " + model.locations[edge.target].name +
                                                         " unsatisfied after " + edge_name(model, e));
    return std::nullopt;
}

inline std::optional<StepError> check_step(const PtaModel& model, const ParamValuation& v, const ConcreteState& s,
                                           const Rational& d, EdgeId e, ConcreteState& out) {
    ConcreteState mid;
    if (auto err = check_delay(model, v, s, d, mid)) return err;
    return check_discrete(model, v, mid, e, out);
}

} // namespace detail

inline ConcreteState delay_successor(const PtaModel& model, const ParamValuation& v, const ConcreteState& s,
                                     const Rational& d) {
    ConcreteState out;
    if (auto err = detail::check_delay(model, v, s, d, out)) throw *err;
    return out;
}

inline ConcreteState discrete_successor(const PtaModel& model, const ParamValuation& v, const ConcreteState& s,
                                        EdgeId e) {
    ConcreteState out;
    if (auto err = detail::check_discrete(model, v, s, e, out)) throw *err;
    return out;
}

inline ConcreteState step(const PtaModel& model, const ParamValuation& v, const ConcreteState& s, const Rational& d,
                          EdgeId e) {
    ConcreteState out;
    if (auto err = detail::check_step(model, v, s, d, e, out)) throw *err;
    return out;
}

struct RunCheck {
    bool ok = true;
    std::size_t failed_step = 0; // 0-based step index; equals length() for a bad initial state
    std::string reason;

    explicit operator bool() const { return ok; }
};

inline RunCheck validate_run(const PtaModel& model, const ParamValuation& v, const Run& run) {
    auto fail = [](std::size_t i, std::string reason) { return RunCheck{false, i, std::move(reason)}; };
    if (run.initial != initial_state(model)) return fail(0, "run does not start in the initial state");
    if (auto bad = first_violation(run.initial.clocks, model.locations.at(model.initial).invariant, v))
        return fail(0, "initial state violates the invariant of " + model.locations[model.initial].name);
    ConcreteState current = run.initial;
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const auto& st = run.steps[i];
        ConcreteState next;
        if (auto err = detail::check_step(model, v, current, st.delay, st.edge, next)) return fail(i, err->what());
        if (next != st.state) return fail(i, "recorded state differs from the computed successor");
        current = std::move(next);
    }
    return {};
}

inline Rational total_time(const Run& run) {
    Rational sum{0};
    for (const auto& st : run.steps) sum += st.delay;
    return sum;
}

namespace detail {

inline std::vector<bool> graph_reachable(const PtaModel& model) {
    std::vector<std::vector<LocationId>> succ(model.locations.size());
    for (const auto& e : model.edges) succ[e.source].push_back(e.target);
    std::vector<bool> seen(model.locations.size(), false);
    std::vector<LocationId> stack{model.initial};
    seen[model.initial] = true;
    while (!stack.empty()) {
        LocationId l = stack.back();
        stack.pop_back();
        for (LocationId t : succ[l])
            if (!seen[t]) seen[t] = true, stack.push_back(t);
    }
    return seen;
}

inline void add_distance(std::vector<Rational>& out, const Rational& dist, bool strict) {
    if (dist < 0) return;
    out.push_back(dist);
    out.push_back(dist / 2);
    if (strict) out.push_back(dist + Rational(1, 2));
}

} // namespace detail

// Randomized incomplete search for a run reaching the goal. Candidate delays
// are 0 and the distances (and half-distances) of clocks to the bounds of the
// current invariant and of the outgoing guards; the frontier is a bounded
// pool of partial runs. A returned run always validates; nullopt proves nothing.
inline std::optional<Run> random_explore(const PtaModel& model, const ParamValuation& v, const Goal& goal,
                                         std::size_t budget, std::uint64_t seed) {
    constexpr std::size_t frontier_cap = 256;
    ConcreteState s0 = initial_state(model);
    if (!satisfies(s0.clocks, model.locations.at(model.initial).invariant, v)) return std::nullopt;
    if (goal.matches(model, s0.location)) return Run{s0, {}};
    auto graph = detail::graph_reachable(model);
    bool any_goal = false;
    for (LocationId l = 0; l < model.locations.size(); ++l) any_goal = any_goal || (graph[l] && goal.matches(model, l));
    if (!any_goal) return std::nullopt;

    std::vector<std::vector<EdgeId>> out(model.locations.size());
    for (EdgeId e = 0; e < model.edges.size(); ++e) out[model.edges[e].source].push_back(e);

    struct Node {
        std::size_t parent;
        Rational delay;
        EdgeId edge;
        ConcreteState state;
    };
    constexpr std::size_t root = SIZE_MAX;
    std::vector<Node> nodes{{root, 0, 0, s0}};
    std::vector<std::size_t> frontier{0};
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    std::vector<Rational> delays;
    std::vector<EdgeId> enabled;
    for (std::size_t iter = 0; iter < budget; ++iter) {
        std::size_t idx = frontier[pick(frontier.size())];
        const ConcreteState cur = nodes[idx].state;
        const auto& w = cur.clocks;

        delays.assign(1, Rational(0));
        for (const auto& ineq : model.locations[cur.location].invariant.inequalities)
            if (ineq.rel != Relation::Ge && ineq.rel != Relation::Gt)
                detail::add_distance(delays, evaluate(ineq.bound, v) - w[ineq.clock], false);
        for (EdgeId e : out[cur.location])
            for (const auto& ineq : model.edges[e].guard.inequalities)
                detail::add_distance(delays, evaluate(ineq.bound, v) - w[ineq.clock], is_strict(ineq.rel));
        Rational d = delays[pick(delays.size())];

        ConcreteState mid;
        if (detail::check_delay(model, v, cur, d, mid)) continue;
        enabled.clear();
        for (EdgeId e : out[cur.location]) {
            ConcreteState next;
            if (!detail::check_discrete(model, v, mid, e, next)) enabled.push_back(e);
        }
        if (enabled.empty()) continue;
        EdgeId e = enabled[pick(enabled.size())];
        ConcreteState next = discrete_successor(model, v, mid, e);
        bool reached = goal.matches(model, next.location);
        nodes.push_back({idx, d, e, std::move(next)});
        std::size_t fresh = nodes.size() - 1;
        if (reached) {
            Run run{s0, {}};
            for (std::size_t n = fresh; nodes[n].parent != root; n = nodes[n].parent)
                run.steps.push_back({nodes[n].delay, nodes[n].edge, nodes[n].state});
            std::reverse(run.steps.begin(), run.steps.end());
            return run;
        }
        if (frontier.size() < frontier_cap) frontier.push_back(fresh);
        else frontier[pick(frontier.size())] = fresh;
    }
    return std::nullopt;
}

} // namespace ptai
