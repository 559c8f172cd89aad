// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "ptai/classify.hpp"
#include "ptai/semantics.hpp"

namespace ptai {

struct EdgeSplit {
    EdgeId first = 0;              // source -> intermediate, original action, no reset
    LocationId intermediate = 0;   // invariant = original guard
    EdgeId second = 0;             // intermediate -> target, silent, original resets

    bool operator==(const EdgeSplit&) const = default;
};

struct TransformMap {
    PtaModel source;
    PtaModel result;
    std::vector<EdgeSplit> edge_map; // indexed by original edge id
};

// Moves every guard into a fresh intermediate location's invariant. Original
// locations keep their ids; edge i becomes edges 2i and 2i+1 and location
// |L| + i is its intermediate location.
inline TransformMap guards_to_invariants(const PtaModel& model) {
    require_valid(model);
    for (const auto& loc : model.locations)
        if (!loc.invariant.is_true())
            throw RejectedModel("guards_to_invariants needs a model without invariants",
                                {"location " + loc.name + " has invariant " + format_constraint(model, loc.invariant)});

    TransformMap tm{model, model, {}};
    PtaModel& out = tm.result;
    out.edges.clear();
    std::set<std::string> names;
    for (const auto& loc : model.locations) names.insert(loc.name);

    for (EdgeId e = 0; e < model.edges.size(); ++e) {
        const Edge& edge = model.edges[e];
        std::string name = model.locations[edge.source].name + "__via__" + std::to_string(e);
        while (names.count(name)) name += "_";
        names.insert(name);
        auto mid = static_cast<LocationId>(out.locations.size());
        out.locations.push_back(Location{name, {}, edge.guard});
        auto first = static_cast<EdgeId>(out.edges.size());
        out.edges.push_back(Edge{edge.source, mid, {}, edge.action, {}});
        out.edges.push_back(Edge{mid, edge.target, {}, std::nullopt, edge.resets});
        tm.edge_map.push_back({first, mid, first + 1});
    }
    return tm;
}

// A run of v(A) as a run of v(T(A)) of twice the length: (d, e) becomes
// (d, e') followed by (0, e'').
inline Run map_run_forward(const TransformMap& tm, const ParamValuation& v, const Run& run) {
    if (auto check = validate_run(tm.source, v, run); !check)
        throw StepError(StepPhase::Shape, "input run invalid at step " + std::to_string(check.failed_step) + ": " +
                                              check.reason);
    Run out{run.initial, {}};
    out.steps.reserve(run.steps.size() * 2);
    ConcreteState current = run.initial;
    for (const auto& st : run.steps) {
        const EdgeSplit& split = tm.edge_map.at(st.edge);
        ConcreteState mid{split.intermediate, current.clocks};
        for (auto& c : mid.clocks) c += st.delay;
        out.steps.push_back({st.delay, split.first, mid});
        out.steps.push_back({Rational(0), split.second, st.state});
        current = st.state;
    }
    return out;
}

// Inverse of map_run_forward on runs ending in an original location: each
// pair (d1, e'), (d2, e'') merges into (d1 + d2, e).
inline Run map_run_backward(const TransformMap& tm, const ParamValuation& v, const Run& run) {
    if (auto check = validate_run(tm.result, v, run); !check)
        throw StepError(StepPhase::Shape, "input run invalid at step " + std::to_string(check.failed_step) + ": " +
                                              check.reason);
    if (run.steps.size() % 2 != 0)
        throw StepError(StepPhase::Shape, "run of odd length " + std::to_string(run.steps.size()) +
                                              " does not end in an original location");
    const std::size_t original_edges = tm.edge_map.size();
    Run out{run.initial, {}};
    out.steps.reserve(run.steps.size() / 2);
    for (std::size_t i = 0; i < run.steps.size(); i += 2) {
        const auto& a = run.steps[i];
        const auto& b = run.steps[i + 1];
        EdgeId e = a.edge / 2;
        if (a.edge % 2 != 0 || e >= original_edges || b.edge != a.edge + 1)
            throw StepError(StepPhase::Shape, "steps " + std::to_string(i) + "," + std::to_string(i + 1) +
                                                  " are not the two halves of one original edge");
        out.steps.push_back({a.delay + b.delay, e, b.state});
    }
    return out;
}

} // namespace ptai
