// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ptai/model.hpp"

namespace ptai {

struct ClassReport {
    bool is_pta_i = false;   // every guard is the empty constraint
    bool is_pta_iu = false;  // additionally only x < sum + d / x <= sum + d invariants with d >= 0
    bool is_bounded = false;
    bool has_nonnegative_constants = false;
    std::vector<std::string> violations;
};

struct Validation {
    std::vector<std::string> errors;
    ClassReport report;

    [[nodiscard]] bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string where(const PtaModel& model, LocationId loc) {
    return loc < model.locations.size() ? "location " + model.locations[loc].name : "location #" + std::to_string(loc);
}

inline std::string where_edge(const PtaModel& model, EdgeId e) {
    const Edge& edge = model.edges[e];
    if (edge.source < model.locations.size() && edge.target < model.locations.size())
        return "edge " + edge_name(model, e);
    return "edge #" + std::to_string(e);
}

// `ctx` builds the error prefix; only called when there is something to report.
template <class Ctx>
void check_constraint(const PtaModel& model, const Constraint& c, const Ctx& ctx, std::vector<std::string>& errors) {
    for (const auto& ineq : c.inequalities) {
        if (ineq.clock >= model.clocks.size())
            errors.push_back(ctx() + ": undeclared clock #" + std::to_string(ineq.clock));
        const auto& ps = ineq.bound.params;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            ParamId p = ps[i];
            if (p >= model.params.size()) errors.push_back(ctx() + ": undeclared parameter #" + std::to_string(p));
            if (std::find(ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(i), p) != ps.begin() + static_cast<std::ptrdiff_t>(i))
                errors.push_back(ctx() + ": parameter " +
                                 (p < model.params.size() ? model.params[p] : "#" + std::to_string(p)) +
                                 " occurs twice in one bound");
        }
        if (!model.params.empty() && ineq.bound.constant.denominator() != 1)
            errors.push_back(ctx() + ": non-integer constant " + to_string(ineq.bound.constant) +
                             " in a parametric model");
    }
}

// Sorts (hash, index) pairs; the names themselves are only touched on a hash match.
template <class Names>
void check_unique(const Names& names, const std::string& what, std::vector<std::string>& errors) {
    std::vector<std::string_view> views(names.begin(), names.end());
    std::vector<std::pair<std::size_t, std::size_t>> keyed;
    keyed.reserve(views.size());
    for (std::size_t i = 0; i < views.size(); ++i) keyed.emplace_back(std::hash<std::string_view>{}(views[i]), i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string_view> dups;
    for (std::size_t i = 0; i < keyed.size();) {
        std::size_t j = i;
        while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
        for (std::size_t a = i; a < j; ++a)
            for (std::size_t b = a + 1; b < j; ++b)
                if (views[keyed[a].second] == views[keyed[b].second]) dups.push_back(views[keyed[a].second]);
        i = j;
    }
    std::sort(dups.begin(), dups.end());
    dups.erase(std::unique(dups.begin(), dups.end()), dups.end());
    for (auto d : dups) errors.push_back("duplicate " + what + " '" + std::string(d) + "'");
}

} // namespace detail

// Purely syntactic class membership.
inline ClassReport classify(const PtaModel& model) {
    ClassReport r;
    r.is_pta_i = true;
    r.has_nonnegative_constants = true;
    bool upper_only = true;
    r.is_bounded = model.param_bounds.has_value();

    for (EdgeId e = 0; e < model.edges.size(); ++e) {
        const Edge& edge = model.edges[e];
        if (!edge.guard.is_true()) {
            r.is_pta_i = false;
            r.violations.push_back(detail::where_edge(model, e) + ": guard " + format_constraint(model, edge.guard) +
                                   " is not empty");
        }
        for (const auto& ineq : edge.guard.inequalities)
            if (ineq.bound.constant < 0) r.has_nonnegative_constants = false;
    }
    for (LocationId l = 0; l < model.locations.size(); ++l) {
        for (const auto& ineq : model.locations[l].invariant.inequalities) {
            if (!is_upper(ineq.rel)) {
                upper_only = false;
                r.violations.push_back(detail::where(model, l) + ": invariant " + format_inequality(model, ineq) +
                                       " is not an upper bound");
            }
            if (ineq.bound.constant < 0) {
                r.has_nonnegative_constants = false;
                upper_only = false;
                r.violations.push_back(detail::where(model, l) + ": invariant " + format_inequality(model, ineq) +
                                       " has a negative constant");
            }
        }
    }
    r.is_pta_iu = r.is_pta_i && upper_only;
    return r;
}

// Structural well-formedness plus the class report. Never repairs anything.
inline Validation validate_model(const PtaModel& model) {
    Validation v;
    auto& errors = v.errors;
    if (model.locations.empty()) errors.push_back("model has no locations");
    else if (model.initial >= model.locations.size())
        errors.push_back("initial location #" + std::to_string(model.initial) + " does not exist");

    detail::check_unique(model.clocks, "clock", errors);
    detail::check_unique(model.params, "parameter", errors);
    std::vector<std::string_view> loc_names;
    loc_names.reserve(model.locations.size());
    for (const auto& l : model.locations) loc_names.push_back(l.name);
    detail::check_unique(loc_names, "location", errors);

    for (LocationId l = 0; l < model.locations.size(); ++l) {
        const auto& loc = model.locations[l];
        for (LabelId lb : loc.labels)
            if (lb >= model.labels.size())
                errors.push_back(detail::where(model, l) + ": undeclared label #" + std::to_string(lb));
        detail::check_constraint(model, loc.invariant, [&] { return detail::where(model, l) + " invariant"; }, errors);
    }
    for (EdgeId e = 0; e < model.edges.size(); ++e) {
        const Edge& edge = model.edges[e];
        auto ctx = [&] { return detail::where_edge(model, e); };
        if (edge.source >= model.locations.size()) errors.push_back(ctx() + ": source location does not exist");
        if (edge.target >= model.locations.size()) errors.push_back(ctx() + ": target location does not exist");
        if (edge.action && *edge.action >= model.actions.size()) errors.push_back(ctx() + ": undeclared action");
        const auto& rs = edge.resets;
        for (auto it = rs.begin(); it != rs.end(); ++it) {
            if (*it >= model.clocks.size()) errors.push_back(ctx() + ": reset of undeclared clock #" + std::to_string(*it));
            if (std::find(rs.begin(), it, *it) != it) errors.push_back(ctx() + ": clock reset twice");
        }
        detail::check_constraint(model, edge.guard, [&] { return ctx() + " guard"; }, errors);
    }
    if (model.param_bounds) {
        if (model.param_bounds->size() != model.params.size())
            errors.push_back("parameter bounds must cover every parameter");
        for (ParamId p = 0; p < model.param_bounds->size() && p < model.params.size(); ++p) {
            const auto& b = (*model.param_bounds)[p];
            if (b.lower < 0 || b.lower > b.upper)
                errors.push_back("parameter " + model.params[p] + ": invalid bounds [" + std::to_string(b.lower) +
                                 "," + std::to_string(b.upper) + "]");
        }
    }
    if (errors.empty()) v.report = classify(model);
    return v;
}

inline void require_valid(const PtaModel& model) {
    auto v = validate_model(model);
    if (v.ok()) return;
    std::string msg = "invalid model:";
    for (const auto& e : v.errors) msg += "\n  " + e;
    throw ModelError(msg);
}

// Throws RejectedModel unless the model is a PTA with only upper-bound
// invariants and nonnegative constants.
inline ClassReport require_pta_iu(const PtaModel& model) {
    require_valid(model);
    auto report = classify(model);
    if (!report.is_pta_iu)
        throw RejectedModel("model is not a PTA with only upper-bound invariants", report.violations);
    return report;
}

} // namespace ptai
