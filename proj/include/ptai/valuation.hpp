// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>

#include "ptai/model.hpp"

namespace ptai {

namespace detail {

template <class F>
void for_each_bound(PtaModel& model, F&& f) {
    for (auto& loc : model.locations)
        for (auto& ineq : loc.invariant.inequalities) f(ineq.bound);
    for (auto& edge : model.edges)
        for (auto& ineq : edge.guard.inequalities) f(ineq.bound);
}

template <class F>
void for_each_bound(const PtaModel& model, F&& f) {
    for (const auto& loc : model.locations)
        for (const auto& ineq : loc.invariant.inequalities) f(ineq.bound);
    for (const auto& edge : model.edges)
        for (const auto& ineq : edge.guard.inequalities) f(ineq.bound);
}

} // namespace detail

// The timed automaton v(A): every parameter replaced by its value.
inline PtaModel substitute(const PtaModel& model, const ParamValuation& v) {
    check_valuation(model, v);
    PtaModel out = model;
    detail::for_each_bound(out, [&](LinearBound& b) {
        b.constant = evaluate(b, v);
        b.params.clear();
    });
    out.params.clear();
    out.param_bounds.reset();
    return out;
}

struct Rescaled {
    PtaModel model;
    std::int64_t scale = 1;
};

// Multiplies every constant by the LCM of their denominators. Location
// reachability is unchanged (uniform time scaling).
inline Rescaled rescale(const PtaModel& model) {
    if (!model.params.empty()) throw ModelError("rescale needs a model without parameters");
    std::int64_t scale = 1;
    detail::for_each_bound(model, [&](const LinearBound& b) {
        if (!b.params.empty()) throw ModelError("rescale needs a model without parameters");
        scale = std::lcm(scale, b.constant.denominator());
    });
    Rescaled out{model, scale};
    detail::for_each_bound(out.model, [&](LinearBound& b) { b.constant *= scale; });
    return out;
}

} // namespace ptai
