// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ptai/classify.hpp"
#include "ptai/semantics.hpp"

namespace ptai {

enum class Sign { Zero, Pos };

// Equivalence class of valuations agreeing on which parameters are 0.
// Bit p of `positive` set means parameter p is POS.
struct SignRegion {
    std::uint64_t positive = 0;
    std::size_t size = 0;

    [[nodiscard]] Sign sign(ParamId p) const { return (positive >> p) & 1 ? Sign::Pos : Sign::Zero; }

    static SignRegion of(const ParamValuation& v) {
        SignRegion s{0, v.size()};
        for (ParamId p = 0; p < v.size(); ++p)
            if (v[p] > 0) s.positive |= std::uint64_t{1} << p;
        return s;
    }

    // The 0/1 valuation of the region.
    [[nodiscard]] ParamValuation representative() const {
        std::vector<Rational> values(size);
        for (ParamId p = 0; p < size; ++p) values[p] = sign(p) == Sign::Pos ? 1 : 0;
        return ParamValuation(std::move(values));
    }

    bool operator==(const SignRegion&) const = default;
};

// Lexicographic over parameters in declaration order, ZERO before POS.
inline bool region_less(const SignRegion& a, const SignRegion& b) {
    for (ParamId p = 0; p < a.size; ++p)
        if (a.sign(p) != b.sign(p)) return a.sign(p) == Sign::Zero;
    return false;
}

// Representative of a region inside the parameter bounds: 0 for ZERO, 1
// clamped into [lower, upper] for POS; nullopt when the bounds exclude the region.
inline std::optional<ParamValuation> bounded_representative(const PtaModel& model, const SignRegion& s) {
    ParamValuation v = s.representative();
    if (!model.param_bounds) return v;
    for (ParamId p = 0; p < s.size; ++p) {
        const auto& b = (*model.param_bounds)[p];
        if (s.sign(p) == Sign::Zero) {
            if (b.lower > 0) return std::nullopt;
        } else {
            if (b.upper <= 0) return std::nullopt;
            v[p] = std::clamp<std::int64_t>(1, std::max<std::int64_t>(b.lower, 1), b.upper);
        }
    }
    return v;
}

// A 0-delay run keeps every clock at 0, so a location can be crossed in
// zero time iff the zero valuation satisfies its invariant.
inline bool passable_at_zero(const Constraint& invariant, const ParamValuation& v) {
    for (const auto& ineq : invariant.inequalities)
        if (!holds(Rational(0), ineq.rel, evaluate(ineq.bound, v))) return false;
    return true;
}

namespace detail {

inline void require_region_uniform(const Inequality& ineq) {
    if (!is_upper(ineq.rel) || ineq.bound.constant < 0)
        throw RejectedModel("sign regions are only uniform for upper-bound invariants with nonnegative constants");
}

// Parameter mask of an inequality that blocks 0-delay passage unless one of
// those parameters is positive (x < p + q with d = 0); nullopt when the
// inequality never blocks.
inline std::optional<std::uint64_t> blocking_mask(const Inequality& ineq) {
    require_region_uniform(ineq);
    if (ineq.rel != Relation::Lt || ineq.bound.constant != 0) return std::nullopt;
    std::uint64_t mask = 0;
    for (ParamId p : ineq.bound.params) mask |= std::uint64_t{1} << p;
    return mask;
}

} // namespace detail

inline bool passable_in_region(const Constraint& invariant, const SignRegion& s) {
    for (const auto& ineq : invariant.inequalities)
        if (auto mask = detail::blocking_mask(ineq); mask && (*mask & s.positive) == 0) return false;
    return true;
}

namespace detail {

// Location graph in compressed adjacency form, edges in declaration order.
struct Adjacency {
    std::vector<std::size_t> offset;
    std::vector<EdgeId> edges;

    explicit Adjacency(const PtaModel& model) : offset(model.locations.size() + 1, 0) {
        for (const auto& e : model.edges) ++offset[e.source + 1];
        for (std::size_t i = 1; i < offset.size(); ++i) offset[i] += offset[i - 1];
        edges.resize(model.edges.size());
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (EdgeId e = 0; e < model.edges.size(); ++e) edges[fill[model.edges[e].source]++] = e;
    }
};

inline constexpr EdgeId no_edge = UINT32_MAX;

// BFS over passable locations; returns the shortest 0-delay witness.
inline std::optional<Run> zero_delay_search(const PtaModel& model, const Adjacency& adj,
                                            const std::vector<bool>& passable, const Goal& goal) {
    if (!passable[model.initial]) return std::nullopt;
    const ConcreteState zero = initial_state(model);
    std::vector<EdgeId> parent(model.locations.size(), no_edge);
    std::vector<bool> seen(model.locations.size(), false);
    std::vector<LocationId> queue{model.initial};
    seen[model.initial] = true;
    std::optional<LocationId> found;
    for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        LocationId l = queue[head];
        if (goal.matches(model, l)) {
            found = l;
            break;
        }
        for (std::size_t i = adj.offset[l]; i < adj.offset[l + 1]; ++i) {
            EdgeId e = adj.edges[i];
            LocationId t = model.edges[e].target;
            if (seen[t] || !passable[t]) continue;
            seen[t] = true;
            parent[t] = e;
            queue.push_back(t);
        }
    }
    if (!found) return std::nullopt;
    std::vector<EdgeId> path;
    for (LocationId l = *found; parent[l] != no_edge; l = model.edges[parent[l]].source) path.push_back(parent[l]);
    Run run{zero, {}};
    run.steps.reserve(path.size());
    for (auto it = path.rbegin(); it != path.rend(); ++it)
        run.steps.push_back({Rational(0), *it, ConcreteState{model.edges[*it].target, zero.clocks}});
    return run;
}

} // namespace detail

struct EmptinessResult {
    bool empty = true;
    std::optional<Run> witness;  // 0-delay run under `valuation`
    ParamValuation valuation;    // v_1 (clamped into the bounds, if any)
};

// EF-emptiness: some valuation reaches the goal iff a 0-delay run reaches it
// under v_1. One graph traversal after pruning locations blocked at zero.
inline EmptinessResult ef_emptiness(const PtaModel& model, const Goal& goal) {
    require_pta_iu(model);
    // Every parameter positive (1, or clamped into its bounds) is the most
    // permissive sign pattern.
    ParamValuation v1 = ParamValuation::uniform(model.params.size(), 1);
    if (model.param_bounds)
        for (ParamId p = 0; p < model.params.size(); ++p) {
            const auto& b = (*model.param_bounds)[p];
            v1[p] = b.upper <= 0 ? 0 : std::clamp<std::int64_t>(1, std::max<std::int64_t>(b.lower, 1), b.upper);
        }
    std::vector<bool> passable(model.locations.size());
    for (LocationId l = 0; l < model.locations.size(); ++l)
        passable[l] = passable_at_zero(model.locations[l].invariant, v1);
    detail::Adjacency adj(model);
    auto witness = detail::zero_delay_search(model, adj, passable, goal);
    return {!witness.has_value(), std::move(witness), std::move(v1)};
}

struct AcceptedRegion {
    SignRegion region;
    Run witness;
};

struct SynthesisResult {
    std::size_t param_count = 0;
    Goal goal;
    std::vector<AcceptedRegion> accepted; // sorted by region_less
    std::size_t regions_checked = 0;
    std::vector<std::string> notes;
};

struct SynthesisOptions {
    std::size_t max_params = 20;
    bool parallel = false;
};

// EF-synthesis: the answer is a union of sign regions; each region is decided
// by one 0-delay search. Regions are visited in Gray-code order.
inline SynthesisResult ef_synthesis(const PtaModel& model, const Goal& goal, const SynthesisOptions& options = {}) {
    require_pta_iu(model);
    const std::size_t n = model.params.size();
    if (n > options.max_params || n > 62)
        throw RejectedModel("refusing to enumerate 2^" + std::to_string(n) + " sign regions (parameter cap is " +
                            std::to_string(options.max_params) + ")");

    std::vector<std::vector<std::uint64_t>> blocking(model.locations.size());
    for (LocationId l = 0; l < model.locations.size(); ++l)
        for (const auto& ineq : model.locations[l].invariant.inequalities)
            if (auto mask = detail::blocking_mask(ineq)) blocking[l].push_back(*mask);
    const detail::Adjacency adj(model);
    const std::uint64_t count = std::uint64_t{1} << n;

    struct Outcome {
        std::optional<Run> witness;
        bool skipped = false;
    };
    std::vector<Outcome> outcomes(count);
    std::atomic<std::size_t> checked{0};

    auto check = [&](std::uint64_t index, std::vector<bool>& passable) {
        SignRegion s{index ^ (index >> 1), n};
        ++checked;
        if (!bounded_representative(model, s)) {
            outcomes[index].skipped = true;
            return;
        }
        for (LocationId l = 0; l < model.locations.size(); ++l) {
            bool ok = true;
            for (auto mask : blocking[l]) ok = ok && (mask & s.positive) != 0;
            passable[l] = ok;
        }
        outcomes[index].witness = detail::zero_delay_search(model, adj, passable, goal);
    };

    std::size_t workers = options.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
    if (workers <= 1 || count < 2) {
        std::vector<bool> passable(model.locations.size());
        for (std::uint64_t i = 0; i < count; ++i) check(i, passable);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                std::vector<bool> passable(model.locations.size());
                for (std::uint64_t i; (i = next++) < count;) check(i, passable);
            });
        for (auto& t : pool) t.join();
    }

    SynthesisResult result{n, goal, {}, checked.load(), {}};
    for (std::uint64_t i = 0; i < count; ++i) {
        SignRegion s{i ^ (i >> 1), n};
        if (outcomes[i].skipped) {
            std::string desc;
            for (ParamId p = 0; p < n; ++p)
                desc += (p ? ", " : "") + model.params[p] + (s.sign(p) == Sign::Pos ? " > 0" : " = 0");
            result.notes.push_back("region {" + desc + "} excluded by parameter bounds");
        } else if (outcomes[i].witness) {
            result.accepted.push_back({s, std::move(*outcomes[i].witness)});
        }
    }
    std::sort(result.accepted.begin(), result.accepted.end(),
              [](const AcceptedRegion& a, const AcceptedRegion& b) { return region_less(a.region, b.region); });
    return result;
}

inline bool membership(const SynthesisResult& result, const ParamValuation& v) {
    SignRegion s = SignRegion::of(v);
    return std::any_of(result.accepted.begin(), result.accepted.end(),
                       [&](const AcceptedRegion& a) { return a.region == s; });
}

enum class SignSet { Zero, Pos, Any };

// Either one atom per parameter (a product of sign sets) or a disjunction of
// region conjunctions. An empty disjunction is "false".
struct RenderedConstraint {
    bool product = false;
    std::vector<SignSet> atoms;          // product form
    std::vector<SignRegion> disjuncts;   // disjunction form, sorted

    [[nodiscard]] bool contains(const ParamValuation& v) const {
        SignRegion s = SignRegion::of(v);
        if (product) {
            for (ParamId p = 0; p < atoms.size(); ++p) {
                if (atoms[p] == SignSet::Zero && s.sign(p) != Sign::Zero) return false;
                if (atoms[p] == SignSet::Pos && s.sign(p) != Sign::Pos) return false;
            }
            return true;
        }
        return std::any_of(disjuncts.begin(), disjuncts.end(), [&](const SignRegion& r) { return r == s; });
    }

    // "p >= 0 & q > 0", "(p = 0 & q > 0) | (p > 0 & q = 0)", "false" or "true".
    [[nodiscard]] std::string text(const std::vector<std::string>& params) const {
        auto atom = [&](ParamId p, SignSet set) {
            switch (set) {
            case SignSet::Zero: return params[p] + " = 0";
            case SignSet::Pos: return params[p] + " > 0";
            case SignSet::Any: return params[p] + " >= 0";
            }
            return std::string();
        };
        auto conj = [&](const std::vector<SignSet>& sets) {
            std::string out;
            for (ParamId p = 0; p < sets.size(); ++p) out += (p ? " & " : "") + atom(p, sets[p]);
            return out.empty() ? std::string("true") : out;
        };
        if (product) return conj(atoms);
        if (disjuncts.empty()) return "false";
        std::string out;
        for (std::size_t i = 0; i < disjuncts.size(); ++i) {
            std::vector<SignSet> sets;
            for (ParamId p = 0; p < disjuncts[i].size; ++p)
                sets.push_back(disjuncts[i].sign(p) == Sign::Pos ? SignSet::Pos : SignSet::Zero);
            out += (i ? " | " : "") + std::string("(") + conj(sets) + ")";
        }
        return out;
    }
};

inline RenderedConstraint render(const SynthesisResult& result) {
    RenderedConstraint rc;
    const std::size_t n = result.param_count;
    if (result.accepted.empty()) return rc;
    std::vector<bool> has_zero(n, false), has_pos(n, false);
    for (const auto& a : result.accepted)
        for (ParamId p = 0; p < n; ++p) (a.region.sign(p) == Sign::Pos ? has_pos : has_zero)[p] = true;
    // Accepted regions are distinct, so they form a product iff their count
    // equals the product of the per-parameter sign-set sizes.
    long double product_size = 1;
    for (ParamId p = 0; p < n; ++p) product_size *= (has_zero[p] && has_pos[p]) ? 2 : 1;
    if (product_size == static_cast<long double>(result.accepted.size())) {
        rc.product = true;
        for (ParamId p = 0; p < n; ++p)
            rc.atoms.push_back(has_zero[p] && has_pos[p] ? SignSet::Any : has_pos[p] ? SignSet::Pos : SignSet::Zero);
        return rc;
    }
    for (const auto& a : result.accepted) rc.disjuncts.push_back(a.region);
    return rc;
}

} // namespace ptai
