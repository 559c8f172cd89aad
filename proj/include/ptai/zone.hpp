// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "ptai/model.hpp"
#include "ptai/semantics.hpp"
#include "ptai/valuation.hpp"

namespace ptai {

// Upper bound on a clock difference: (value, <) or (value, <=) or infinity.
// Packed as 2 * value + (non-strict ? 1 : 0) so that the integer order is the
// bound order (m, <) < (m, <=) < (m + 1, <).
class Bound {
  public:
    static constexpr Bound infinity() { return Bound(std::numeric_limits<std::int64_t>::max()); }
    static constexpr Bound le(std::int64_t v) { return Bound(v * 2 + 1); }
    static constexpr Bound lt(std::int64_t v) { return Bound(v * 2); }
    static constexpr Bound zero() { return le(0); }

    [[nodiscard]] constexpr bool is_infinite() const { return raw_ == infinity().raw_; }
    [[nodiscard]] constexpr std::int64_t value() const { return raw_ >> 1; }
    [[nodiscard]] constexpr bool is_strict() const { return (raw_ & 1) == 0; }
    [[nodiscard]] constexpr std::int64_t raw() const { return raw_; }

    friend constexpr Bound operator+(Bound a, Bound b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Bound(((a.raw_ & ~std::int64_t{1}) + (b.raw_ & ~std::int64_t{1})) | (a.raw_ & b.raw_ & 1));
    }
    friend constexpr auto operator<=>(Bound, Bound) = default;

    // Does the difference `diff` satisfy this bound?
    [[nodiscard]] bool admits(const Rational& diff) const {
        if (is_infinite()) return true;
        return is_strict() ? diff < value() : diff <= value();
    }

  private:
    constexpr explicit Bound(std::int64_t raw) : raw_(raw) {}
    std::int64_t raw_;
};

// Difference-bound matrix over clocks 1..n with the reference clock at index 0;
// entry (i, j) bounds x_i - x_j. Operations keep the matrix canonical.
class Dbm {
  public:
    // The single valuation where every clock is 0.
    static Dbm zero(std::size_t clocks) { return Dbm(clocks + 1, Bound::zero()); }

    // Every nonnegative valuation.
    static Dbm universe(std::size_t clocks) {
        Dbm z(clocks + 1, Bound::infinity());
        for (std::size_t i = 0; i < z.dim_; ++i) {
            z.at(i, i) = Bound::zero();
            z.at(0, i) = Bound::zero();
        }
        return z;
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] Bound at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
    Bound& at(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }

    [[nodiscard]] bool is_empty() const { return at(0, 0) < Bound::zero(); }

    // Floyd-Warshall tightening. A negative cycle collapses the matrix to the
    // single empty form, so that every empty zone compares equal.
    void canonicalize() {
        if (is_empty()) return;
        for (std::size_t k = 0; k < dim_; ++k)
            for (std::size_t i = 0; i < dim_; ++i) {
                Bound ik = at(i, k);
                if (ik.is_infinite()) continue;
                for (std::size_t j = 0; j < dim_; ++j) {
                    Bound via = ik + at(k, j);
                    if (via < at(i, j)) at(i, j) = via;
                }
            }
        for (std::size_t i = 0; i < dim_; ++i)
            if (at(i, i) < Bound::zero()) {
                std::fill(m_.begin(), m_.end(), Bound::lt(0));
                return;
            }
    }

    // Delay closure: drop the upper bounds of every clock.
    void up() {
        if (is_empty()) return;
        for (std::size_t i = 1; i < dim_; ++i) at(i, 0) = Bound::infinity();
    }

    void reset(ClockId clock) {
        if (is_empty()) return;
        std::size_t x = clock + 1;
        for (std::size_t j = 0; j < dim_; ++j) {
            at(x, j) = at(0, j);
            at(j, x) = at(j, 0);
        }
        at(x, x) = Bound::zero();
    }

    // Intersects with x_i - x_j bounded by b.
    void constrain(std::size_t i, std::size_t j, Bound b) {
        if (is_empty() || !(b < at(i, j))) return;
        at(i, j) = b;
        canonicalize();
    }

    void and_ineq(ClockId clock, Relation rel, const Rational& constant) {
        if (constant.denominator() != 1) throw ModelError("zone constraint with non-integer constant; rescale first");
        std::int64_t c = constant.numerator();
        std::size_t x = clock + 1;
        switch (rel) {
        case Relation::Lt: constrain(x, 0, Bound::lt(c)); break;
        case Relation::Le: constrain(x, 0, Bound::le(c)); break;
        case Relation::Eq:
            constrain(x, 0, Bound::le(c));
            constrain(0, x, Bound::le(-c));
            break;
        case Relation::Ge: constrain(0, x, Bound::le(-c)); break;
        case Relation::Gt: constrain(0, x, Bound::lt(-c)); break;
        }
    }

    void and_constraint(const Constraint& c) {
        for (const auto& ineq : c.inequalities) {
            if (!ineq.bound.is_constant()) throw ModelError("zone constraint mentions a parameter");
            and_ineq(ineq.clock, ineq.rel, ineq.bound.constant);
        }
    }

    // Classic max-constant extrapolation, sound for diagonal-free automata.
    void extrapolate(std::int64_t k) {
        if (is_empty()) return;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) {
                if (i == j) continue;
                Bound& b = at(i, j);
                if (b.is_infinite()) continue;
                if (b > Bound::le(k)) b = Bound::infinity();
                else if (b < Bound::lt(-k)) b = Bound::lt(-k);
            }
        canonicalize();
    }

    // Solution-set containment: other is a subset of *this.
    [[nodiscard]] bool includes(const Dbm& other) const {
        if (other.is_empty()) return true;
        if (is_empty()) return false;
        for (std::size_t i = 0; i < m_.size(); ++i)
            if (other.m_[i] > m_[i]) return false;
        return true;
    }

    [[nodiscard]] bool contains(const ClockValuation& w) const {
        if (is_empty()) return false;
        auto value = [&](std::size_t i) { return i == 0 ? Rational(0) : w.at(i - 1); };
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (!at(i, j).admits(value(i) - value(j))) return false;
        return true;
    }

    bool operator==(const Dbm&) const = default;

  private:
    Dbm(std::size_t dim, Bound fill) : dim_(dim), m_(dim * dim, fill) {}

    std::size_t dim_;
    std::vector<Bound> m_;
};

inline Dbm canonical(Dbm z) {
    z.canonicalize();
    return z;
}

inline Dbm up(Dbm z) {
    z.up();
    return z;
}

inline Dbm reset(Dbm z, const std::vector<ClockId>& clocks) {
    for (ClockId c : clocks) z.reset(c);
    return z;
}

inline Dbm and_ineq(Dbm z, const Inequality& ineq) {
    if (!ineq.bound.is_constant()) throw ModelError("zone constraint mentions a parameter");
    z.and_ineq(ineq.clock, ineq.rel, ineq.bound.constant);
    return z;
}

inline bool is_empty(const Dbm& z) { return z.is_empty(); }
inline bool includes(const Dbm& big, const Dbm& small) { return big.includes(small); }

struct SymbolicState {
    LocationId location = 0;
    Dbm zone;
};

struct ReachSet {
    std::vector<bool> locations; // locations with a reachable state
    std::size_t symbolic_states = 0;

    [[nodiscard]] bool reaches(const PtaModel& model, const Goal& goal) const {
        for (LocationId l = 0; l < locations.size(); ++l)
            if (locations[l] && goal.matches(model, l)) return true;
        return false;
    }
};

namespace detail {

inline std::int64_t max_constant(const PtaModel& model) {
    std::int64_t k = 0;
    for_each_bound(model, [&](const LinearBound& b) {
        if (!b.params.empty()) throw ModelError("zone exploration needs a model without parameters");
        if (b.constant.denominator() != 1) throw ModelError("zone exploration needs integer constants; rescale first");
        k = std::max(k, b.constant.numerator() < 0 ? -b.constant.numerator() : b.constant.numerator());
    });
    return k;
}

} // namespace detail

// Forward zone-graph exploration of a valuated, integer-constant automaton.
// Stops early once `goal` (when given) is reached.
inline ReachSet explore_zones(const PtaModel& model, const std::optional<Goal>& goal = std::nullopt) {
    if (!model.params.empty()) throw ModelError("zone exploration needs a model without parameters");
    const std::int64_t k = detail::max_constant(model);
    const std::size_t n = model.clocks.size();
    ReachSet result{std::vector<bool>(model.locations.size(), false), 0};

    std::vector<std::vector<EdgeId>> out(model.locations.size());
    for (EdgeId e = 0; e < model.edges.size(); ++e) out[model.edges[e].source].push_back(e);

    auto settle = [&](Dbm z, LocationId l) {
        z.and_constraint(model.locations[l].invariant);
        z.up();
        z.and_constraint(model.locations[l].invariant);
        z.extrapolate(k);
        return z;
    };

    // passed[l] holds zones; alive marks those not subsumed by a later one.
    struct Entry {
        Dbm zone;
        bool alive;
    };
    std::vector<std::vector<Entry>> passed(model.locations.size());
    std::deque<std::pair<LocationId, std::size_t>> waiting;

    auto add = [&](LocationId l, Dbm z) {
        if (z.is_empty()) return false;
        result.locations[l] = true;
        for (const auto& entry : passed[l])
            if (entry.alive && entry.zone.includes(z)) return goal && goal->matches(model, l);
        for (auto& entry : passed[l])
            if (entry.alive && z.includes(entry.zone)) entry.alive = false;
        passed[l].push_back({std::move(z), true});
        waiting.emplace_back(l, passed[l].size() - 1);
        ++result.symbolic_states;
        return goal && goal->matches(model, l);
    };

    Dbm init = Dbm::zero(n);
    init.and_constraint(model.locations.at(model.initial).invariant);
    if (init.is_empty()) return result;
    if (add(model.initial, settle(std::move(init), model.initial))) return result;

    while (!waiting.empty()) {
        auto [l, idx] = waiting.front();
        waiting.pop_front();
        if (!passed[l][idx].alive) continue;
        const Dbm zone = passed[l][idx].zone;
        for (EdgeId e : out[l]) {
            const Edge& edge = model.edges[e];
            Dbm z = zone;
            z.and_constraint(edge.guard);
            if (z.is_empty()) continue;
            for (ClockId c : edge.resets) z.reset(c);
            z.and_constraint(model.locations[edge.target].invariant);
            if (z.is_empty()) continue;
            if (add(edge.target, settle(std::move(z), edge.target))) return result;
        }
    }
    return result;
}

inline bool ta_reachable(const PtaModel& model, const Goal& goal) { return explore_zones(model, goal).reaches(model, goal); }

// Substitutes v, rescales to integers and explores.
inline ReachSet explore_under(const PtaModel& model, const ParamValuation& v) {
    return explore_zones(rescale(substitute(model, v)).model);
}

inline bool reachable_under(const PtaModel& model, const ParamValuation& v, const Goal& goal) {
    return ta_reachable(rescale(substitute(model, v)).model, goal);
}

} // namespace ptai
