// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

// Under C++20 rewritten comparisons, Boost 1.74's mixed rational/integer
// operator== calls itself forever. Exact non-template overloads win
// overload resolution and break the cycle.
namespace boost {
#define PTAI_RATIONAL_EQ(T)                                                                                  \
    inline bool operator==(const rational<std::int64_t>& a, T b) {                                           \
        return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);                         \
    }                                                                                                        \
    inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }                          \
    inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }                       \
    inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
PTAI_RATIONAL_EQ(int)
PTAI_RATIONAL_EQ(long)
PTAI_RATIONAL_EQ(long long)
#undef PTAI_RATIONAL_EQ
} // namespace boost

#include "ptai/errors.hpp"

namespace ptai {

// Exact scalar used for clock values, parameter values and constants.
using Rational = boost::rational<std::int64_t>;

using ClockId = std::uint32_t;
using ParamId = std::uint32_t;
using LocationId = std::uint32_t;
using EdgeId = std::uint32_t;
using ActionId = std::uint32_t;
using LabelId = std::uint32_t;

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Always "num/den", used by the structured result format.
inline std::string to_fraction_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "n", "-n" and "n/d".
inline std::optional<Rational> parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::optional<std::int64_t> {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        bool negative = false;
        if (s[0] == '-' || s[0] == '+') {
            negative = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) return std::nullopt;
        std::int64_t value = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            if (value > (INT64_MAX - 9) / 10) return std::nullopt;
            value = value * 10 + (s[i] - '0');
        }
        return negative ? -value : value;
    };
    auto slash = text.find('/');
    auto num = parse_int(text.substr(0, slash));
    if (!num) return std::nullopt;
    if (slash == std::string_view::npos) return Rational(*num);
    auto den = parse_int(text.substr(slash + 1));
    if (!den || *den <= 0) return std::nullopt;
    return Rational(*num, *den);
}

enum class Relation { Lt, Le, Eq, Ge, Gt };

[[nodiscard]] constexpr bool is_upper(Relation rel) { return rel == Relation::Lt || rel == Relation::Le; }
[[nodiscard]] constexpr bool is_strict(Relation rel) { return rel == Relation::Lt || rel == Relation::Gt; }

[[nodiscard]] inline std::string_view to_string(Relation rel) {
    switch (rel) {
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Eq: return "=";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
    }
    return "?";
}

template <class T>
[[nodiscard]] bool holds(const T& lhs, Relation rel, const T& rhs) {
    switch (rel) {
    case Relation::Lt: return lhs < rhs;
    case Relation::Le: return lhs <= rhs;
    case Relation::Eq: return lhs == rhs;
    case Relation::Ge: return lhs >= rhs;
    case Relation::Gt: return lhs > rhs;
    }
    return false;
}

// Sum of distinct parameters plus a constant. Parametric models only carry
// integer constants; valuated models carry rational ones.
struct LinearBound {
    std::vector<ParamId> params;
    Rational constant{0};

    [[nodiscard]] bool is_constant() const { return params.empty(); }
    bool operator==(const LinearBound&) const = default;
};

struct Inequality {
    ClockId clock = 0;
    Relation rel = Relation::Le;
    LinearBound bound;

    bool operator==(const Inequality&) const = default;
};

// Conjunction of inequalities; the empty conjunction is "true".
struct Constraint {
    std::vector<Inequality> inequalities;

    [[nodiscard]] bool is_true() const { return inequalities.empty(); }
    bool operator==(const Constraint&) const = default;
};

struct Location {
    std::string name;
    std::vector<LabelId> labels;
    Constraint invariant;

    bool operator==(const Location&) const = default;
};

struct Edge {
    LocationId source = 0;
    LocationId target = 0;
    Constraint guard;
    std::optional<ActionId> action; // nullopt is the silent action
    std::vector<ClockId> resets;

    bool operator==(const Edge&) const = default;
};

struct ParamInterval {
    std::int64_t lower = 0;
    std::int64_t upper = 0;

    bool operator==(const ParamInterval&) const = default;
};

struct PtaModel {
    std::vector<std::string> actions;
    std::vector<std::string> clocks;
    std::vector<std::string> params;
    std::vector<std::string> labels;
    std::vector<Location> locations;
    LocationId initial = 0;
    std::vector<Edge> edges;
    std::optional<std::vector<ParamInterval>> param_bounds;

    bool operator==(const PtaModel&) const = default;

    [[nodiscard]] std::optional<LocationId> find_location(std::string_view name) const {
        return find(locations, name, [](const Location& l) -> const std::string& { return l.name; });
    }
    [[nodiscard]] std::optional<ClockId> find_clock(std::string_view name) const { return find(clocks, name); }
    [[nodiscard]] std::optional<ParamId> find_param(std::string_view name) const { return find(params, name); }
    [[nodiscard]] std::optional<LabelId> find_label(std::string_view name) const { return find(labels, name); }
    [[nodiscard]] std::optional<ActionId> find_action(std::string_view name) const { return find(actions, name); }

    [[nodiscard]] bool has_label(LocationId loc, LabelId label) const {
        const auto& ls = locations[loc].labels;
        return std::find(ls.begin(), ls.end(), label) != ls.end();
    }

  private:
    template <class Range, class Proj = std::identity>
    static std::optional<std::uint32_t> find(const Range& range, std::string_view name, Proj proj = {}) {
        for (std::size_t i = 0; i < range.size(); ++i)
            if (proj(range[i]) == name) return static_cast<std::uint32_t>(i);
        return std::nullopt;
    }
};

// Parameter id -> nonnegative rational, total over the model parameters.
class ParamValuation {
  public:
    ParamValuation() = default;
    explicit ParamValuation(std::vector<Rational> values) : values_(std::move(values)) {}

    static ParamValuation uniform(std::size_t count, Rational value) {
        return ParamValuation(std::vector<Rational>(count, value));
    }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const Rational& operator[](ParamId p) const { return values_.at(p); }
    Rational& operator[](ParamId p) { return values_.at(p); }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }

    bool operator==(const ParamValuation&) const = default;

  private:
    std::vector<Rational> values_;
};

// Throws ValuationError unless v is total, nonnegative and inside the bounds.
inline void check_valuation(const PtaModel& model, const ParamValuation& v) {
    if (v.size() != model.params.size())
        throw ValuationError("valuation assigns " + std::to_string(v.size()) + " parameters, model declares " +
                             std::to_string(model.params.size()));
    for (ParamId p = 0; p < v.size(); ++p) {
        if (v[p] < 0) throw ValuationError("parameter " + model.params[p] + " is negative");
        if (model.param_bounds) {
            const auto& b = (*model.param_bounds)[p];
            if (v[p] < b.lower || v[p] > b.upper)
                throw ValuationError("parameter " + model.params[p] + " = " + to_string(v[p]) + " outside [" +
                                     std::to_string(b.lower) + "," + std::to_string(b.upper) + "]");
        }
    }
}

[[nodiscard]] inline Rational evaluate(const LinearBound& bound, const ParamValuation& v) {
    Rational sum = bound.constant;
    for (ParamId p : bound.params) {
        if (p >= v.size()) throw ValuationError("no value for parameter #" + std::to_string(p));
        sum += v[p];
    }
    return sum;
}

// Goal of a reachability query: a location, or any location carrying a label.
struct Goal {
    enum class Kind { Location, Label };

    Kind kind = Kind::Location;
    std::uint32_t id = 0;

    static Goal location(LocationId loc) { return {Kind::Location, loc}; }
    static Goal label(LabelId label) { return {Kind::Label, label}; }

    [[nodiscard]] bool matches(const PtaModel& model, LocationId loc) const {
        return kind == Kind::Location ? loc == id : model.has_label(loc, id);
    }

    bool operator==(const Goal&) const = default;
};

inline Goal resolve_goal(const PtaModel& model, Goal::Kind kind, std::string_view name) {
    if (kind == Goal::Kind::Location) {
        if (auto loc = model.find_location(name)) return Goal::location(*loc);
        throw ModelError("unknown location '" + std::string(name) + "'");
    }
    if (auto label = model.find_label(name)) return Goal::label(*label);
    throw ModelError("unknown label '" + std::string(name) + "'");
}

[[nodiscard]] inline std::string describe(const PtaModel& model, const Goal& goal) {
    if (goal.kind == Goal::Kind::Location) return "location " + model.locations.at(goal.id).name;
    return "label " + model.labels.at(goal.id);
}

// "p + q + 1", "p - 2", "0", "3/4".
inline std::string format_bound(const PtaModel& model, const LinearBound& bound) {
    std::string out;
    for (ParamId p : bound.params) {
        if (!out.empty()) out += " + ";
        out += p < model.params.size() ? model.params[p] : "#" + std::to_string(p);
    }
    if (out.empty()) return to_string(bound.constant);
    if (bound.constant > 0) out += " + " + to_string(bound.constant);
    if (bound.constant < 0) out += " - " + to_string(-bound.constant);
    return out;
}

inline std::string format_inequality(const PtaModel& model, const Inequality& ineq) {
    std::string clock = ineq.clock < model.clocks.size() ? model.clocks[ineq.clock] : "#" + std::to_string(ineq.clock);
    return clock + " " + std::string(to_string(ineq.rel)) + " " + format_bound(model, ineq.bound);
}

inline std::string format_constraint(const PtaModel& model, const Constraint& c) {
    std::string out = "{";
    for (std::size_t i = 0; i < c.inequalities.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += format_inequality(model, c.inequalities[i]);
    }
    return out + (c.is_true() ? "}" : " }");
}

inline std::string edge_name(const PtaModel& model, EdgeId e) {
    const Edge& edge = model.edges.at(e);
    return model.locations.at(edge.source).name + "->" + model.locations.at(edge.target).name + "#" +
           std::to_string(e);
}

inline Inequality make_inequality(ClockId clock, Relation rel, std::vector<ParamId> params, Rational constant = 0) {
    std::sort(params.begin(), params.end());
    return Inequality{clock, rel, LinearBound{std::move(params), constant}};
}

// Incremental construction with name interning; used by the generators and tests.
class ModelBuilder {
  public:
    ClockId clock(const std::string& name) { return intern(model_.clocks, name); }
    ParamId param(const std::string& name) { return intern(model_.params, name); }
    ActionId action(const std::string& name) { return intern(model_.actions, name); }
    LabelId label(const std::string& name) { return intern(model_.labels, name); }

    LocationId location(std::string name, Constraint invariant = {}, const std::vector<std::string>& labels = {}) {
        Location loc{std::move(name), {}, std::move(invariant)};
        for (const auto& l : labels) loc.labels.push_back(label(l));
        model_.locations.push_back(std::move(loc));
        return static_cast<LocationId>(model_.locations.size() - 1);
    }

    EdgeId edge(LocationId source, LocationId target, Constraint guard = {},
                const std::optional<std::string>& action_name = std::nullopt, std::vector<ClockId> resets = {}) {
        Edge e{source, target, std::move(guard), std::nullopt, std::move(resets)};
        if (action_name) e.action = action(*action_name);
        std::sort(e.resets.begin(), e.resets.end());
        model_.edges.push_back(std::move(e));
        return static_cast<EdgeId>(model_.edges.size() - 1);
    }

    void initial(LocationId loc) { model_.initial = loc; }

    void bound(ParamId p, std::int64_t lower, std::int64_t upper) {
        if (!model_.param_bounds) model_.param_bounds.emplace();
        if (model_.param_bounds->size() <= p) model_.param_bounds->resize(p + 1);
        (*model_.param_bounds)[p] = {lower, upper};
    }

    [[nodiscard]] const PtaModel& peek() const { return model_; }
    PtaModel build() && { return std::move(model_); }
    PtaModel build() const& { return model_; }

  private:
    static std::uint32_t intern(std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::uint32_t>(it - names.begin());
        names.push_back(name);
        return static_cast<std::uint32_t>(names.size() - 1);
    }

    PtaModel model_;
};

} // namespace ptai
