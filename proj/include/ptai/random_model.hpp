// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ptai/model.hpp"

namespace ptai {

enum class RandomProfile {
    InvariantFreePta, // parametric guards, no invariants
    PtaIu,            // upper-bound parametric invariants, no guards
    Chain,            // l0 -> ... -> l(n-1), every location x < p
};

// Every generated model carries a label "goal" on at least one location.
// Same (profile, seed, size) gives the same model.
inline PtaModel random_model(RandomProfile profile, std::uint64_t seed, std::size_t size = 0) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    ModelBuilder b;

    if (profile == RandomProfile::Chain) {
        const std::size_t n = size == 0 ? 10 : size;
        ClockId x = b.clock("x");
        ParamId p = b.param("p");
        Constraint inv{{make_inequality(x, Relation::Lt, {p})}};
        for (std::size_t i = 0; i < n; ++i)
            b.location("l" + std::to_string(i), inv, i + 1 == n ? std::vector<std::string>{"goal"} : std::vector<std::string>{});
        for (std::size_t i = 0; i + 1 < n; ++i)
            b.edge(static_cast<LocationId>(i), static_cast<LocationId>(i + 1), {}, std::nullopt, {x});
        return std::move(b).build();
    }

    const bool iu = profile == RandomProfile::PtaIu;
    const std::size_t locations = static_cast<std::size_t>(pick(2, iu ? 10 : 8));
    const std::size_t clocks = iu ? static_cast<std::size_t>(pick(1, 3)) : 2;
    const std::size_t params = iu ? static_cast<std::size_t>(pick(1, 3)) : 2;
    for (std::size_t c = 0; c < clocks; ++c) b.clock("x" + std::to_string(c));
    for (std::size_t p = 0; p < params; ++p) b.param("p" + std::to_string(p));
    b.action("a");
    b.action("b");

    auto random_params = [&] {
        std::vector<ParamId> ps;
        for (ParamId p = 0; p < params; ++p)
            if (coin(0.4)) ps.push_back(p);
        return ps;
    };
    auto random_constraint = [&](bool upper_only, std::int64_t max_const, double density) {
        Constraint c;
        for (ClockId x = 0; x < clocks; ++x) {
            if (!coin(density)) continue;
            static constexpr Relation all[] = {Relation::Lt, Relation::Le, Relation::Eq, Relation::Ge, Relation::Gt};
            Relation rel = upper_only ? (coin(0.5) ? Relation::Lt : Relation::Le) : all[pick(0, 4)];
            c.inequalities.push_back(make_inequality(x, rel, random_params(), pick(0, max_const)));
        }
        return c;
    };
    auto random_resets = [&] {
        std::vector<ClockId> rs;
        for (ClockId x = 0; x < clocks; ++x)
            if (coin(0.35)) rs.push_back(x);
        return rs;
    };

    const auto goal = static_cast<LocationId>(pick(1, static_cast<std::int64_t>(locations) - 1));
    for (std::size_t l = 0; l < locations; ++l)
        b.location("l" + std::to_string(l), iu && coin(0.7) ? random_constraint(true, 3, 0.6) : Constraint{},
                   l == goal ? std::vector<std::string>{"goal"} : std::vector<std::string>{});

    // A spanning path keeps most locations graph-reachable; extra edges add choice.
    const std::size_t extra = static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(locations) + 2));
    auto add_edge = [&](LocationId s, LocationId t) {
        std::optional<std::string> act;
        if (coin(0.5)) act = coin(0.5) ? "a" : "b";
        b.edge(s, t, iu ? Constraint{} : random_constraint(false, 5, 0.5), act, random_resets());
    };
    for (std::size_t l = 0; l + 1 < locations; ++l) add_edge(static_cast<LocationId>(l), static_cast<LocationId>(l + 1));
    for (std::size_t i = 0; i < extra; ++i)
        add_edge(static_cast<LocationId>(pick(0, static_cast<std::int64_t>(locations) - 1)),
                 static_cast<LocationId>(pick(0, static_cast<std::int64_t>(locations) - 1)));
    return std::move(b).build();
}

} // namespace ptai
