// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ptai;

namespace {

Inequality lt(ClockId x, std::vector<ParamId> ps, Rational d = 0) { return make_inequality(x, Relation::Lt, std::move(ps), d); }
Inequality le(ClockId x, std::vector<ParamId> ps, Rational d = 0) { return make_inequality(x, Relation::Le, std::move(ps), d); }

// init -> a -> goal, and init -> b -> goal, invariants given per middle location.
PtaModel diamond(std::size_t params, Constraint a, Constraint b) {
    ModelBuilder mb;
    mb.clock("x");
    for (std::size_t p = 0; p < params; ++p) mb.param("p" + std::to_string(p + 1));
    auto i = mb.location("init");
    auto la = mb.location("a", std::move(a));
    auto lb = mb.location("b", std::move(b));
    auto g = mb.location("goal", {}, {"goal"});
    mb.edge(i, la);
    mb.edge(i, lb);
    mb.edge(la, g);
    mb.edge(lb, g);
    return std::move(mb).build();
}

std::set<std::uint64_t> masks(const SynthesisResult& r) {
    std::set<std::uint64_t> out;
    for (const auto& a : r.accepted) out.insert(a.region.positive);
    return out;
}

Goal goal_label(const PtaModel& m) { return resolve_goal(m, Goal::Kind::Label, "goal"); }

} // namespace

TEST_CASE("passability at zero", "[decision]") {
    ParamValuation zero({0, 0});
    ParamValuation one({1, 0});
    CHECK(passable_at_zero({}, zero));
    CHECK(passable_at_zero({{le(0, {0})}}, zero));
    CHECK_FALSE(passable_at_zero({{lt(0, {0})}}, zero));
    CHECK(passable_at_zero({{lt(0, {0})}}, one));
    CHECK(passable_at_zero({{lt(0, {}, Rational(1, 2))}}, zero));
    CHECK_FALSE(passable_at_zero({{lt(0, {}, 0)}}, one));

    SignRegion none{0b00, 2}, first{0b01, 2}, second{0b10, 2};
    Constraint sum{{lt(0, {0, 1})}};
    CHECK_FALSE(passable_in_region(sum, none));
    CHECK(passable_in_region(sum, first));
    CHECK(passable_in_region(sum, second));
    CHECK_THROWS_AS(passable_in_region({{make_inequality(0, Relation::Ge, {0})}}, none), RejectedModel);
}

TEST_CASE("sign regions", "[decision]") {
    auto s = SignRegion::of(ParamValuation({0, Rational(1, 3), 7}));
    CHECK(s.positive == 0b110);
    CHECK(s.representative() == ParamValuation({0, 1, 1}));
    CHECK(region_less({0b00, 2}, {0b10, 2}));
    CHECK(region_less({0b10, 2}, {0b01, 2}));
    CHECK_FALSE(region_less({0b01, 2}, {0b01, 2}));
}

TEST_CASE("ef_emptiness examples", "[decision]") {
    SECTION("goal is initial") {
        ModelBuilder b;
        b.location("l0", {}, {"goal"});
        auto m = std::move(b).build();
        auto r = ef_emptiness(m, goal_label(m));
        CHECK_FALSE(r.empty);
        REQUIRE(r.witness);
        CHECK(r.witness->length() == 0);
    }
    SECTION("blocked by x < 0") {
        auto m = diamond(1, {{lt(0, {}, 0)}}, {{lt(0, {}, 0)}});
        CHECK(ef_emptiness(m, goal_label(m)).empty);
    }
    SECTION("open by x < p") {
        auto m = diamond(1, {{lt(0, {0})}}, {{lt(0, {}, 0)}});
        auto r = ef_emptiness(m, goal_label(m));
        CHECK_FALSE(r.empty);
        REQUIRE(r.witness);
        CHECK(validate_run(m, r.valuation, *r.witness));
        CHECK(total_time(*r.witness) == 0);
    }
    SECTION("no path") {
        ModelBuilder b;
        b.location("l0");
        b.location("l1", {}, {"goal"});
        auto m = std::move(b).build();
        CHECK(ef_emptiness(m, goal_label(m)).empty);
    }
    SECTION("streaming protocol") {
        auto m = parse_model(oracle::example("rtp.pta"));
        auto r = ef_emptiness(m, resolve_goal(m, Goal::Kind::Location, "askMore_notSending"));
        CHECK_FALSE(r.empty);
        CHECK(validate_run(m, r.valuation, *r.witness));
    }
    SECTION("bounds force a parameter to zero") {
        auto m = diamond(1, {{lt(0, {0})}}, {{lt(0, {0})}});
        m.param_bounds = std::vector<ParamInterval>{{0, 0}};
        CHECK(ef_emptiness(m, goal_label(m)).empty);
        m.param_bounds = std::vector<ParamInterval>{{3, 8}};
        auto r = ef_emptiness(m, goal_label(m));
        CHECK_FALSE(r.empty);
        CHECK(r.valuation[0] == 3);
    }
    SECTION("rejects guards") {
        auto m = parse_model(oracle::example("fig1.pta"));
        CHECK_THROWS_AS(ef_emptiness(m, Goal::location(1)), RejectedModel);
    }
}

TEST_CASE("ef_synthesis examples", "[decision]") {
    SECTION("streaming protocol") {
        auto m = parse_model(oracle::example("rtp.pta"));
        auto r = ef_synthesis(m, resolve_goal(m, Goal::Kind::Location, "askMore_notSending"));
        CHECK(r.regions_checked == 16);
        CHECK(r.accepted.size() == 4);
        auto rc = render(r);
        CHECK(rc.product);
        CHECK(rc.text(m.params) == "p_s >= 0 & p_v >= 0 & p_send > 0 & p_rced > 0");
    }
    SECTION("either parameter") {
        // a needs p1 > 0, b needs p2 > 0.
        auto m = diamond(2, {{lt(0, {0})}}, {{lt(0, {1})}});
        auto r = ef_synthesis(m, goal_label(m));
        CHECK(masks(r) == std::set<std::uint64_t>{0b01, 0b10, 0b11});
        auto rc = render(r);
        CHECK_FALSE(rc.product);
        CHECK(rc.text(m.params) == "(p1 = 0 & p2 > 0) | (p1 > 0 & p2 = 0) | (p1 > 0 & p2 > 0)");
    }
    SECTION("false") {
        auto m = diamond(2, {{lt(0, {}, 0)}}, {{lt(0, {}, 0)}});
        auto r = ef_synthesis(m, goal_label(m));
        CHECK(r.accepted.empty());
        CHECK(render(r).text(m.params) == "false");
        CHECK_FALSE(membership(r, ParamValuation({1, 1})));
    }
    SECTION("no parameters") {
        auto m = diamond(0, {}, {});
        auto r = ef_synthesis(m, goal_label(m));
        CHECK(r.regions_checked == 1);
        CHECK(render(r).text(m.params) == "true");
    }
    SECTION("product with an unconstrained parameter") {
        auto m = diamond(2, {{lt(0, {0})}}, {{lt(0, {0})}});
        auto rc = render(ef_synthesis(m, goal_label(m)));
        CHECK(rc.product);
        CHECK(rc.text(m.params) == "p1 > 0 & p2 >= 0");
    }
}

TEST_CASE("parameter cap and bounded regions", "[decision]") {
    ModelBuilder b;
    b.clock("x");
    for (int p = 0; p < 21; ++p) b.param("p" + std::to_string(p));
    b.location("l0", {}, {"goal"});
    auto big = std::move(b).build();
    CHECK_THROWS_AS(ef_synthesis(big, goal_label(big)), RejectedModel);
    SynthesisOptions opts;
    opts.max_params = 3;
    auto m = diamond(4, {}, {});
    CHECK_THROWS_AS(ef_synthesis(m, goal_label(m), opts), RejectedModel);

    auto bounded = diamond(2, {{lt(0, {0})}}, {{lt(0, {1})}});
    bounded.param_bounds = std::vector<ParamInterval>{{1, 4}, {0, 4}};
    auto r = ef_synthesis(bounded, goal_label(bounded));
    CHECK(r.regions_checked == 4);
    CHECK(r.notes.size() == 2);
    CHECK(masks(r) == std::set<std::uint64_t>{0b01, 0b11});
    CHECK(render(r).text(bounded.params) == "p1 > 0 & p2 >= 0");
}

TEST_CASE("synthesis agrees with the zone oracle on random models", "[decision][property]") {
    std::mt19937_64 rng(31);
    int nonempty = 0, nontrivial = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto m = random_model(RandomProfile::PtaIu, seed);
        auto g = goal_label(m);
        auto r = ef_synthesis(m, g);
        auto expected = oracle::regions_by_oracle(m, g);
        CAPTURE(seed);
        CHECK(masks(r) == expected);
        CHECK(ef_emptiness(m, g).empty == expected.empty());
        nonempty += !expected.empty();
        nontrivial += !expected.empty() && expected.size() < (std::size_t{1} << m.params.size());

        // Every witness is a valid 0-delay run under the region representative.
        for (const auto& a : r.accepted) {
            auto v = a.region.representative();
            CHECK(validate_run(m, v, a.witness));
            CHECK(total_time(a.witness) == 0);
            CHECK(g.matches(m, a.witness.final_state().location));
        }

        // Uniformity inside regions, and the rendered constraint is the answer.
        auto rc = render(r);
        for (int i = 0; i < 4; ++i) {
            std::vector<Rational> vals;
            for (std::size_t p = 0; p < m.params.size(); ++p)
                vals.push_back(std::uniform_int_distribution<int>(0, 2)(rng) == 0
                                   ? Rational(0)
                                   : Rational(std::uniform_int_distribution<int>(1, 40)(rng),
                                              std::uniform_int_distribution<int>(1, 7)(rng)));
            ParamValuation v(vals);
            CHECK(reachable_under(m, v, g) == membership(r, v));
            CHECK(rc.contains(v) == membership(r, v));
        }
    }
    CHECK(nonempty > 50);
    CHECK(nontrivial > 10);
}

TEST_CASE("render round trip", "[decision][property]") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        SynthesisResult r;
        r.param_count = n;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
            if (rng() & 1) r.accepted.push_back({SignRegion{mask, n}, Run{}});
        std::sort(r.accepted.begin(), r.accepted.end(),
                  [](const AcceptedRegion& a, const AcceptedRegion& b) { return region_less(a.region, b.region); });
        auto rc = render(r);
        for (int i = 0; i < 5; ++i) {
            std::vector<Rational> vals;
            for (std::size_t p = 0; p < n; ++p) vals.push_back(rng() % 3 == 0 ? Rational(0) : Rational(rng() % 9 + 1, 2));
            ParamValuation v(vals);
            CHECK(rc.contains(v) == membership(r, v));
        }
    }
}

TEST_CASE("parallel synthesis matches serial", "[decision]") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto m = random_model(RandomProfile::PtaIu, seed);
        auto g = goal_label(m);
        SynthesisOptions par;
        par.parallel = true;
        auto a = ef_synthesis(m, g);
        auto b = ef_synthesis(m, g, par);
        CHECK(masks(a) == masks(b));
        CHECK(a.regions_checked == b.regions_checked);
        CHECK(render(a).text(m.params) == render(b).text(m.params));
    }
}
