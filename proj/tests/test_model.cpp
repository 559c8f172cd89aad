// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ptai;

namespace {

PtaModel one_edge(Constraint target_inv, std::vector<std::string> params = {"p"}) {
    ModelBuilder b;
    b.clock("x");
    for (const auto& p : params) b.param(p);
    auto l0 = b.location("l0");
    auto l1 = b.location("l1", std::move(target_inv), {"goal"});
    b.edge(l0, l1);
    return std::move(b).build();
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
    for (const auto& m : msgs)
        if (m.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("mixed rational and integer equality terminates", "[model]") {
    Rational half(1, 2);
    CHECK(Rational(0) == 0);
    CHECK(0 == Rational(0));
    CHECK(half != 0);
    CHECK(std::int64_t{3} == Rational(6, 2));
    CHECK_FALSE(half == 1);
}

TEST_CASE("parse_rational", "[model]") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK_FALSE(parse_rational("1/0"));
    CHECK_FALSE(parse_rational(""));
    CHECK_FALSE(parse_rational("x"));
    CHECK(to_string(Rational(3, 4)) == "3/4");
    CHECK(to_fraction_string(Rational(2)) == "2/1");
}

TEST_CASE("classify examples", "[model][classify]") {
    SECTION("single location, no edges") {
        ModelBuilder b;
        b.location("only");
        auto r = classify(std::move(b).build());
        CHECK(r.is_pta_i);
        CHECK(r.is_pta_iu);
        CHECK_FALSE(r.is_bounded);
    }
    SECTION("guarded edge without invariants") {
        auto r = classify(parse_model(oracle::example("fig1.pta")));
        CHECK_FALSE(r.is_pta_i);
        CHECK_FALSE(r.is_pta_iu);
        CHECK(mentions(r.violations, "guard"));
    }
    SECTION("streaming protocol model") {
        auto m = parse_model(oracle::example("rtp.pta"));
        auto v = validate_model(m);
        REQUIRE(v.ok());
        CHECK(v.report.is_pta_iu);
    }
    SECTION("lower-bound invariant") {
        auto r = classify(one_edge({{make_inequality(0, Relation::Ge, {0})}}));
        CHECK(r.is_pta_i);
        CHECK_FALSE(r.is_pta_iu);
        CHECK(mentions(r.violations, "upper bound"));
    }
    SECTION("negative constant") {
        auto r = classify(one_edge({{make_inequality(0, Relation::Lt, {0}, -2)}}));
        CHECK(r.is_pta_i);
        CHECK_FALSE(r.is_pta_iu);
        CHECK_FALSE(r.has_nonnegative_constants);
        CHECK(mentions(r.violations, "negative constant"));
    }
    SECTION("x <= p + 1 and x < p") {
        auto r = classify(one_edge({{make_inequality(0, Relation::Le, {0}, 1), make_inequality(0, Relation::Lt, {0})}}));
        CHECK(r.is_pta_iu);
        CHECK(r.violations.empty());
    }
}

TEST_CASE("negative constants break sign-region uniformity", "[model][classify][zone]") {
    // x < p - 2: unreachable under v1 (x < -1) but reachable under p = 5.
    auto m = one_edge({{make_inequality(0, Relation::Lt, {0}, -2)}});
    Goal g = Goal::location(1);
    CHECK_FALSE(reachable_under(m, ParamValuation({1}), g));
    CHECK(reachable_under(m, ParamValuation({5}), g));
    CHECK_THROWS_AS(ef_emptiness(m, g), RejectedModel);
}

TEST_CASE("classify properties on random models", "[model][classify][property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        for (auto profile : {RandomProfile::InvariantFreePta, RandomProfile::PtaIu}) {
            auto m = random_model(profile, seed);
            auto r = classify(m);
            CAPTURE(seed);
            if (r.is_pta_iu) {
                CHECK(r.is_pta_i);
                CHECK(r.has_nonnegative_constants);
                for (const auto& e : m.edges) CHECK(e.guard.is_true());
            }
            if (profile == RandomProfile::PtaIu) CHECK(r.is_pta_iu);
            auto again = classify(m);
            CHECK(again.violations == r.violations);
            CHECK(again.is_pta_iu == r.is_pta_iu);
        }
    }
}

TEST_CASE("validate_model reports structural errors", "[model]") {
    ModelBuilder b;
    b.location("a");
    b.location("a");
    auto m = std::move(b).build();
    m.clocks = {"x", "x"}; // the builder interns names, so duplicates are injected directly
    m.edges.push_back(Edge{0, 7, {}, std::nullopt, {}});
    m.edges.push_back(Edge{0, 1, {{make_inequality(3, Relation::Le, {})}}, std::nullopt, {}});
    auto v = validate_model(m);
    CHECK_FALSE(v.ok());
    CHECK(mentions(v.errors, "duplicate clock 'x'"));
    CHECK(mentions(v.errors, "duplicate location 'a'"));
    CHECK(mentions(v.errors, "target location does not exist"));
    CHECK_THROWS_AS(require_valid(m), ModelError);

    PtaModel bad_init;
    bad_init.locations.push_back(Location{"l", {}, {}});
    bad_init.initial = 3;
    CHECK_FALSE(validate_model(bad_init).ok());

    PtaModel bounds = one_edge({});
    bounds.param_bounds = std::vector<ParamInterval>{{2, 1}};
    CHECK_FALSE(validate_model(bounds).ok());
}

TEST_CASE("check_valuation", "[model]") {
    auto m = one_edge({}, {"p", "q"});
    CHECK_NOTHROW(check_valuation(m, ParamValuation({0, Rational(1, 2)})));
    CHECK_THROWS_AS(check_valuation(m, ParamValuation({1})), ValuationError);
    CHECK_THROWS_AS(check_valuation(m, ParamValuation({1, -1})), ValuationError);
    m.param_bounds = std::vector<ParamInterval>{{0, 1}, {0, 1}};
    CHECK_THROWS_AS(check_valuation(m, ParamValuation({2, 0})), ValuationError);
}

TEST_CASE("substitute examples", "[model][valuation]") {
    SECTION("x < p with p = 1") {
        auto s = substitute(one_edge({{make_inequality(0, Relation::Lt, {0})}}), ParamValuation({1}));
        const auto& q = s.locations[1].invariant.inequalities.at(0);
        CHECK(q.bound.params.empty());
        CHECK(q.bound.constant == 1);
        CHECK(q.rel == Relation::Lt);
        CHECK(s.params.empty());
    }
    SECTION("x <= p1 + p2 + 3 with halves") {
        auto m = one_edge({{make_inequality(0, Relation::Le, {0, 1}, 3)}}, {"p1", "p2"});
        auto s = substitute(m, ParamValuation({Rational(1, 2), Rational(1, 2)}));
        CHECK(s.locations[1].invariant.inequalities.at(0).bound.constant == 4);
    }
    SECTION("empty constraint stays empty") {
        auto s = substitute(one_edge({}), ParamValuation({7}));
        CHECK(s.locations[1].invariant.is_true());
    }
    SECTION("missing parameter") {
        CHECK_THROWS_AS(substitute(one_edge({}, {"p", "q"}), ParamValuation({1})), ValuationError);
    }
}

TEST_CASE("substitute agrees with direct evaluation", "[model][valuation][property]") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto m = random_model(RandomProfile::PtaIu, seed);
        std::vector<Rational> vals;
        for (std::size_t p = 0; p < m.params.size(); ++p)
            vals.emplace_back(std::uniform_int_distribution<int>(0, 20)(rng), std::uniform_int_distribution<int>(1, 6)(rng));
        ParamValuation v(vals);
        auto s = substitute(m, v);
        for (LocationId l = 0; l < m.locations.size(); ++l) {
            const auto& orig = m.locations[l].invariant.inequalities;
            const auto& sub = s.locations[l].invariant.inequalities;
            REQUIRE(orig.size() == sub.size());
            for (std::size_t i = 0; i < orig.size(); ++i) {
                Rational direct = orig[i].bound.constant;
                for (ParamId p : orig[i].bound.params) direct += vals[p];
                CHECK(sub[i].bound.constant == direct);
                CHECK(sub[i].bound.params.empty());
            }
        }
    }
}

TEST_CASE("rescale examples", "[model][valuation]") {
    auto two = [](Rational a, Rational b) {
        ModelBuilder mb;
        mb.clock("x");
        auto l0 = mb.location("l0", {{make_inequality(0, Relation::Le, {}, a)}});
        auto l1 = mb.location("l1", {{make_inequality(0, Relation::Le, {}, b)}});
        mb.edge(l0, l1);
        return std::move(mb).build();
    };
    auto constants = [](const PtaModel& m) {
        return std::pair{m.locations[0].invariant.inequalities[0].bound.constant,
                         m.locations[1].invariant.inequalities[0].bound.constant};
    };
    auto r = rescale(two(Rational(1, 2), Rational(3, 4)));
    CHECK(r.scale == 4);
    CHECK(constants(r.model) == std::pair{Rational(2), Rational(3)});

    auto id = two(2, 5);
    auto r1 = rescale(id);
    CHECK(r1.scale == 1);
    CHECK(r1.model == id);

    auto r6 = rescale(two(Rational(1, 3), Rational(1, 2)));
    CHECK(r6.scale == 6);
    CHECK(constants(r6.model) == std::pair{Rational(2), Rational(3)});

    CHECK_THROWS_AS(rescale(one_edge({})), ModelError);
}

TEST_CASE("rescale preserves reachability", "[model][valuation][zone][property]") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        auto m = random_model(RandomProfile::PtaIu, seed);
        std::vector<Rational> vals;
        for (std::size_t p = 0; p < m.params.size(); ++p)
            vals.emplace_back(std::uniform_int_distribution<int>(0, 9)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
        auto s = substitute(m, ParamValuation(vals));
        auto r = rescale(s);
        // Reachability of the rescaled model, compared with a second
        // rescaling by an extra factor: both are integer models of the same
        // automaton up to time scaling.
        auto doubled = r.model;
        detail::for_each_bound(doubled, [](LinearBound& b) { b.constant *= 3; });
        auto a = explore_zones(r.model).locations;
        auto b = explore_zones(doubled).locations;
        CAPTURE(seed);
        CHECK(a == b);
    }
}

TEST_CASE("formatting", "[model]") {
    ModelBuilder b;
    b.clock("x");
    b.param("p");
    b.param("q");
    PtaModel m = b.peek();
    CHECK(format_bound(m, {{0, 1}, 1}) == "p + q + 1");
    CHECK(format_bound(m, {{0}, -2}) == "p - 2");
    CHECK(format_bound(m, {{}, 0}) == "0");
    CHECK(format_bound(m, {{}, Rational(3, 4)}) == "3/4");
    CHECK(format_constraint(m, {}) == "{}");
    CHECK(format_constraint(m, {{make_inequality(0, Relation::Lt, {0}), make_inequality(0, Relation::Le, {}, 1)}}) ==
          "{ x < p, x <= 1 }");
}
