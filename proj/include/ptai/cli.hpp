// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line front end. Exit codes: 0 answered (reachable / nonempty /
// found), 1 negative answer (empty / unreachable / not found / blocked),
// 2 usage, parse or model error, 3 model outside the accepted class.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptai/classify.hpp"
#include "ptai/decision.hpp"
#include "ptai/dsl.hpp"
#include "ptai/gadgets.hpp"
#include "ptai/machine_format.hpp"
#include "ptai/random_model.hpp"
#include "ptai/result.hpp"
#include "ptai/transform.hpp"
#include "ptai/zone.hpp"

namespace ptai {

namespace detail {

inline std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

// "p=1/2,q=1" -> total valuation over the model parameters.
inline ParamValuation parse_valuation(const PtaModel& model, const std::string& text) {
    std::vector<std::optional<Rational>> values(model.params.size());
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ValuationError("expected name=value, found '" + item + "'");
        auto p = model.find_param(item.substr(0, eq));
        if (!p) throw ValuationError("unknown parameter '" + item.substr(0, eq) + "'");
        auto v = parse_rational(item.substr(eq + 1));
        if (!v) throw ValuationError("bad value '" + item.substr(eq + 1) + "'");
        values[*p] = *v;
    }
    std::vector<Rational> out;
    for (ParamId p = 0; p < values.size(); ++p) {
        if (!values[p]) throw ValuationError("no value for parameter " + model.params[p]);
        out.push_back(*values[p]);
    }
    ParamValuation v(std::move(out));
    check_valuation(model, v);
    return v;
}

struct GoalOptions {
    std::string location, label;

    void attach(CLI::App* cmd) {
        auto* l = cmd->add_option("--goal", location, "target location");
        auto* b = cmd->add_option("--label", label, "target label");
        l->excludes(b);
        b->excludes(l);
    }

    [[nodiscard]] Goal resolve(const PtaModel& model) const {
        if (!location.empty()) return resolve_goal(model, Goal::Kind::Location, location);
        if (!label.empty()) return resolve_goal(model, Goal::Kind::Label, label);
        throw ModelError("a goal is required: --goal NAME or --label LABEL");
    }
};

inline void print_run(std::ostream& out, const PtaModel& model, const Run& run) {
    for (const auto& st : run.steps) out << "  " << to_string(st.delay) << " " << edge_name(model, st.edge) << "\n";
}

inline void print_state(std::ostream& out, const PtaModel& model, const ConcreteState& s) {
    out << model.locations[s.location].name << " (";
    for (ClockId c = 0; c < s.clocks.size(); ++c) out << (c ? ", " : "") << model.clocks[c] << "=" << to_string(s.clocks[c]);
    out << ")";
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ptai: parametric timed automata with invariants"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    std::string input, format = "text";
    detail::GoalOptions goal;
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "structured"}));
    };

    auto* classify_cmd = app.add_subcommand("classify", "report class membership");
    classify_cmd->add_option("model", input, "model file or -")->required();

    auto* transform_cmd = app.add_subcommand("transform", "move guards into invariants");
    transform_cmd->add_option("model", input, "model file or -")->required();

    auto* empty_cmd = app.add_subcommand("ef-empty", "decide whether some valuation reaches the goal");
    empty_cmd->add_option("model", input, "model file or -")->required();
    goal.attach(empty_cmd);
    add_format(empty_cmd);

    SynthesisOptions synth_opts;
    auto* synth_cmd = app.add_subcommand("ef-synth", "valuations reaching the goal");
    synth_cmd->add_option("model", input, "model file or -")->required();
    goal.attach(synth_cmd);
    add_format(synth_cmd);
    synth_cmd->add_option("--max-params", synth_opts.max_params, "refuse models with more parameters")->capture_default_str();
    synth_cmd->add_flag("--parallel", synth_opts.parallel, "check regions on all cores");

    std::string valuation;
    std::size_t budget = 100000;
    std::uint64_t seed = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "randomized concrete search for a run");
    sim_cmd->add_option("model", input, "model file or -")->required();
    sim_cmd->add_option("--valuation", valuation, "p=1/2,q=1");
    goal.attach(sim_cmd);
    sim_cmd->add_option("--budget", budget, "expansion budget")->capture_default_str();
    sim_cmd->add_option("--seed", seed, "random seed")->capture_default_str();

    auto* oracle_cmd = app.add_subcommand("oracle-reach", "zone-graph reachability under one valuation");
    oracle_cmd->add_option("model", input, "model file or -")->required();
    oracle_cmd->add_option("--valuation", valuation, "p=1/2,q=1");
    goal.attach(oracle_cmd);

    auto* encode_cmd = app.add_subcommand("encode-2cm", "encode a two-counter machine");
    encode_cmd->add_option("machine", input, "machine file or -")->required();

    std::string a_value = "1/8";
    std::size_t steps = 10;
    auto* faithful_cmd = app.add_subcommand("faithful-run", "simulate the encoding of a machine");
    faithful_cmd->add_option("machine", input, "machine file or -")->required();
    faithful_cmd->add_option("--a", a_value, "value of a in (0,1)")->capture_default_str();
    faithful_cmd->add_option("--steps", steps, "machine steps")->capture_default_str();

    std::string profile = "pta-iu";
    std::size_t size = 0;
    auto* random_cmd = app.add_subcommand("random-model", "generate a random model");
    random_cmd->add_option("--profile", profile, "invariant-free-pta, pta-iu or chain")
        ->check(CLI::IsMember({"invariant-free-pta", "pta-iu", "chain"}))
        ->capture_default_str();
    random_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    random_cmd->add_option("--size", size, "chain length");

    std::vector<const char*> argv{"ptai"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    using clock = std::chrono::steady_clock;
    auto elapsed_ms = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    try {
        if (*random_cmd) {
            RandomProfile p = profile == "chain" ? RandomProfile::Chain
                              : profile == "pta-iu" ? RandomProfile::PtaIu
                                                    : RandomProfile::InvariantFreePta;
            out << serialize(random_model(p, seed, size));
            return 0;
        }
        if (*encode_cmd) {
            out << serialize(encode(parse_machine(detail::read_input(input))).model);
            return 0;
        }
        if (*faithful_cmd) {
            auto m = parse_machine(detail::read_input(input));
            auto a = parse_rational(a_value);
            if (!a) throw ValuationError("bad value for --a: '" + a_value + "'");
            auto g = encode(m);
            try {
                auto fr = faithful_run(g, m, *a, steps);
                for (const auto& visit : fr.anchors) {
                    out << m.states[visit.config.state] << " c1=" << visit.config.c1 << " c2=" << visit.config.c2 << "  ";
                    detail::print_state(out, g.model, fr.run.state_at(visit.run_index));
                    out << "\n";
                }
                return 0;
            } catch (const GadgetRunError& e) {
                out << "blocked at " << e.what() << "\n";
                return 1;
            }
        }

        const PtaModel model = parse_model(detail::read_input(input));

        if (*classify_cmd) {
            auto v = validate_model(model);
            const auto& r = v.report;
            auto yn = [](bool b) { return b ? "yes" : "no"; };
            out << "pta-i: " << yn(r.is_pta_i) << "\n"
                << "pta-iu: " << yn(r.is_pta_iu) << "\n"
                << "bounded: " << yn(r.is_bounded) << "\n"
                << "nonnegative-constants: " << yn(r.has_nonnegative_constants) << "\n";
            for (const auto& why : r.violations) out << "  " << why << "\n";
            return 0;
        }
        if (*transform_cmd) {
            out << serialize(guards_to_invariants(model).result);
            return 0;
        }
        if (*empty_cmd) {
            auto t0 = clock::now();
            auto r = ef_emptiness(model, goal.resolve(model));
            if (format == "structured") {
                out << emptiness_json(model, r, elapsed_ms(t0)).dump(2) << "\n";
            } else {
                out << (r.empty ? "empty" : "nonempty") << "\n";
                if (r.witness) detail::print_run(out, model, *r.witness);
            }
            return r.empty ? 1 : 0;
        }
        if (*synth_cmd) {
            auto t0 = clock::now();
            auto r = ef_synthesis(model, goal.resolve(model), synth_opts);
            if (format == "structured") out << synthesis_json(model, r, elapsed_ms(t0)).dump(2) << "\n";
            else out << render(r).text(model.params) << "\n";
            return 0;
        }
        if (*sim_cmd || *oracle_cmd) {
            ParamValuation v = detail::parse_valuation(model, valuation);
            Goal g = goal.resolve(model);
            if (*oracle_cmd) {
                bool reach = reachable_under(model, v, g);
                out << (reach ? "reachable" : "unreachable") << "\n";
                return reach ? 0 : 1;
            }
            auto run = random_explore(model, v, g, budget, seed);
            if (!run) {
                out << "not found\n";
                return 1;
            }
            out << "found\n";
            detail::print_run(out, model, *run);
            out << "final ";
            detail::print_state(out, model, run->final_state());
            out << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        err << input << ":" << e.what() << "\n";
        return 2;
    } catch (const RejectedModel& e) {
        err << "rejected: " << e.what() << "\n";
        for (const auto& why : e.reasons()) err << "  " << why << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace ptai
