// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp> // vendored nlohmann::json

#include "ptai/decision.hpp"
#include "ptai/dsl.hpp"

namespace ptai {

inline constexpr std::string_view version = "0.1.0";

inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

using Json = nlohmann::ordered_json;

inline Json document(std::string_view command, const PtaModel& model) {
    Json doc;
    doc["tool"] = "ptai";
    doc["version"] = std::string(version);
    doc["command"] = std::string(command);
    doc["model_hash"] = fnv1a_hex(serialize(model));
    return doc;
}

inline Json run_json(const PtaModel& model, const Run& run) {
    Json steps = Json::array();
    for (const auto& st : run.steps)
        steps.push_back({{"delay", to_fraction_string(st.delay)}, {"edge", edge_name(model, st.edge)}});
    return steps;
}

inline Json region_json(const PtaModel& model, const SignRegion& s) {
    Json out = Json::array();
    for (ParamId p = 0; p < s.size; ++p)
        out.push_back({{"param", model.params[p]}, {"sign", s.sign(p) == Sign::Pos ? "pos" : "zero"}});
    return out;
}

inline Json valuation_json(const PtaModel& model, const ParamValuation& v) {
    Json out = Json::object();
    for (ParamId p = 0; p < v.size(); ++p) out[model.params[p]] = to_fraction_string(v[p]);
    return out;
}

inline Json synthesis_json(const PtaModel& model, const SynthesisResult& r, double elapsed_ms) {
    Json doc = document("ef-synth", model);
    doc["answer"] = render(r).text(model.params);
    Json regions = Json::array(), witnesses = Json::array();
    for (const auto& a : r.accepted) {
        regions.push_back(region_json(model, a.region));
        witnesses.push_back(run_json(model, a.witness));
    }
    doc["regions"] = regions;
    doc["witnesses"] = witnesses;
    doc["regions_checked"] = r.regions_checked;
    doc["notes"] = r.notes;
    doc["timing"] = {{"elapsed_ms", elapsed_ms}};
    return doc;
}

inline Json emptiness_json(const PtaModel& model, const EmptinessResult& r, double elapsed_ms) {
    Json doc = document("ef-empty", model);
    doc["answer"] = r.empty ? "empty" : "nonempty";
    doc["valuation"] = valuation_json(model, r.valuation);
    doc["witnesses"] = Json::array();
    if (r.witness) doc["witnesses"].push_back(run_json(model, *r.witness));
    doc["timing"] = {{"elapsed_ms", elapsed_ms}};
    return doc;
}

} // namespace ptai
