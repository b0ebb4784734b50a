#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "conjecture.hpp"
#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "positroid.hpp"
#include "set_system.hpp"
#include "wilson_loop.hpp"

namespace shapeloci {

using nlohmann::json;

// All wire formats are 1-indexed: ground elements, set indices, propagator endpoints.

inline json json_of(GroundSubset s) { return json(s.elements()); }

inline GroundSubset ground_subset_of(const json& j) {
    if (!j.is_array()) throw domain_error("expected an array of elements");
    std::vector<int> elems;
    int prev = 0;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw domain_error("elements must be integers");
        const int v = e.get<int>();
        if (v <= prev) throw domain_error("elements must be strictly increasing");
        prev = v;
        elems.push_back(v);
    }
    return GroundSubset::from_elements(elems);
}

inline json json_of(const SetSystem& s) {
    json sets = json::array();
    for (GroundSubset x : s.sets()) sets.push_back(json_of(x));
    return json{{"n", s.n()}, {"sets", sets}};
}

inline SetSystem set_system_of(const json& j) {
    if (!j.contains("n") || !j.contains("sets"))
        throw domain_error("set system needs fields \"n\" and \"sets\"");
    std::vector<GroundSubset> sets;
    for (const auto& s : j.at("sets")) sets.push_back(ground_subset_of(s));
    return SetSystem(j.at("n").get<int>(), std::move(sets));
}

inline json json_of(const Matroid& m) {
    json bases = json::array();
    for (GroundSubset b : m.bases()) bases.push_back(json_of(b));
    return json{{"n", m.n()}, {"k", m.k()}, {"bases", bases}};
}

inline Matroid matroid_of(const json& j) {
    if (!j.contains("n") || !j.contains("k") || !j.contains("bases"))
        throw domain_error("matroid needs fields \"n\", \"k\", and \"bases\"");
    std::vector<GroundSubset> bases;
    for (const auto& b : j.at("bases")) bases.push_back(ground_subset_of(b));
    return Matroid(j.at("n").get<int>(), j.at("k").get<int>(), std::move(bases));
}

inline json json_of(const IntervalRankMatrix& r) { return json{{"n", r.n()}, {"rows", r.rows()}}; }

inline IntervalRankMatrix interval_rank_matrix_of(const json& j) {
    if (!j.contains("n") || !j.contains("rows"))
        throw domain_error("interval rank matrix needs fields \"n\" and \"rows\"");
    return IntervalRankMatrix(j.at("n").get<int>(),
                              j.at("rows").get<std::vector<std::vector<int>>>());
}

inline json json_of(const WilsonLoopDiagram& w) {
    json props = json::array();
    for (Propagator p : w.propagators()) props.push_back(json::array({p.first, p.second}));
    return json{{"n", w.n()}, {"propagators", props}};
}

inline WilsonLoopDiagram wld_of(const json& j) {
    if (!j.contains("n") || !j.contains("propagators"))
        throw domain_error("Wilson loop diagram needs fields \"n\" and \"propagators\"");
    std::vector<Propagator> props;
    for (const auto& p : j.at("propagators")) {
        if (!p.is_array() || p.size() != 2)
            throw domain_error("each propagator must be a pair of vertices");
        props.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    return WilsonLoopDiagram(j.at("n").get<int>(), std::move(props));
}

/// Witness with 1-based set indices on the wire.
inline json json_of(const CrossingWitness& w) {
    return json{{"i", w.i + 1}, {"j", w.j + 1}, {"a", w.a}, {"b", w.b}, {"c", w.c}, {"d", w.d}};
}

inline json json_of(const ConjectureRecord& r) {
    json out{{"system", json_of(r.system)}, {"positroid", r.positroid}};
    if (r.noncrossing_a)
        out["noncrossing_a"] = *r.noncrossing_a;
    else
        out["noncrossing_a"] = nullptr;
    return out;
}

} // namespace shapeloci
