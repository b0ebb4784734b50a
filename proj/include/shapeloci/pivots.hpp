#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "positroid.hpp"
#include "set_system.hpp"

namespace shapeloci {

/// A subsystem attaining equality in the minimality inequality:
/// |union| = |indices| + max set size - 1. Indices are 0-based and ascending.
struct ExactSubsystem {
    std::vector<int> indices;
    GroundSubset support;

    bool operator==(const ExactSubsystem&) const = default;
};

inline bool is_exact_subsystem(const SetSystem& sys, const std::vector<int>& indices) {
    if (indices.empty()) return false;
    int max_size = 0;
    for (int i : indices) max_size = std::max(max_size, sys.set(i).size());
    return union_of(sys, indices).size() == static_cast<int>(indices.size()) + max_size - 1;
}

namespace detail {

inline std::vector<int> indices_of_mask(std::uint32_t mask) {
    std::vector<int> out;
    for (std::uint32_t r = mask; r != 0; r &= r - 1) out.push_back(std::countr_zero(r));
    return out;
}

inline void require_minimal(const SetSystem& sys, const char* who) {
    if (!satisfies_minimality_inequalities(sys))
        throw domain_error(std::string(who) + ": presentation is not minimal");
}

} // namespace detail

/// All exact subsystems, by increasing size then lexicographic index order. With
/// `containing`, only those holding that index as a maximal-size member.
inline std::vector<ExactSubsystem> exact_subsystems(const SetSystem& sys,
                                                    std::optional<int> containing = std::nullopt) {
    detail::require_minimal(sys, "exact_subsystems");
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (1u << sys.k()); ++mask) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<ExactSubsystem> out;
    for (std::uint32_t mask : masks) {
        const auto indices = detail::indices_of_mask(mask);
        if (containing) {
            if (!(mask & (1u << *containing))) continue;
            int max_size = 0;
            for (int i : indices) max_size = std::max(max_size, sys.set(i).size());
            if (sys.set(*containing).size() != max_size) continue;
        }
        if (is_exact_subsystem(sys, indices)) out.push_back({indices, union_of(sys, indices)});
    }
    return out;
}

/// One pivot move: replace the set at `set_index` by (set \ remove) + add, using the
/// exact subsystem `via`. remove == add is the identity pivot.
struct Pivot {
    int set_index = 0;
    int remove = 0;
    int add = 0;
    ExactSubsystem via;
};

/// Applies a pivot after validating it: `via` must be exact, the pivoted set maximal in
/// it, remove/add shared with a single member of `via`, and the result must satisfy the
/// minimality inequalities. The transversal matroid is checked unchanged afterwards;
/// a change raises anomaly_error, since it would contradict the pivot identity.
inline SetSystem apply_pivot(const SetSystem& sys, const Pivot& p) {
    detail::require_minimal(sys, "apply_pivot");
    if (p.set_index < 0 || p.set_index >= sys.k()) throw domain_error("apply_pivot: bad set index");
    if (!is_exact_subsystem(sys, p.via.indices))
        throw domain_error("apply_pivot: via is not an exact subsystem");
    if (union_of(sys, p.via.indices) != p.via.support)
        throw domain_error("apply_pivot: via.support does not match the union");
    if (std::find(p.via.indices.begin(), p.via.indices.end(), p.set_index) == p.via.indices.end())
        throw domain_error("apply_pivot: pivoted set not in the exact subsystem");
    const GroundSubset s = sys.set(p.set_index);
    for (int i : p.via.indices)
        if (sys.set(i).size() > s.size())
            throw domain_error("apply_pivot: pivoted set is not of maximal size in via");
    if (!s.contains(p.remove)) throw domain_error("apply_pivot: removed element not in the set");
    if (p.remove == p.add) return sys;
    if (s.contains(p.add)) throw domain_error("apply_pivot: added element already in the set");
    bool witnessed = false;
    for (int i : p.via.indices) {
        if (i == p.set_index) continue;
        const GroundSubset t = sys.set(i);
        if (t.contains(p.remove) && t.contains(p.add)) witnessed = true;
    }
    if (!witnessed)
        throw domain_error("apply_pivot: no member of via contains both endpoints");

    const SetSystem result = sys.with_set_replaced(p.set_index, s.without(p.remove).with(p.add));
    if (!satisfies_minimality_inequalities(result))
        throw domain_error("apply_pivot: result violates the minimality inequalities");
    if (transversal_matroid(result) != transversal_matroid(sys))
        throw anomaly_error("apply_pivot: matroid changed under a valid pivot");
    return result;
}

/// For an exact system with a maximal-size set S: the replacements S' preserving the
/// matroid, computed two ways and cross-checked:
///   (a) directly, by matroid-equality filtering over |S|-subsets of the support;
///   (b) as the bases of the dual of the remaining sets' transversal matroid on the
///       support.
inline std::vector<GroundSubset> pivot_targets(const SetSystem& sys, int set_index) {
    detail::require_minimal(sys, "pivot_targets");
    std::vector<int> everything = all_rows(sys);
    if (!is_exact_subsystem(sys, everything))
        throw domain_error("pivot_targets: the system itself is not exact");
    if (set_index < 0 || set_index >= sys.k()) throw domain_error("pivot_targets: bad set index");
    const GroundSubset s = sys.set(set_index);
    for (GroundSubset t : sys.sets())
        if (t.size() > s.size())
            throw domain_error("pivot_targets: the chosen set is not of maximal size");

    const GroundSubset support = sys.support();
    const Matroid whole = transversal_matroid(sys);

    std::vector<GroundSubset> direct;
    for_each_k_subset(sys.n(), s.size(), [&](GroundSubset cand) {
        if (!cand.subset_of(support)) return;
        try {
            if (transversal_matroid(sys.with_set_replaced(set_index, cand)) == whole)
                direct.push_back(cand);
        } catch (const rank_deficient_error&) {
        }
    });

    // Route (b): relabel the support, drop the pivoted set, dualize.
    const std::vector<int> embedding = support.elements();
    std::vector<GroundSubset> rest;
    for (int i = 0; i < sys.k(); ++i) {
        if (i == set_index) continue;
        GroundSubset relabeled{};
        for (std::size_t pos = 0; pos < embedding.size(); ++pos)
            if (sys.set(i).contains(embedding[pos])) relabeled = relabeled.with(static_cast<int>(pos) + 1);
        rest.push_back(relabeled);
    }
    const Matroid dual_rest = dual(transversal_matroid(SetSystem(support.size(), rest)));
    std::vector<GroundSubset> via_dual;
    for (GroundSubset b : dual_rest.bases()) {
        GroundSubset parent{};
        for (int e : b.elements()) parent = parent.with(embedding[static_cast<std::size_t>(e) - 1]);
        via_dual.push_back(parent);
    }
    std::sort(via_dual.begin(), via_dual.end());

    if (direct != via_dual)
        throw anomaly_error("pivot_targets: direct filtering and the dual route disagree");
    return direct;
}

/// Produces an a-Gale minimal presentation: process sets in weakly increasing size
/// order; for each, take the union of all exact subsystems holding it as a
/// maximal-size member (exact again, by the union property), and replace the set by
/// the greedy <_a-least basis of the dual of the rest of that subsystem on its
/// support. The matroid is preserved at every step.
inline SetSystem gale_minimal(const SetSystem& sys, int a) {
    detail::require_minimal(sys, "gale_minimal");
    if (a < 1 || a > sys.n()) throw domain_error("gale_minimal: rotation start outside [1,n]");
    const Matroid target = transversal_matroid(sys);

    std::vector<int> order = all_rows(sys);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return sys.set(x).size() < sys.set(y).size();
    });

    SetSystem current = sys;
    for (int i : order) {
        std::uint32_t union_mask = 0;
        for (const ExactSubsystem& ex : exact_subsystems(current, i))
            for (int idx : ex.indices) union_mask |= 1u << idx;
        const std::vector<int> t = detail::indices_of_mask(union_mask);
        if (!is_exact_subsystem(current, t))
            throw anomaly_error("gale_minimal: union of exact subsystems is not exact");

        const GroundSubset support = union_of(current, t);
        const std::vector<int> embedding = support.elements();
        std::vector<GroundSubset> rest;
        for (int idx : t) {
            if (idx == i) continue;
            GroundSubset relabeled{};
            for (std::size_t pos = 0; pos < embedding.size(); ++pos)
                if (current.set(idx).contains(embedding[pos]))
                    relabeled = relabeled.with(static_cast<int>(pos) + 1);
            rest.push_back(relabeled);
        }
        const Matroid dual_rest = dual(transversal_matroid(SetSystem(support.size(), rest)));

        // Greedy <_a-least basis of the dual; matroid greedy makes it Gale-minimal.
        std::vector<int> by_rotation = embedding;
        std::sort(by_rotation.begin(), by_rotation.end(), [&](int x, int y) {
            return cyclic_position(x, a, current.n()) < cyclic_position(y, a, current.n());
        });
        GroundSubset pick_relabeled{}, pick_parent{};
        for (int e : by_rotation) {
            const int rel = static_cast<int>(std::lower_bound(embedding.begin(), embedding.end(), e) -
                                             embedding.begin()) + 1;
            if (dual_rest.independent(pick_relabeled.with(rel))) {
                pick_relabeled = pick_relabeled.with(rel);
                pick_parent = pick_parent.with(e);
            }
        }
        if (pick_parent.size() != current.set(i).size())
            throw anomaly_error("gale_minimal: replacement has the wrong size");

        current = current.with_set_replaced(i, pick_parent);
        if (transversal_matroid(current) != target)
            throw anomaly_error("gale_minimal: matroid changed during Gale replacement");
    }
    if (!satisfies_minimality_inequalities(current))
        throw anomaly_error("gale_minimal: result is not minimal");
    return current;
}

/// Finds an exact subsystem containing both sets of a crossing, with the crossed set
/// S_j of maximal size (hence pivotable). Guaranteed to exist for minimal
/// presentations of positroids; absence is an anomaly, not a silent miss.
inline ExactSubsystem find_uncrossing_exact(const SetSystem& sys, const CrossingWitness& w) {
    detail::require_minimal(sys, "find_uncrossing_exact");
    if (!is_positroid(transversal_matroid(sys)))
        throw domain_error("find_uncrossing_exact: matroid is not a positroid");
    if (w.i < 0 || w.i >= sys.k() || w.j < 0 || w.j >= sys.k() || w.i == w.j)
        throw domain_error("find_uncrossing_exact: bad set indices");
    const auto expected = detail::least_crossing_witness(sys, w.i, w.j);
    const GroundSubset si = sys.set(w.i), sj = sys.set(w.j);
    const int n = sys.n();
    const bool valid = si.contains(w.a) && si.contains(w.c) && !sj.contains(w.a) &&
                       !sj.contains(w.c) && sj.contains(w.b) && sj.contains(w.d) &&
                       !si.contains(w.b) && cyclic_position(w.b, w.a, n) > 0 &&
                       cyclic_position(w.c, w.a, n) > cyclic_position(w.b, w.a, n) &&
                       cyclic_position(w.d, w.a, n) > cyclic_position(w.c, w.a, n);
    if (!valid || !expected)
        throw domain_error("find_uncrossing_exact: witness does not witness a crossing");

    for (const ExactSubsystem& ex : exact_subsystems(sys, w.j)) {
        if (std::find(ex.indices.begin(), ex.indices.end(), w.i) == ex.indices.end()) continue;
        return ex;
    }
    throw anomaly_error("find_uncrossing_exact: no exact subsystem contains the crossing pair");
}

/// All valid pivots of a minimal presentation, in deterministic order. Identity pivots
/// are excluded.
inline std::vector<Pivot> enumerate_pivots(const SetSystem& sys) {
    std::vector<Pivot> out;
    for (const ExactSubsystem& ex : exact_subsystems(sys)) {
        int max_size = 0;
        for (int i : ex.indices) max_size = std::max(max_size, sys.set(i).size());
        for (int i : ex.indices) {
            if (sys.set(i).size() != max_size) continue;
            for (int other : ex.indices) {
                if (other == i) continue;
                const GroundSubset t = sys.set(other);
                for (int a : (sys.set(i) & t).elements()) {
                    for (int b : (t - sys.set(i)).elements()) {
                        const SetSystem candidate =
                            sys.with_set_replaced(i, sys.set(i).without(a).with(b));
                        if (!satisfies_minimality_inequalities(candidate)) continue;
                        out.push_back(Pivot{i, a, b, ex});
                    }
                }
            }
        }
    }
    return out;
}

} // namespace shapeloci
