#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"

namespace shapeloci {

/// A presentation of a transversal matroid: an unordered family of k nonempty subsets
/// of [n], repeats allowed. Order is kept for stable indexing (pivots address sets by
/// position); equality is as multisets.
class SetSystem {
public:
    SetSystem(int n, std::vector<GroundSubset> sets) : n_(n), sets_(std::move(sets)) {
        require_ground_size(n_);
        if (sets_.size() > 20) throw capability_error("set system with more than 20 sets");
        const GroundSubset all = GroundSubset::full(n_);
        for (const GroundSubset& s : sets_) {
            if (s.empty()) throw domain_error("set system contains an empty set");
            if (!s.subset_of(all))
                throw domain_error("set " + s.to_string() + " outside ground set [1," +
                                   std::to_string(n_) + "]");
        }
    }

    int n() const { return n_; }
    int k() const { return static_cast<int>(sets_.size()); }
    const std::vector<GroundSubset>& sets() const { return sets_; }
    const GroundSubset& set(int i) const { return sets_[static_cast<std::size_t>(i)]; }

    GroundSubset support() const {
        GroundSubset u{};
        for (GroundSubset s : sets_) u = u | s;
        return u;
    }

    SetSystem with_set_replaced(int i, GroundSubset s) const {
        std::vector<GroundSubset> copy = sets_;
        copy[static_cast<std::size_t>(i)] = s;
        return SetSystem(n_, std::move(copy));
    }

    SetSystem without_set(int i) const {
        std::vector<GroundSubset> copy = sets_;
        copy.erase(copy.begin() + i);
        return SetSystem(n_, std::move(copy));
    }

    std::vector<GroundSubset> sorted_sets() const {
        std::vector<GroundSubset> s = sets_;
        std::sort(s.begin(), s.end());
        return s;
    }

    /// Multiset equality.
    bool operator==(const SetSystem& o) const {
        return n_ == o.n_ && sorted_sets() == o.sorted_sets();
    }

private:
    int n_;
    std::vector<GroundSubset> sets_;
};

/// Union of the named sets (row-side neighborhoods in the bipartite graph).
inline GroundSubset union_of(const SetSystem& sys, const std::vector<int>& indices) {
    GroundSubset u{};
    for (int i : indices) {
        if (i < 0 || i >= sys.k()) throw domain_error("set index out of range");
        u = u | sys.set(i);
    }
    return u;
}

/// Neighborhood unions for every subset of rows, indexed by row bitmask.
inline std::vector<std::uint32_t> row_unions(const SetSystem& sys) {
    const std::size_t words = std::size_t{1} << sys.k();
    std::vector<std::uint32_t> u(words, 0);
    for (std::uint32_t r = 1; r < words; ++r) {
        const int low = std::countr_zero(r);
        u[r] = u[r & (r - 1)] | sys.set(low).bits();
    }
    return u;
}

/// Size of a maximum matching in the bipartite graph restricted to the given rows and
/// columns. Deterministic augmenting-path search (rows in the given order, columns
/// ascending).
inline int max_matching(const SetSystem& sys, const std::vector<int>& rows, GroundSubset cols) {
    if (!cols.subset_of(GroundSubset::full(sys.n())))
        throw domain_error("max_matching: columns outside ground set");
    for (int r : rows)
        if (r < 0 || r >= sys.k()) throw domain_error("max_matching: row index out of range");

    std::vector<int> match_col(static_cast<std::size_t>(sys.n()) + 1, -1); // column -> row slot
    std::vector<char> visited(rows.size(), 0);

    // Augment from row slot `ri`; match_col holds slots into `rows`.
    std::function<bool(std::size_t)> augment = [&](std::size_t ri) -> bool {
        visited[ri] = 1;
        const GroundSubset avail = sys.set(rows[ri]) & cols;
        for (int c : avail.elements()) {
            const int owner = match_col[static_cast<std::size_t>(c)];
            if (owner < 0 || (!visited[static_cast<std::size_t>(owner)] &&
                              augment(static_cast<std::size_t>(owner)))) {
                match_col[static_cast<std::size_t>(c)] = static_cast<int>(ri);
                return true;
            }
        }
        return false;
    };

    int size = 0;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(ri)) ++size;
    }
    return size;
}

inline std::vector<int> all_rows(const SetSystem& sys) {
    std::vector<int> rows(static_cast<std::size_t>(sys.k()));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

/// Matching number by the deficiency form of Hall's theorem:
/// |rows| - max over row subsets R of (|R| - |N(R) & cols|). Used as the independent
/// cross-check of max_matching in the test suite.
inline int matching_size_by_deficiency(const SetSystem& sys, GroundSubset cols) {
    const auto unions = row_unions(sys);
    int deficiency = 0;
    for (std::size_t r = 0; r < unions.size(); ++r) {
        const int d = std::popcount(static_cast<std::uint32_t>(r)) -
                      std::popcount(unions[r] & cols.bits());
        deficiency = std::max(deficiency, d);
    }
    return sys.k() - deficiency;
}

/// The transversal matroid of the presentation: bases are the k-subsets B of [n]
/// saturable by a matching, tested via Hall's condition over row subsets.
/// Throws rank_deficient_error (carrying the achieved rank) when no matching saturates
/// all k sets.
inline Matroid transversal_matroid(const SetSystem& sys) {
    const auto unions = row_unions(sys);
    const std::size_t words = unions.size();
    for (std::size_t r = 0; r < words; ++r) {
        if (std::popcount(unions[r]) < std::popcount(static_cast<std::uint32_t>(r))) {
            const int achieved = matching_size_by_deficiency(sys, GroundSubset::full(sys.n()));
            throw rank_deficient_error(
                "presentation has rank " + std::to_string(achieved) + " < " + std::to_string(sys.k()),
                achieved);
        }
    }
    std::vector<GroundSubset> bases;
    for_each_k_subset(sys.n(), sys.k(), [&](GroundSubset b) {
        for (std::size_t r = 1; r < words; ++r)
            if (std::popcount(unions[r] & b.bits()) < std::popcount(static_cast<std::uint32_t>(r)))
                return;
        bases.push_back(b);
    });
    return Matroid(sys.n(), sys.k(), std::move(bases));
}

/// Naive maximal dimension of the basis shape locus: -k + sum of set sizes.
inline int nmd(const SetSystem& sys) {
    int total = 0;
    for (GroundSubset s : sys.sets()) total += s.size();
    return total - sys.k();
}

struct MinimalityResult {
    bool minimal = false;
    /// First violating subsystem (by increasing size, then lexicographically), as
    /// 0-based set indices, when not minimal.
    std::optional<std::vector<int>> violating;
};

namespace detail {

inline bool subsystem_ok(const std::vector<std::uint32_t>& unions, const SetSystem& sys,
                         std::uint32_t rowmask) {
    int max_size = 0;
    for (std::uint32_t r = rowmask; r != 0; r &= r - 1)
        max_size = std::max(max_size, sys.set(std::countr_zero(r)).size());
    return std::popcount(unions[rowmask]) >= max_size + std::popcount(rowmask) - 1;
}

} // namespace detail

/// Minimality of the presentation: every nonempty subsystem T must cover at least
/// max set size + |T| - 1 elements. Requires full rank.
inline MinimalityResult is_minimal_presentation(const SetSystem& sys) {
    (void)transversal_matroid(sys); // full-rank precondition; propagates rank_deficient_error
    const auto unions = row_unions(sys);
    const std::uint32_t words = 1u << sys.k();
    for (int size = 1; size <= sys.k(); ++size) {
        std::optional<std::uint32_t> worst;
        for (std::uint32_t r = 1; r < words; ++r) {
            if (std::popcount(r) != size) continue;
            if (!detail::subsystem_ok(unions, sys, r)) {
                worst = r;
                break;
            }
        }
        if (worst) {
            std::vector<int> indices;
            for (std::uint32_t r = *worst; r != 0; r &= r - 1) indices.push_back(std::countr_zero(r));
            return MinimalityResult{false, indices};
        }
    }
    return MinimalityResult{true, std::nullopt};
}

/// Cheap minimality test without the full-rank guard, for enumeration loops.
inline bool satisfies_minimality_inequalities(const SetSystem& sys) {
    const auto unions = row_unions(sys);
    const std::uint32_t words = 1u << sys.k();
    for (std::uint32_t r = 1; r < words; ++r)
        if (!detail::subsystem_ok(unions, sys, r)) return false;
    return true;
}

/// Reduces to a minimal presentation of the same matroid by deleting one element at a
/// time, validating each deletion by matroid equality. Scan order: sets by decreasing
/// size (ties by index), elements ascending within a set. nmd strictly decreases, so
/// this terminates.
inline SetSystem reduce_to_minimal(const SetSystem& sys) {
    const Matroid target = transversal_matroid(sys);
    SetSystem current = sys;
    while (true) {
        if (satisfies_minimality_inequalities(current)) return current;
        std::vector<int> order = all_rows(current);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return current.set(a).size() > current.set(b).size();
        });
        bool removed = false;
        for (int i : order) {
            if (current.set(i).size() <= 1) continue;
            for (int e : current.set(i).elements()) {
                SetSystem candidate = current.with_set_replaced(i, current.set(i).without(e));
                try {
                    if (transversal_matroid(candidate) == target) {
                        current = std::move(candidate);
                        removed = true;
                        break;
                    }
                } catch (const rank_deficient_error&) {
                    // removal killed the matching; not a valid deletion
                }
            }
            if (removed) break;
        }
        if (!removed)
            throw anomaly_error("non-minimal presentation with no removable element: " +
                                [&] {
                                    std::string s;
                                    for (GroundSubset g : current.sets()) s += g.to_string();
                                    return s;
                                }());
    }
}

/// The unique maximal presentation: grow each set one element at a time, keeping an
/// element exactly when the matroid is unchanged. A single pass suffices: monotonicity
/// of the transversal matroid in the presentation makes a rejected element stay
/// rejected as other sets grow.
inline SetSystem maximal_presentation(const SetSystem& sys) {
    const Matroid target = transversal_matroid(sys);
    SetSystem current = sys;
    for (int i = 0; i < current.k(); ++i) {
        for (int e = 1; e <= current.n(); ++e) {
            if (current.set(i).contains(e)) continue;
            SetSystem candidate = current.with_set_replaced(i, current.set(i).with(e));
            if (transversal_matroid(candidate) == target) current = std::move(candidate);
        }
    }
    return current;
}

/// F(T): the elements avoided by every set outside T. Always a flat of the transversal
/// matroid.
inline GroundSubset flat_of_subsystem(const SetSystem& sys, const std::vector<int>& t_indices) {
    std::vector<char> in_t(static_cast<std::size_t>(sys.k()), 0);
    for (int i : t_indices) {
        if (i < 0 || i >= sys.k()) throw domain_error("flat_of_subsystem: index out of range");
        in_t[static_cast<std::size_t>(i)] = 1;
    }
    GroundSubset outside{};
    for (int i = 0; i < sys.k(); ++i)
        if (!in_t[static_cast<std::size_t>(i)]) outside = outside | sys.set(i);
    return outside.complement_in(sys.n());
}

/// dim L(S) = nmd of any minimal presentation of the same matroid.
inline int locus_dimension(const SetSystem& sys) { return nmd(reduce_to_minimal(sys)); }

/// S restricted to I: intersect every set with I, drop empty intersections, relabel
/// ground to 1..|I| preserving order.
inline SetSystem restrict_to(const SetSystem& sys, GroundSubset i) {
    const std::vector<int> embedding = i.elements();
    std::vector<GroundSubset> sets;
    for (GroundSubset s : sys.sets()) {
        GroundSubset relabeled{};
        for (std::size_t pos = 0; pos < embedding.size(); ++pos)
            if (s.contains(embedding[pos])) relabeled = relabeled.with(static_cast<int>(pos) + 1);
        if (!relabeled.empty()) sets.push_back(relabeled);
    }
    return SetSystem(i.size(), std::move(sets));
}

/// Presentation of the contraction by F(T) when rk(F(T)) = |T|: the sets outside T,
/// restricted to the complement of F(T) and relabelled.
inline SetSystem presentation_of_contraction(const SetSystem& sys, const std::vector<int>& t_indices) {
    const GroundSubset f = flat_of_subsystem(sys, t_indices);
    std::vector<char> in_t(static_cast<std::size_t>(sys.k()), 0);
    for (int i : t_indices) in_t[static_cast<std::size_t>(i)] = 1;
    const std::vector<int> embedding = f.complement_in(sys.n()).elements();
    std::vector<GroundSubset> sets;
    for (int i = 0; i < sys.k(); ++i) {
        if (in_t[static_cast<std::size_t>(i)]) continue;
        GroundSubset relabeled{};
        for (std::size_t pos = 0; pos < embedding.size(); ++pos)
            if (sys.set(i).contains(embedding[pos])) relabeled = relabeled.with(static_cast<int>(pos) + 1);
        if (!relabeled.empty()) sets.push_back(relabeled);
    }
    return SetSystem(static_cast<int>(embedding.size()), std::move(sets));
}

/// Connected components of the bipartite graph: pairs of (set indices, elements).
/// Elements in no set appear as ({}, {e}) singleton blocks.
inline std::vector<std::pair<std::vector<int>, GroundSubset>> gamma_components(const SetSystem& sys) {
    // Union-find over k rows followed by n columns.
    const int total = sys.k() + sys.n();
    std::vector<int> parent(static_cast<std::size_t>(total));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(b)] = a;
    };
    for (int i = 0; i < sys.k(); ++i)
        for (int e : sys.set(i).elements()) unite(i, sys.k() + e - 1);

    std::vector<std::pair<std::vector<int>, GroundSubset>> blocks(static_cast<std::size_t>(total));
    for (int i = 0; i < sys.k(); ++i) blocks[static_cast<std::size_t>(find(i))].first.push_back(i);
    for (int e = 1; e <= sys.n(); ++e) {
        auto& blk = blocks[static_cast<std::size_t>(find(sys.k() + e - 1))];
        blk.second = blk.second.with(e);
    }
    std::vector<std::pair<std::vector<int>, GroundSubset>> out;
    for (auto& b : blocks)
        if (!b.first.empty() || !b.second.empty()) out.push_back(std::move(b));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second.min_element() < b.second.min_element();
    });
    return out;
}

inline std::vector<int> sorted_size_vector(const SetSystem& sys) {
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(sys.k()));
    for (GroundSubset s : sys.sets()) sizes.push_back(s.size());
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

} // namespace shapeloci
