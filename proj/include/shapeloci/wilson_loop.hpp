#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "pivots.hpp"
#include "positroid.hpp"
#include "set_system.hpp"

namespace shapeloci {

using Rational = boost::multiprecision::cpp_rational;

/// A propagator: an unordered pair of non-cyclically-adjacent vertices, stored as
/// (low, high).
using Propagator = std::pair<int, int>;

/// A Wilson loop diagram: propagators on the cycle [n]. The list is a multiset (a
/// repeated propagator is representable and fails admissibility (i)); it is kept
/// sorted for canonical comparisons.
class WilsonLoopDiagram {
public:
    WilsonLoopDiagram(int n, std::vector<Propagator> propagators)
        : n_(n), props_(std::move(propagators)) {
        require_ground_size(n_);
        if (n_ < 3) throw domain_error("Wilson loop diagram needs a cycle of length >= 3");
        for (Propagator& p : props_) {
            if (p.first > p.second) std::swap(p.first, p.second);
            if (p.first < 1 || p.second > n_)
                throw domain_error("propagator endpoint outside [1,n]");
            if (p.first == p.second || cyclic_next(p.first, n_) == p.second ||
                cyclic_next(p.second, n_) == p.first)
                throw domain_error("propagator endpoints must not be cyclically adjacent");
        }
        std::sort(props_.begin(), props_.end());
    }

    int n() const { return n_; }
    int k() const { return static_cast<int>(props_.size()); }
    const std::vector<Propagator>& propagators() const { return props_; }

    bool operator==(const WilsonLoopDiagram&) const = default;

private:
    int n_;
    std::vector<Propagator> props_;
};

/// The 4-set of a propagator {i,j}: {i, i+1, j, j+1} with the cyclic successor.
inline GroundSubset propagator_support(Propagator p, int n) {
    return GroundSubset{}
        .with(p.first)
        .with(cyclic_next(p.first, n))
        .with(p.second)
        .with(cyclic_next(p.second, n));
}

/// The derived set system: each propagator contributes its 4-set, in propagator order.
inline SetSystem to_set_system(const WilsonLoopDiagram& w) {
    std::vector<GroundSubset> sets;
    sets.reserve(static_cast<std::size_t>(w.k()));
    for (Propagator p : w.propagators()) sets.push_back(propagator_support(p, w.n()));
    return SetSystem(w.n(), std::move(sets));
}

/// Strict interleaving of two chords on the cycle: endpoints alternate, none shared.
inline bool propagators_interleave(Propagator p, Propagator q) {
    if (p.first == q.first || p.first == q.second || p.second == q.first ||
        p.second == q.second)
        return false;
    const bool q1_inside = p.first < q.first && q.first < p.second;
    const bool q2_inside = p.first < q.second && q.second < p.second;
    return q1_inside != q2_inside;
}

struct Admissibility {
    bool admissible = false;
    /// Subdiagram violating the size condition (i), as 0-based propagator indices.
    std::optional<std::vector<int>> violating_subdiagram;
    /// First strictly interleaving pair, as 0-based propagator indices.
    std::optional<std::pair<int, int>> crossing_pair;
};

/// Size condition (i) alone: every subdiagram Q covers at least |Q| + 3 vertices.
inline std::optional<std::vector<int>> size_condition_violation(const WilsonLoopDiagram& w) {
    const int k = w.k();
    std::vector<std::uint32_t> supports;
    for (Propagator p : w.propagators()) supports.push_back(propagator_support(p, w.n()).bits());
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    for (std::uint32_t mask : masks) {
        std::uint32_t u = 0;
        for (std::uint32_t r = mask; r != 0; r &= r - 1)
            u |= supports[static_cast<std::size_t>(std::countr_zero(r))];
        if (std::popcount(u) < std::popcount(mask) + 3) {
            std::vector<int> indices;
            for (std::uint32_t r = mask; r != 0; r &= r - 1)
                indices.push_back(std::countr_zero(r));
            return indices;
        }
    }
    return std::nullopt;
}

/// Admissibility: (i) every subdiagram covers |Q| + 3 vertices, and (ii) no two
/// propagators strictly interleave (shared endpoints allowed).
inline Admissibility is_admissible(const WilsonLoopDiagram& w) {
    Admissibility out;
    out.violating_subdiagram = size_condition_violation(w);
    if (out.violating_subdiagram) return out;
    const auto& props = w.propagators();
    for (std::size_t a = 0; a < props.size(); ++a)
        for (std::size_t b = a + 1; b < props.size(); ++b)
            if (propagators_interleave(props[a], props[b])) {
                out.crossing_pair = {static_cast<int>(a), static_cast<int>(b)};
                return out;
            }
    out.admissible = true;
    return out;
}

struct WldProperties {
    int dimension = 0;
    bool positroid = false;
};

/// Locus dimension and positroid status of an admissible diagram. Both are pinned by
/// the general theory (dimension 3k, always a positroid); a mismatch is an anomaly.
inline WldProperties wld_properties(const WilsonLoopDiagram& w) {
    const Admissibility adm = is_admissible(w);
    if (!adm.admissible) throw domain_error("wld_properties: diagram is not admissible");
    const SetSystem sys = to_set_system(w);
    WldProperties out;
    out.dimension = locus_dimension(sys);
    out.positroid = is_positroid(transversal_matroid(sys));
    if (out.dimension != 3 * w.k())
        throw anomaly_error("wld_properties: dimension differs from 3k");
    if (!out.positroid) throw anomaly_error("wld_properties: admissible diagram not a positroid");
    return out;
}

/// All exact subdiagrams: subsets covering exactly |Q| + 3 vertices. Requires (i).
inline std::vector<std::vector<int>> exact_subdiagrams(const WilsonLoopDiagram& w) {
    if (size_condition_violation(w))
        throw domain_error("exact_subdiagrams: diagram violates the size condition");
    std::vector<std::uint32_t> supports;
    for (Propagator p : w.propagators()) supports.push_back(propagator_support(p, w.n()).bits());
    std::vector<std::vector<int>> out;
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (1u << w.k()); ++mask) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    for (std::uint32_t mask : masks) {
        std::uint32_t u = 0;
        for (std::uint32_t r = mask; r != 0; r &= r - 1)
            u |= supports[static_cast<std::size_t>(std::countr_zero(r))];
        if (std::popcount(u) == std::popcount(mask) + 3) {
            std::vector<int> indices;
            for (std::uint32_t r = mask; r != 0; r &= r - 1)
                indices.push_back(std::countr_zero(r));
            out.push_back(indices);
        }
    }
    return out;
}

/// Diagram equivalence: equality of the derived transversal matroids.
inline bool wld_equivalent(const WilsonLoopDiagram& a, const WilsonLoopDiagram& b) {
    if (size_condition_violation(a) || size_condition_violation(b))
        throw domain_error("wld_equivalent: both diagrams must satisfy the size condition");
    if (a.n() != b.n() || a.k() != b.k()) return false;
    return transversal_matroid(to_set_system(a)) == transversal_matroid(to_set_system(b));
}

/// Enumerates the ways to place m = |support| - 3 propagators whose 4-sets stay inside
/// `support` and cover it, obeying both admissibility conditions among themselves.
/// Lexicographic in the sorted propagator lists.
inline std::vector<std::vector<Propagator>> noncrossing_exact_arrangements(int n,
                                                                           GroundSubset support) {
    const int m = support.size() - 3;
    if (m <= 0) return {};
    std::vector<Propagator> candidates;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Propagator p{i, j};
            if (cyclic_next(i, n) == j || cyclic_next(j, n) == i) continue;
            if (propagator_support(p, n).subset_of(support)) candidates.push_back(p);
        }
    }
    std::vector<std::vector<Propagator>> out;
    std::vector<Propagator> chosen;
    const std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (static_cast<int>(chosen.size()) == m) {
            GroundSubset covered{};
            for (Propagator p : chosen) covered = covered | propagator_support(p, n);
            if (covered != support) return;
            try {
                const WilsonLoopDiagram cand(n, chosen);
                if (is_admissible(cand).admissible) out.push_back(cand.propagators());
            } catch (const domain_error&) {
            }
            return;
        }
        for (std::size_t i = from; i < candidates.size(); ++i) {
            // Prune interleavings early; condition (i) is rechecked on the full pick.
            bool ok = true;
            for (Propagator p : chosen)
                if (propagators_interleave(p, candidates[i])) ok = false;
            if (!ok) continue;
            chosen.push_back(candidates[i]);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return out;
}

/// Number of admissible arrangements of (vertices - 3) propagators supported on a
/// contiguous segment of the given length. Matches the Catalan numbers 1, 2, 5, 14,
/// 42, ... starting at vertices = 4.
inline long long noncrossing_exact_count(int vertices) {
    if (vertices < 4) throw domain_error("noncrossing_exact_count: need at least 4 vertices");
    require_ground_size(vertices + 1);
    GroundSubset segment{};
    for (int e = 1; e <= vertices; ++e) segment = segment.with(e);
    // Ambient cycle one longer than the segment, so successors never wrap into it.
    return static_cast<long long>(noncrossing_exact_arrangements(vertices + 1, segment).size());
}

/// Replaces exact subdiagrams containing a crossing pair with admissible arrangements
/// on the same support until the diagram is admissible. Search is breadth-first over
/// matroid-preserving replacements, so a reachable admissible diagram is always found.
/// Requires (i) and a positroid matroid; exhaustion is an anomaly (it would contradict
/// the uncrossing theorem).
inline WilsonLoopDiagram uncross(const WilsonLoopDiagram& w) {
    if (size_condition_violation(w))
        throw domain_error("uncross: diagram violates the size condition");
    const SetSystem derived = to_set_system(w);
    const Matroid target = transversal_matroid(derived);
    if (!is_positroid(target)) throw domain_error("uncross: matroid is not a positroid");
    if (is_admissible(w).admissible) return w;

    std::deque<WilsonLoopDiagram> frontier{w};
    std::vector<WilsonLoopDiagram> seen{w};
    const std::size_t node_cap = 20000;
    auto known = [&](const WilsonLoopDiagram& d) {
        return std::find(seen.begin(), seen.end(), d) != seen.end();
    };
    while (!frontier.empty()) {
        const WilsonLoopDiagram current = frontier.front();
        frontier.pop_front();

        const Admissibility adm = is_admissible(current);
        if (adm.admissible) return current;
        if (!adm.crossing_pair) continue; // (i) broken on this branch; dead end

        // Prefer the exact subdiagram located through a set-level crossing witness when
        // the 4-sets cross as sets; otherwise enumerate subdiagrams containing the pair.
        const auto [pi, qi] = *adm.crossing_pair;
        const SetSystem cur_sys = to_set_system(current);
        std::vector<std::vector<int>> containing;
        if (const auto witness = detail::least_crossing_witness(cur_sys, pi, qi)) {
            containing.push_back(find_uncrossing_exact(cur_sys, *witness).indices);
        } else if (const auto witness_rev = detail::least_crossing_witness(cur_sys, qi, pi)) {
            containing.push_back(find_uncrossing_exact(cur_sys, *witness_rev).indices);
        }
        for (const auto& sub : exact_subdiagrams(current)) {
            if (std::find(sub.begin(), sub.end(), pi) == sub.end()) continue;
            if (std::find(sub.begin(), sub.end(), qi) == sub.end()) continue;
            if (std::find(containing.begin(), containing.end(), sub) == containing.end())
                containing.push_back(sub);
        }

        for (const auto& sub : containing) {
            GroundSubset support{};
            std::vector<char> inside(static_cast<std::size_t>(current.k()), 0);
            for (int i : sub) {
                inside[static_cast<std::size_t>(i)] = 1;
                support = support |
                          propagator_support(current.propagators()[static_cast<std::size_t>(i)],
                                             current.n());
            }
            for (const auto& replacement : noncrossing_exact_arrangements(current.n(), support)) {
                std::vector<Propagator> props = replacement;
                for (int i = 0; i < current.k(); ++i)
                    if (!inside[static_cast<std::size_t>(i)])
                        props.push_back(current.propagators()[static_cast<std::size_t>(i)]);
                WilsonLoopDiagram candidate(current.n(), std::move(props));
                if (known(candidate)) continue;
                if (size_condition_violation(candidate)) continue;
                if (transversal_matroid(to_set_system(candidate)) != target) continue;
                seen.push_back(candidate);
                frontier.push_back(std::move(candidate));
                if (seen.size() > node_cap)
                    throw anomaly_error("uncross: search budget exhausted without an admissible "
                                        "equivalent diagram");
            }
        }
    }
    throw anomaly_error("uncross: no admissible equivalent diagram found, contradicting the "
                        "uncrossing theorem");
}

/// Domino anchor sets: each I contributes I' = I + its cyclic successors.
class DominoSystem {
public:
    DominoSystem(int n, std::vector<GroundSubset> supports) : n_(n), supports_(std::move(supports)) {
        require_ground_size(n_);
        const GroundSubset all = GroundSubset::full(n_);
        for (GroundSubset s : supports_) {
            if (s.empty()) throw domain_error("domino system: empty anchor set");
            if (!s.subset_of(all)) throw domain_error("domino system: anchor outside [1,n]");
            // The dominos {i, i+1} of one anchor set must be pairwise disjoint.
            for (int e : s.elements())
                if (s.contains(cyclic_next(e, n_)) && s.size() > 1)
                    throw domain_error("domino system: anchors " + std::to_string(e) + "," +
                                       std::to_string(cyclic_next(e, n_)) +
                                       " have overlapping dominos");
        }
    }

    int n() const { return n_; }
    const std::vector<GroundSubset>& supports() const { return supports_; }

private:
    int n_;
    std::vector<GroundSubset> supports_;
};

inline SetSystem domino_to_system(const DominoSystem& d) {
    std::vector<GroundSubset> sets;
    for (GroundSubset anchors : d.supports()) {
        GroundSubset s = anchors;
        for (int e : anchors.elements()) s = s.with(cyclic_next(e, d.n()));
        sets.push_back(s);
    }
    return SetSystem(d.n(), std::move(sets));
}

/// Exact rational k x n matrix with per-row support bookkeeping.
struct RationalMatrix {
    std::vector<std::vector<Rational>> rows;

    int k() const { return static_cast<int>(rows.size()); }
    int n() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
};

namespace detail {

inline Rational rational_det(std::vector<std::vector<Rational>> a) {
    const std::size_t m = a.size();
    Rational det = 1;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        while (pivot < m && a[pivot][col] == 0) ++pivot;
        if (pivot == m) return 0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < m; ++r) {
            if (a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

} // namespace detail

/// Plücker coordinate of an exact rational matrix.
inline Rational rational_plucker(const RationalMatrix& m, GroundSubset cols) {
    if (cols.size() != m.k()) throw domain_error("rational_plucker: |I| != k");
    std::vector<std::vector<Rational>> sub;
    for (const auto& row : m.rows) {
        std::vector<Rational> r;
        for (int c : cols.elements()) r.push_back(row[static_cast<std::size_t>(c - 1)]);
        sub.push_back(std::move(r));
    }
    return detail::rational_det(std::move(sub));
}

/// Checks the domino sign rule on an exactly-represented nonnegative point: in every
/// row, adjacent nonzero entries share their sign, except across the n -> 1 wrap where
/// the sign flips by (-1)^(k-1). Preconditions (support pattern matches the system,
/// all Plücker coordinates nonnegative) are verified exactly and violations name a
/// witness.
inline bool domino_sign_check(const RationalMatrix& m, const SetSystem& sys) {
    if (m.k() != sys.k() || m.n() != sys.n())
        throw domain_error("domino_sign_check: matrix shape does not match the system");
    if (!satisfies_minimality_inequalities(sys))
        throw domain_error("domino_sign_check: presentation is not minimal");

    // Match rows to sets by support, as multisets.
    std::vector<GroundSubset> row_supports;
    for (const auto& row : m.rows) {
        GroundSubset s{};
        for (int c = 1; c <= m.n(); ++c)
            if (row[static_cast<std::size_t>(c - 1)] != 0) s = s.with(c);
        row_supports.push_back(s);
    }
    std::vector<GroundSubset> a = row_supports, b = sys.sorted_sets();
    std::sort(a.begin(), a.end());
    if (a != b)
        throw domain_error("domino_sign_check: row supports do not match the presentation");

    bool nonneg_all = true;
    GroundSubset witness{};
    for_each_k_subset(m.n(), m.k(), [&](GroundSubset cols) {
        if (!nonneg_all) return;
        if (rational_plucker(m, cols) < 0) {
            nonneg_all = false;
            witness = cols;
        }
    });
    if (!nonneg_all)
        throw domain_error("domino_sign_check: negative Pluecker coordinate at " +
                           witness.to_string());

    const int k = m.k(), n = m.n();
    for (const auto& row : m.rows) {
        for (int i = 1; i <= n; ++i) {
            const int j = cyclic_next(i, n);
            const Rational& vi = row[static_cast<std::size_t>(i - 1)];
            const Rational& vj = row[static_cast<std::size_t>(j - 1)];
            if (vi == 0 || vj == 0) continue;
            const int si = vi > 0 ? 1 : -1;
            const int sj = vj > 0 ? 1 : -1;
            const int expected = (i == n && (k - 1) % 2 == 1) ? -si : si;
            if (sj != expected) return false;
        }
    }
    return true;
}

} // namespace shapeloci
