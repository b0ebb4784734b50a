#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "set_system.hpp"

namespace shapeloci {

/// Witness that set i crosses set j: a cyclic quadruple a, b, c, d (in the rotated
/// order starting at a) with a, c in S_i but not S_j, b, d in S_j, and b outside S_i.
/// Set indices are 0-based.
struct CrossingWitness {
    int i = 0;
    int j = 0;
    int a = 0, b = 0, c = 0, d = 0;

    bool operator==(const CrossingWitness&) const = default;
};

namespace detail {

/// Lexicographically least witness tuple (a,b,c,d) for "set i crosses set j", if any.
inline std::optional<CrossingWitness> least_crossing_witness(const SetSystem& sys, int i, int j) {
    const int n = sys.n();
    const GroundSubset si = sys.set(i), sj = sys.set(j);
    const GroundSubset ac_pool = si - sj;      // a, c candidates
    const GroundSubset b_pool = sj - si;       // b candidates
    if (ac_pool.size() < 2 || b_pool.empty()) return std::nullopt;
    for (int a = 1; a <= n; ++a) {
        if (!ac_pool.contains(a)) continue;
        for (int b = 1; b <= n; ++b) {
            if (!b_pool.contains(b)) continue;
            const int pb = cyclic_position(b, a, n);
            if (pb == 0) continue;
            for (int c = 1; c <= n; ++c) {
                if (!ac_pool.contains(c)) continue;
                const int pc = cyclic_position(c, a, n);
                if (pc <= pb) continue;
                for (int d = 1; d <= n; ++d) {
                    if (!sj.contains(d)) continue;
                    if (cyclic_position(d, a, n) <= pc) continue;
                    return CrossingWitness{i, j, a, b, c, d};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace detail

/// All ordered pairs (i,j) with S_i crossing S_j, each with its lexicographically
/// least witness. Crossing is not symmetric. Empty result means noncrossing.
inline std::vector<CrossingWitness> crossings(const SetSystem& sys) {
    std::vector<CrossingWitness> out;
    for (int i = 0; i < sys.k(); ++i)
        for (int j = 0; j < sys.k(); ++j) {
            if (i == j) continue;
            if (auto w = detail::least_crossing_witness(sys, i, j)) out.push_back(*w);
        }
    return out;
}

inline bool is_noncrossing(const SetSystem& sys) { return crossings(sys).empty(); }

/// Two blocks of a partition cross when some a < b < c < d alternates between them.
inline bool blocks_cross(GroundSubset x, GroundSubset y) {
    // Walk the merged elements in order and count alternations of block label.
    int switches = 0;
    int last = 0; // 0 none, 1 = x, 2 = y
    for (int e = 1; e <= kMaxGroundSize; ++e) {
        int here = 0;
        if (x.contains(e)) here = 1;
        else if (y.contains(e)) here = 2;
        if (here == 0) continue;
        if (last != 0 && here != last) ++switches;
        last = here;
    }
    return switches >= 3;
}

/// Positroid test: every connected component restricts (with its inherited order) to a
/// matroid all of whose flacets are cyclic intervals, and the components form a
/// noncrossing partition of [n].
inline bool is_positroid(const Matroid& m) {
    if (m.is_empty()) throw domain_error("is_positroid: empty matroid");
    const auto comps = connected_components(m);
    for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = a + 1; b < comps.size(); ++b)
            if (blocks_cross(comps[a], comps[b])) return false;
    for (GroundSubset c : comps) {
        if (c.size() <= 1) continue;
        const Minor sub = restriction(m, c);
        for (GroundSubset f : flacets(sub.matroid))
            if (!f.is_cyclic_interval(sub.matroid.n())) return false;
    }
    return true;
}

/// All cyclic intervals of [n], enumerated by (start, length), the full set last.
inline std::vector<GroundSubset> cyclic_intervals(int n) {
    std::vector<GroundSubset> out;
    for (int len = 1; len < n; ++len)
        for (int start = 1; start <= n; ++start) {
            GroundSubset iv{};
            int e = start;
            for (int t = 0; t < len; ++t) {
                iv = iv.with(e);
                e = cyclic_next(e, n);
            }
            out.push_back(iv);
        }
    out.push_back(GroundSubset::full(n));
    return out;
}

/// Tightest matroid cut out by the cyclic-interval rank bounds of m:
/// bases = { B : |B & C| <= rank(C) for every cyclic interval C }. Contains m; equals m
/// exactly when m is a positroid (asserted against is_positroid in the suite).
inline Matroid positroid_envelope(const Matroid& m) {
    struct Bound {
        std::uint32_t mask;
        int rank;
    };
    std::vector<Bound> bounds;
    for (GroundSubset c : cyclic_intervals(m.n())) bounds.push_back({c.bits(), m.rank(c)});
    std::vector<GroundSubset> bases;
    for_each_k_subset(m.n(), m.k(), [&](GroundSubset b) {
        for (const Bound& bd : bounds)
            if (std::popcount(b.bits() & bd.mask) > bd.rank) return;
        bases.push_back(b);
    });
    return Matroid(m.n(), m.k(), std::move(bases));
}

/// Upper-triangular table of ordinary-interval ranks r(i,j), 1 <= i <= j <= n.
class IntervalRankMatrix {
public:
    IntervalRankMatrix(int n, std::vector<std::vector<int>> rows) : n_(n), rows_(std::move(rows)) {
        require_ground_size(n_);
        if (static_cast<int>(rows_.size()) != n_)
            throw domain_error("interval rank matrix needs one row per ground element");
        for (int i = 1; i <= n_; ++i)
            if (static_cast<int>(rows_[static_cast<std::size_t>(i - 1)].size()) != n_ - i + 1)
                throw domain_error("row " + std::to_string(i) + " must list r(i,i..n)");
        validate();
    }

    int n() const { return n_; }

    int at(int i, int j) const {
        if (i < 1 || j > n_ || i > j) throw domain_error("interval rank index out of range");
        return rows_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - i)];
    }

    const std::vector<std::vector<int>>& rows() const { return rows_; }

    bool operator==(const IntervalRankMatrix& o) const { return n_ == o.n_ && rows_ == o.rows_; }

private:
    void validate() const {
        for (int i = 1; i <= n_; ++i) {
            if (at(i, i) < 0 || at(i, i) > 1)
                throw domain_error("r(i,i) must be 0 or 1 at i=" + std::to_string(i));
            for (int j = i; j < n_; ++j) {
                const int step = at(i, j + 1) - at(i, j);
                if (step < 0 || step > 1) throw domain_error("rank must grow by 0 or 1 per column");
            }
        }
        for (int j = 1; j <= n_; ++j)
            for (int i = 2; i <= j; ++i) {
                const int step = at(i - 1, j) - at(i, j);
                if (step < 0 || step > 1) throw domain_error("rank must grow by 0 or 1 per row");
            }
    }

    int n_;
    std::vector<std::vector<int>> rows_;
};

/// Interval ranks of a generic point of the locus: r(i,j) is the matching number into
/// columns {i..j}.
inline IntervalRankMatrix interval_rank_matrix(const SetSystem& sys) {
    std::vector<std::vector<int>> rows;
    const auto rws = all_rows(sys);
    for (int i = 1; i <= sys.n(); ++i) {
        std::vector<int> row;
        GroundSubset cols{};
        for (int j = i; j <= sys.n(); ++j) {
            cols = cols.with(j);
            row.push_back(max_matching(sys, rws, cols));
        }
        rows.push_back(std::move(row));
    }
    return IntervalRankMatrix(sys.n(), std::move(rows));
}

/// Largest matroid obeying every ordinary-interval bound:
/// bases = { B : |B & [i,j]| <= r(i,j) for all i <= j }.
inline Matroid interval_envelope(const IntervalRankMatrix& r, int k) {
    const int n = r.n();
    if (r.at(1, n) != k) throw domain_error("interval_envelope: r(1,n) must equal k");
    struct Bound {
        std::uint32_t mask;
        int rank;
    };
    std::vector<Bound> bounds;
    for (int i = 1; i <= n; ++i) {
        std::uint32_t mask = 0;
        for (int j = i; j <= n; ++j) {
            mask |= 1u << (j - 1);
            bounds.push_back({mask, r.at(i, j)});
        }
    }
    std::vector<GroundSubset> bases;
    for_each_k_subset(n, k, [&](GroundSubset b) {
        for (const Bound& bd : bounds)
            if (std::popcount(b.bits() & bd.mask) > bd.rank) return;
        bases.push_back(b);
    });
    if (bases.empty()) throw domain_error("interval_envelope: inconsistent rank matrix, no bases");
    return Matroid(n, k, std::move(bases));
}

/// Expected codimension over the boolean lattice:
///   ec = sum over I of c(I) b(I), c(I) = |I| - rk(I),
///   b(I) = sum over J >= I of (k - rk(J)) (-1)^{|J|-|I|}.
/// Computed by the signed subset transform: ec = sum over J of (k - rk(J)) chat(J)
/// with chat(J) = sum over I <= J of (-1)^{|J|-|I|} c(I).
inline long long expected_codimension(const Matroid& m) {
    if (m.n() > 16)
        throw capability_error("expected_codimension: full sweep limited to n <= 16; "
                               "supply a minimal presentation instead");
    const std::size_t words = std::size_t{1} << m.n();
    std::vector<long long> t(words);
    for (std::uint32_t s = 0; s < words; ++s)
        t[s] = std::popcount(s) - m.rank(GroundSubset(s));
    for (int b = 0; b < m.n(); ++b)
        for (std::uint32_t s = 0; s < words; ++s)
            if (s & (1u << b)) t[s] -= t[s ^ (1u << b)];
    long long ec = 0;
    for (std::uint32_t s = 0; s < words; ++s)
        ec += (m.k() - m.rank(GroundSubset(s))) * t[s];
    return ec;
}

/// Closed form through a minimal presentation: ec = k(n-k) - nmd(S). For a connected
/// matroid this is the familiar sum of (n - |S_i|) minus k(k-1).
inline long long expected_codimension(const Matroid& m, const SetSystem& minimal_presentation) {
    if (transversal_matroid(minimal_presentation) != m)
        throw domain_error("expected_codimension: presentation does not present the matroid");
    if (!is_minimal_presentation(minimal_presentation).minimal)
        throw domain_error("expected_codimension: presentation is not minimal");
    return static_cast<long long>(m.k()) * (m.n() - m.k()) - nmd(minimal_presentation);
}

/// Expected codimension with the Moebius function of the containment poset on the
/// given collection only. Requires the collection to contain every flacet of every
/// connected component and to be closed under connected components of restrictions;
/// a violation is reported with the missing set named.
inline long long expected_codimension_restricted(const Matroid& m,
                                                 std::vector<GroundSubset> collection) {
    std::sort(collection.begin(), collection.end());
    collection.erase(std::unique(collection.begin(), collection.end()), collection.end());
    auto in_collection = [&](GroundSubset s) {
        return std::binary_search(collection.begin(), collection.end(), s);
    };

    for (GroundSubset comp : connected_components(m)) {
        if (comp.size() <= 1) continue;
        const Minor sub = restriction(m, comp);
        for (GroundSubset f : flacets(sub.matroid)) {
            const GroundSubset parent = sub.to_parent(f);
            if (!in_collection(parent))
                throw domain_error("restricted collection is missing the flacet " +
                                   parent.to_string());
        }
    }
    for (GroundSubset i : collection) {
        if (i.empty()) continue;
        const Minor sub = restriction(m, i);
        for (GroundSubset c : connected_components(sub.matroid)) {
            const GroundSubset parent = sub.to_parent(c);
            if (!in_collection(parent))
                throw domain_error("restricted collection is missing the component " +
                                   parent.to_string() + " of " + i.to_string());
        }
    }

    // Moebius function of the containment poset, by induction up the order.
    const std::size_t sz = collection.size();
    std::vector<std::vector<long long>> mu(sz, std::vector<long long>(sz, 0));
    for (std::size_t a = 0; a < sz; ++a) {
        mu[a][a] = 1;
        for (std::size_t b2 = a + 1; b2 < sz; ++b2) {
            if (!collection[a].subset_of(collection[b2])) continue;
            long long s = 0;
            for (std::size_t c = a; c < b2; ++c)
                if (collection[a].subset_of(collection[c]) && collection[c].subset_of(collection[b2]))
                    s += mu[a][c];
            mu[a][b2] = -s;
        }
    }
    long long ec = 0;
    for (std::size_t a = 0; a < sz; ++a) {
        const long long cval = collection[a].size() - m.rank(collection[a]);
        if (cval == 0) continue;
        long long bval = 0;
        for (std::size_t b2 = a; b2 < sz; ++b2)
            if (collection[a].subset_of(collection[b2]))
                bval += (m.k() - m.rank(collection[b2])) * mu[a][b2];
        ec += cval * bval;
    }
    return ec;
}

/// b-value of a single member of the restricted collection (exposed for the suite's
/// check of the transversal collection's 0/1 pattern).
inline long long restricted_b_value(const Matroid& m, const std::vector<GroundSubset>& coll_in,
                                    GroundSubset target) {
    std::vector<GroundSubset> collection = coll_in;
    std::sort(collection.begin(), collection.end());
    collection.erase(std::unique(collection.begin(), collection.end()), collection.end());
    const auto it = std::lower_bound(collection.begin(), collection.end(), target);
    if (it == collection.end() || *it != target)
        throw domain_error("restricted_b_value: target not in collection");
    const std::size_t sz = collection.size();
    const std::size_t a = static_cast<std::size_t>(it - collection.begin());
    // mu(target, J) for all J, by induction.
    std::vector<long long> mu(sz, 0);
    mu[a] = 1;
    for (std::size_t b2 = a + 1; b2 < sz; ++b2) {
        if (!collection[a].subset_of(collection[b2])) continue;
        long long s = 0;
        for (std::size_t c = a; c < b2; ++c)
            if (collection[a].subset_of(collection[c]) && collection[c].subset_of(collection[b2]))
                s += mu[c];
        mu[b2] = -s;
    }
    long long bval = 0;
    for (std::size_t b2 = a; b2 < sz; ++b2)
        if (collection[a].subset_of(collection[b2]))
            bval += (m.k() - m.rank(collection[b2])) * mu[b2];
    return bval;
}

/// The collection used for transversal matroids: all singletons together with every
/// F(T) of full rank |T| (nonempty ones).
inline std::vector<GroundSubset> transversal_ec_collection(const SetSystem& sys, const Matroid& m) {
    std::vector<GroundSubset> coll;
    for (int e = 1; e <= sys.n(); ++e) coll.push_back(GroundSubset::single(e));
    const std::uint32_t words = 1u << sys.k();
    for (std::uint32_t mask = 0; mask < words; ++mask) {
        std::vector<int> t;
        for (int i = 0; i < sys.k(); ++i)
            if (mask & (1u << i)) t.push_back(i);
        const GroundSubset f = flat_of_subsystem(sys, t);
        if (!f.empty() && m.rank(f) == static_cast<int>(t.size())) coll.push_back(f);
    }
    std::sort(coll.begin(), coll.end());
    coll.erase(std::unique(coll.begin(), coll.end()), coll.end());
    return coll;
}

/// Searches for a presentation of m among k-subsets of its cocircuits (complete for
/// minimal presentations: their sets are exactly distinct cocircuits). Returns the
/// witness presentation, or nothing when m is not transversal.
inline std::optional<SetSystem> transversal_presentation(const Matroid& m,
                                                         long long budget = 2'000'000) {
    if (m.is_empty()) throw domain_error("transversal_presentation: empty matroid");
    if (m.k() == 0) return SetSystem(m.n(), {});
    const std::vector<GroundSubset> cocircs = cocircuits(m);
    const int c = static_cast<int>(cocircs.size());
    if (c < m.k()) return std::nullopt;

    long long combos = 1;
    for (int i = 0; i < m.k(); ++i) combos = combos * (c - i) / (i + 1);
    if (combos > budget)
        throw capability_error("transversal_presentation: " + std::to_string(combos) +
                               " cocircuit combinations exceed the search budget");

    std::optional<SetSystem> found;
    std::vector<GroundSubset> pick(static_cast<std::size_t>(m.k()));
    const std::function<bool(int, int)> rec = [&](int depth, int from) -> bool {
        if (depth == m.k()) {
            const SetSystem candidate(m.n(), pick);
            try {
                if (transversal_matroid(candidate) == m) {
                    found = candidate;
                    return true;
                }
            } catch (const rank_deficient_error&) {
            }
            return false;
        }
        for (int i = from; i < c; ++i) {
            pick[static_cast<std::size_t>(depth)] = cocircs[static_cast<std::size_t>(i)];
            if (rec(depth + 1, i + 1)) return true;
        }
        return false;
    };
    rec(0, 0);
    return found;
}

/// Gale order: sort both sets ascending by the rotated order starting at a and compare
/// position-wise.
inline bool gale_leq(GroundSubset i, GroundSubset j, int a, int n) {
    if (i.size() != j.size()) throw domain_error("gale_leq: sets of different sizes");
    std::vector<int> pi, pj;
    for (int e : i.elements()) pi.push_back(cyclic_position(e, a, n));
    for (int e : j.elements()) pj.push_back(cyclic_position(e, a, n));
    std::sort(pi.begin(), pi.end());
    std::sort(pj.begin(), pj.end());
    for (std::size_t t = 0; t < pi.size(); ++t)
        if (pi[t] > pj[t]) return false;
    return true;
}

/// Interval presentation of the lattice path matroid B(I,J) = { B : I <= B <= J }:
/// the l-th set is the interval [i_l, j_l]. Minimal and noncrossing.
inline SetSystem lattice_path_presentation(int n, GroundSubset i, GroundSubset j) {
    if (i.size() != j.size()) throw domain_error("lattice path: |I| != |J|");
    if (!i.subset_of(GroundSubset::full(n)) || !j.subset_of(GroundSubset::full(n)))
        throw domain_error("lattice path: sets outside ground set");
    const auto ie = i.elements(), je = j.elements();
    for (std::size_t t = 0; t < ie.size(); ++t)
        if (ie[t] > je[t]) throw domain_error("lattice path: I must be below J in Gale order");
    std::vector<GroundSubset> sets;
    for (std::size_t t = 0; t < ie.size(); ++t) {
        GroundSubset s{};
        for (int e = ie[t]; e <= je[t]; ++e) s = s.with(e);
        sets.push_back(s);
    }
    return SetSystem(n, std::move(sets));
}

/// The lattice path matroid itself, straight from the Gale sandwich.
inline Matroid lattice_path_matroid(int n, GroundSubset i, GroundSubset j) {
    const int k = i.size();
    std::vector<GroundSubset> bases;
    for_each_k_subset(n, k, [&](GroundSubset b) {
        if (gale_leq(i, b, 1, n) && gale_leq(b, j, 1, n)) bases.push_back(b);
    });
    return Matroid(n, k, std::move(bases));
}

} // namespace shapeloci
