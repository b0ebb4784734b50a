#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"

namespace shapeloci {

/// A matroid given by its explicit list of bases (k-subsets of [n]).
///
/// Construction precomputes the rank of every subset of [n], so rank queries are O(1)
/// and the power-set sweeps used by flats/circuits/expected-codimension stay cheap.
/// A matroid with an empty basis list is a valid "probe" value (is_empty() == true);
/// infeasible configurations produce it instead of throwing.
///
/// Values are immutable after construction; all operations on them are pure.
class Matroid {
public:
    Matroid(int n, int k, std::vector<GroundSubset> bases) : n_(n), k_(k), bases_(std::move(bases)) {
        require_ground_size(n_);
        if (k_ < 0 || k_ > n_) throw domain_error("matroid rank outside [0,n]");
        const GroundSubset all = GroundSubset::full(n_);
        for (GroundSubset b : bases_) {
            if (!b.subset_of(all)) throw domain_error("basis " + b.to_string() + " outside ground set");
            if (b.size() != k_)
                throw domain_error("basis " + b.to_string() + " does not have size " + std::to_string(k_));
        }
        std::sort(bases_.begin(), bases_.end());
        bases_.erase(std::unique(bases_.begin(), bases_.end()), bases_.end());
        build_rank_table();
    }

    /// The no-bases error value on ground set [n].
    static Matroid empty(int n) { return Matroid(n, 0, {}, EmptyTag{}); }

    /// Uniform matroid U(k,n): every k-subset is a basis.
    static Matroid uniform(int k, int n) { return Matroid(n, k, k_subsets(n, k)); }

    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<GroundSubset>& bases() const { return bases_; }
    bool is_empty() const { return bases_.empty(); }

    bool is_basis(GroundSubset b) const {
        return std::binary_search(bases_.begin(), bases_.end(), b);
    }

    /// Matroid rank of I: size of the largest subset of I contained in a basis.
    int rank(GroundSubset i) const {
        if (!i.subset_of(GroundSubset::full(n_)))
            throw domain_error("rank: " + i.to_string() + " contains elements outside [1," +
                               std::to_string(n_) + "]");
        return rank_[i.bits()];
    }

    bool independent(GroundSubset i) const { return rank(i) == i.size(); }

    bool operator==(const Matroid& o) const {
        return n_ == o.n_ && k_ == o.k_ && bases_ == o.bases_;
    }

private:
    struct EmptyTag {};
    Matroid(int n, int k, std::vector<GroundSubset> bases, EmptyTag)
        : n_(n), k_(k), bases_(std::move(bases)) {
        require_ground_size(n_);
        rank_.assign(std::size_t{1} << n_, 0);
    }

    void build_rank_table() {
        const std::size_t words = std::size_t{1} << n_;
        std::vector<std::uint8_t> indep(words, 0);
        for (GroundSubset b : bases_)
            for_each_subset_of(b, [&](GroundSubset s) { indep[s.bits()] = 1; });
        rank_.assign(words, 0);
        for (std::uint32_t s = 1; s < words; ++s) {
            if (indep[s]) {
                rank_[s] = static_cast<std::uint8_t>(std::popcount(s));
            } else {
                // Some maximal independent subset of s omits an element of s.
                std::uint8_t best = 0;
                for (std::uint32_t b = s; b != 0; b &= b - 1)
                    best = std::max(best, rank_[s & ~(b & -b)]);
                rank_[s] = best;
            }
        }
    }

    int n_;
    int k_;
    std::vector<GroundSubset> bases_;
    std::vector<std::uint8_t> rank_;
};

/// Symmetric basis-exchange: for all bases S, T and i in S\T there is j in T\S with
/// both S\i+j and T\j+i bases.
inline bool is_basis_exchange_valid(const Matroid& m) {
    const auto& bs = m.bases();
    for (GroundSubset s : bs) {
        for (GroundSubset t : bs) {
            for (int i : (s - t).elements()) {
                bool found = false;
                for (int j : (t - s).elements()) {
                    if (m.is_basis(s.without(i).with(j)) && m.is_basis(t.without(j).with(i))) {
                        found = true;
                        break;
                    }
                }
                if (!found) return false;
            }
        }
    }
    return true;
}

/// All flats: F with rank(F+x) = rank(F)+1 for every x outside F.
inline std::vector<GroundSubset> flats(const Matroid& m) {
    std::vector<GroundSubset> out;
    for_each_subset_of(GroundSubset::full(m.n()), [&](GroundSubset f) {
        const int r = m.rank(f);
        for (int x = 1; x <= m.n(); ++x) {
            if (f.contains(x)) continue;
            if (m.rank(f.with(x)) != r + 1) return;
        }
        out.push_back(f);
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Minimal dependent sets.
inline std::vector<GroundSubset> circuits(const Matroid& m) {
    std::vector<GroundSubset> out;
    for_each_subset_of(GroundSubset::full(m.n()), [&](GroundSubset c) {
        if (c.empty() || m.independent(c)) return;
        for (int x : c.elements())
            if (!m.independent(c.without(x))) return;
        out.push_back(c);
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Flats that are unions of the circuits they contain. Equivalently: flats whose
/// restriction has no coloop, i.e. rank(F\f) = rank(F) for every f in F.
inline std::vector<GroundSubset> cyclic_flats(const Matroid& m) {
    std::vector<GroundSubset> out;
    for (GroundSubset f : flats(m)) {
        bool cyclic = true;
        const int r = m.rank(f);
        for (int x : f.elements()) {
            if (m.rank(f.without(x)) != r) {
                cyclic = false;
                break;
            }
        }
        if (cyclic) out.push_back(f);
    }
    return out;
}

inline Matroid dual(const Matroid& m) {
    std::vector<GroundSubset> duals;
    duals.reserve(m.bases().size());
    for (GroundSubset b : m.bases()) duals.push_back(b.complement_in(m.n()));
    return Matroid(m.n(), m.n() - m.k(), std::move(duals));
}

/// Cocircuits: minimal sets meeting every basis; the circuits of the dual.
inline std::vector<GroundSubset> cocircuits(const Matroid& m) { return circuits(dual(m)); }

/// A minor together with the order-preserving embedding back into the parent ground
/// set: embedding[e-1] is the parent label of the minor's element e.
struct Minor {
    Matroid matroid;
    std::vector<int> embedding;

    GroundSubset to_parent(GroundSubset s) const {
        GroundSubset out{};
        for (int e : s.elements()) out = out.with(embedding[static_cast<std::size_t>(e) - 1]);
        return out;
    }

    GroundSubset from_parent(GroundSubset s) const {
        GroundSubset out{};
        for (std::size_t i = 0; i < embedding.size(); ++i)
            if (s.contains(embedding[i])) out = out.with(static_cast<int>(i) + 1);
        return out;
    }
};

/// Deletion of `del` followed by contraction of `con` (disjoint). Contraction of a
/// dependent set fixes the lexicographically least maximal independent subset; the
/// resulting matroid does not depend on that choice. Ground elements are relabelled
/// to 1..n' preserving the inherited order.
inline Minor minor(const Matroid& m, GroundSubset del, GroundSubset con) {
    const GroundSubset all = GroundSubset::full(m.n());
    if (!del.subset_of(all) || !con.subset_of(all))
        throw domain_error("minor: delete/contract sets outside ground set");
    if (del.intersects(con)) throw domain_error("minor: delete and contract sets overlap");

    GroundSubset d{}; // lex-least maximal independent subset of con
    for (int e : con.elements())
        if (m.rank(d.with(e)) == d.size() + 1) d = d.with(e);

    const GroundSubset keep = all - del - con;
    const std::vector<int> embedding = keep.elements();
    const int np = keep.size();
    const int kp = m.rank(all - del) - d.size();

    std::vector<GroundSubset> bases;
    for_each_k_subset(np, kp, [&](GroundSubset x) {
        GroundSubset parent{};
        for (int e : x.elements()) parent = parent.with(embedding[static_cast<std::size_t>(e) - 1]);
        if (m.rank(parent | d) == kp + d.size()) bases.push_back(x);
    });
    return Minor{Matroid(np, kp, std::move(bases)), embedding};
}

inline Minor restriction(const Matroid& m, GroundSubset to) {
    return minor(m, GroundSubset::full(m.n()) - to, GroundSubset{});
}

/// Ground sets are concatenated: the right summand is shifted past the left one.
inline Matroid direct_sum(const Matroid& a, const Matroid& b) {
    require_ground_size(a.n() + b.n());
    std::vector<GroundSubset> bases;
    bases.reserve(a.bases().size() * b.bases().size());
    for (GroundSubset x : a.bases())
        for (GroundSubset y : b.bases())
            bases.push_back(GroundSubset(x.bits() | (y.bits() << a.n())));
    return Matroid(a.n() + b.n(), a.k() + b.k(), std::move(bases));
}

/// Finest partition of [n] into blocks on which the matroid splits as a direct sum.
/// Two elements are related when some circuit contains both; loops and coloops end up
/// as singletons. Blocks are returned sorted by minimum element.
inline std::vector<GroundSubset> connected_components(const Matroid& m) {
    std::vector<int> parent(static_cast<std::size_t>(m.n()) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (GroundSubset c : circuits(m)) {
        const auto elems = c.elements();
        for (std::size_t i = 1; i < elems.size(); ++i) {
            const int ra = find(elems[0]), rb = find(elems[i]);
            if (ra != rb) parent[static_cast<std::size_t>(rb)] = ra;
        }
    }
    std::vector<GroundSubset> blocks(static_cast<std::size_t>(m.n()) + 1);
    for (int e = 1; e <= m.n(); ++e) {
        const std::size_t r = static_cast<std::size_t>(find(e));
        blocks[r] = blocks[r].with(e);
    }
    std::vector<GroundSubset> out;
    for (const GroundSubset& b : blocks)
        if (!b.empty()) out.push_back(b);
    std::sort(out.begin(), out.end(), [](GroundSubset a, GroundSubset b) {
        return a.min_element() < b.min_element();
    });
    return out;
}

inline bool is_connected(const Matroid& m) {
    return m.n() == 0 || connected_components(m).size() == 1;
}

/// Flats F (proper, nonempty) whose restriction and contraction are both connected.
/// These index the facets of the matroid polytope of a connected matroid.
inline std::vector<GroundSubset> flacets(const Matroid& m) {
    if (!is_connected(m))
        throw domain_error("flacets: matroid is disconnected; apply per connected component");
    std::vector<GroundSubset> out;
    const GroundSubset all = GroundSubset::full(m.n());
    for (GroundSubset f : flats(m)) {
        if (f.empty() || f == all) continue;
        if (!is_connected(restriction(m, f).matroid)) continue;
        if (!is_connected(minor(m, GroundSubset{}, f).matroid)) continue;
        out.push_back(f);
    }
    return out;
}

} // namespace shapeloci
