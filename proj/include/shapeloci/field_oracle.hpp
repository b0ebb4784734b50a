#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"
#include "matroid.hpp"
#include "set_system.hpp"

namespace shapeloci {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

inline constexpr std::uint64_t kDefaultPrime = 2147483647ull; // 2^31 - 1

/// A random evaluation of the support-patterned matrix over F_p: entries are nonzero
/// exactly on the pattern, drawn deterministically from the seed.
class FieldMatrix {
public:
    FieldMatrix(SetSystem pattern, std::uint64_t seed, std::uint64_t p)
        : pattern_(std::move(pattern)), seed_(seed), p_(p) {
        if (!detail::is_prime_u64(p_)) throw domain_error("field modulus is not prime");
        if (p_ <= (1ull << 20)) throw domain_error("field modulus must exceed 2^20");
        std::mt19937_64 rng(seed_);
        entries_.assign(static_cast<std::size_t>(pattern_.k()),
                        std::vector<std::uint64_t>(static_cast<std::size_t>(pattern_.n()), 0));
        for (int i = 0; i < pattern_.k(); ++i)
            for (int j = 1; j <= pattern_.n(); ++j)
                if (pattern_.set(i).contains(j))
                    entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] =
                        1 + rng() % (p_ - 1);
    }

    const SetSystem& pattern() const { return pattern_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t modulus() const { return p_; }
    int k() const { return pattern_.k(); }
    int n() const { return pattern_.n(); }

    std::uint64_t entry(int row, int col) const {
        return entries_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col - 1)];
    }

private:
    SetSystem pattern_;
    std::uint64_t seed_;
    std::uint64_t p_;
    std::vector<std::vector<std::uint64_t>> entries_;
};

inline FieldMatrix random_evaluation(const SetSystem& sys, std::uint64_t seed,
                                     std::uint64_t p = kDefaultPrime) {
    return FieldMatrix(sys, seed, p);
}

namespace detail {

/// Gaussian elimination over F_p; returns the determinant of a square matrix, or the
/// rank of a rectangular one through `rank_out`.
inline std::uint64_t eliminate(std::vector<std::vector<std::uint64_t>>& a, std::uint64_t p,
                               int* rank_out) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a.front().size();
    std::uint64_t det = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot][c] == 0) ++pivot;
        if (pivot == rows) {
            det = 0;
            continue;
        }
        if (pivot != r) {
            std::swap(a[pivot], a[r]);
            det = p - det; // sign flip
        }
        det = mulmod(det, a[r][c], p);
        const std::uint64_t inv = powmod(a[r][c], p - 2, p);
        for (std::size_t rr = r + 1; rr < rows; ++rr) {
            if (a[rr][c] == 0) continue;
            const std::uint64_t f = mulmod(a[rr][c], inv, p);
            for (std::size_t cc = c; cc < cols; ++cc) {
                const std::uint64_t sub = mulmod(f, a[r][cc], p);
                a[rr][cc] = (a[rr][cc] + p - sub) % p;
            }
        }
        ++r;
    }
    if (rank_out) *rank_out = static_cast<int>(r);
    return det % p;
}

} // namespace detail

/// Determinant of the k columns indexed by I, mod p.
inline std::uint64_t plucker(const FieldMatrix& m, GroundSubset i) {
    if (i.size() != m.k()) throw domain_error("plucker: |I| != k");
    std::vector<std::vector<std::uint64_t>> sub;
    for (int r = 0; r < m.k(); ++r) {
        std::vector<std::uint64_t> row;
        for (int c : i.elements()) row.push_back(m.entry(r, c));
        sub.push_back(std::move(row));
    }
    return detail::eliminate(sub, m.modulus(), nullptr);
}

/// Rank of the columns {i..j} over F_p.
inline int field_interval_rank(const FieldMatrix& m, int i, int j) {
    std::vector<std::vector<std::uint64_t>> sub;
    for (int r = 0; r < m.k(); ++r) {
        std::vector<std::uint64_t> row;
        for (int c = i; c <= j; ++c) row.push_back(m.entry(r, c));
        sub.push_back(std::move(row));
    }
    int rank = 0;
    detail::eliminate(sub, m.modulus(), &rank);
    return rank;
}

/// The matroid represented by the evaluated matrix: bases are the index sets with a
/// nonvanishing determinant. One-sided: a nonzero determinant certifies a basis, a
/// zero may be a coincidence of the evaluation.
inline Matroid matroid_from_matrix(const FieldMatrix& m) {
    std::vector<GroundSubset> bases;
    for_each_k_subset(m.n(), m.k(), [&](GroundSubset i) {
        if (plucker(m, i) != 0) bases.push_back(i);
    });
    if (bases.empty())
        throw rank_deficient_error("matrix evaluation has rank below k", 0);
    return Matroid(m.n(), m.k(), std::move(bases));
}

/// One signed term of the matching expansion: the product of the matrix entries at
/// (row, column) pairs, with the sign of the column assignment as a permutation of I.
struct MatchingTerm {
    int sign = 1;
    std::vector<std::pair<int, int>> entries; // (0-based row, 1-based column)
};

/// The formal expansion of the I-th Plücker coordinate over the matchings of the
/// bipartite graph: Delta_I = sum over matchings M of sgn(M) * prod of weights.
/// Throws capability_error when the number of matchings exceeds the budget.
inline std::vector<MatchingTerm> plucker_matching_expansion(const SetSystem& sys, GroundSubset i,
                                                            long long budget = 10000) {
    if (i.size() != sys.k()) throw domain_error("plucker_matching_expansion: |I| != k");
    const std::vector<int> cols = i.elements();
    std::vector<MatchingTerm> out;
    std::vector<int> assignment(static_cast<std::size_t>(sys.k()), -1); // row -> col position
    std::vector<char> used(cols.size(), 0);
    const std::function<void(int)> rec = [&](int row) {
        if (row == sys.k()) {
            // Sign of the permutation row -> position.
            int sign = 1;
            for (int x = 0; x < sys.k(); ++x)
                for (int y = x + 1; y < sys.k(); ++y)
                    if (assignment[static_cast<std::size_t>(x)] >
                        assignment[static_cast<std::size_t>(y)])
                        sign = -sign;
            MatchingTerm term;
            term.sign = sign;
            for (int r = 0; r < sys.k(); ++r)
                term.entries.push_back(
                    {r, cols[static_cast<std::size_t>(assignment[static_cast<std::size_t>(r)])]});
            out.push_back(std::move(term));
            if (static_cast<long long>(out.size()) > budget)
                throw capability_error("plucker_matching_expansion: matching count exceeds budget");
            return;
        }
        for (std::size_t pos = 0; pos < cols.size(); ++pos) {
            if (used[pos] || !sys.set(row).contains(cols[pos])) continue;
            used[pos] = 1;
            assignment[static_cast<std::size_t>(row)] = static_cast<int>(pos);
            rec(row + 1);
            used[pos] = 0;
        }
    };
    rec(0);
    return out;
}

/// Evaluates an expansion on a concrete matrix; must agree with plucker().
inline std::uint64_t evaluate_expansion(const std::vector<MatchingTerm>& terms,
                                        const FieldMatrix& m) {
    const std::uint64_t p = m.modulus();
    std::uint64_t total = 0;
    for (const MatchingTerm& t : terms) {
        std::uint64_t prod = 1;
        for (auto [row, col] : t.entries) prod = detail::mulmod(prod, m.entry(row, col), p);
        total = (t.sign > 0) ? (total + prod) % p : (total + p - prod) % p;
    }
    return total;
}

/// Union of basis sets over several seeds; matches the matching-based matroid up to
/// the one-sided Schwartz-Zippel error, which the union drives below 1e-6 at desk
/// scale.
inline Matroid matroid_from_seeds(const SetSystem& sys, const std::vector<std::uint64_t>& seeds,
                                  std::uint64_t p = kDefaultPrime) {
    std::vector<GroundSubset> bases;
    for (std::uint64_t seed : seeds) {
        const FieldMatrix m = random_evaluation(sys, seed, p);
        for_each_k_subset(sys.n(), sys.k(), [&](GroundSubset i) {
            if (plucker(m, i) != 0) bases.push_back(i);
        });
    }
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    if (bases.empty()) throw rank_deficient_error("all seed evaluations have rank below k", 0);
    return Matroid(sys.n(), sys.k(), std::move(bases));
}

} // namespace shapeloci
