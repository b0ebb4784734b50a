#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace shapeloci {

/// Largest supported ground set. Full power-set sweeps are quadratic-exponential in n,
/// so everything in this library is sized for desk-scale exact computation.
inline constexpr int kMaxGroundSize = 20;

/// A subset of the ground set [n] = {1, ..., n}, stored as a bitmask with element e
/// on bit e-1. Elements are always 1-indexed externally. The value does not carry n;
/// operations that need the ambient size take it as a parameter.
class GroundSubset {
public:
    constexpr GroundSubset() = default;
    constexpr explicit GroundSubset(std::uint32_t bits) : bits_(bits) {}

    static GroundSubset from_elements(const std::vector<int>& elems) {
        std::uint32_t b = 0;
        for (int e : elems) {
            if (e < 1 || e > kMaxGroundSize)
                throw domain_error("element " + std::to_string(e) + " outside [1," +
                                   std::to_string(kMaxGroundSize) + "]");
            b |= bit_of(e);
        }
        return GroundSubset(b);
    }

    static constexpr GroundSubset single(int e) { return GroundSubset(bit_of(e)); }

    /// The full set {1, ..., n}.
    static constexpr GroundSubset full(int n) {
        return GroundSubset(n == 0 ? 0u : (n >= 32 ? ~0u : ((1u << n) - 1u)));
    }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(int e) const { return (bits_ & bit_of(e)) != 0; }
    constexpr bool subset_of(GroundSubset o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool intersects(GroundSubset o) const { return (bits_ & o.bits_) != 0; }

    constexpr GroundSubset with(int e) const { return GroundSubset(bits_ | bit_of(e)); }
    constexpr GroundSubset without(int e) const { return GroundSubset(bits_ & ~bit_of(e)); }
    constexpr GroundSubset complement_in(int n) const {
        return GroundSubset(~bits_ & full(n).bits_);
    }

    friend constexpr GroundSubset operator|(GroundSubset a, GroundSubset b) {
        return GroundSubset(a.bits_ | b.bits_);
    }
    friend constexpr GroundSubset operator&(GroundSubset a, GroundSubset b) {
        return GroundSubset(a.bits_ & b.bits_);
    }
    friend constexpr GroundSubset operator-(GroundSubset a, GroundSubset b) {
        return GroundSubset(a.bits_ & ~b.bits_);
    }

    /// Elements in ascending order, 1-indexed.
    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint32_t b = bits_; b != 0; b &= b - 1)
            out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    int min_element() const { return empty() ? 0 : std::countr_zero(bits_) + 1; }

    /// True when the subset is contiguous in the cyclic order of [n] (the full set and
    /// singletons count; the empty set does not).
    bool is_cyclic_interval(int n) const {
        if (empty()) return false;
        const std::uint32_t all = full(n).bits_;
        if (bits_ == all) return true;
        // Exactly one 0->1 transition around the cycle.
        int transitions = 0;
        for (int e = 1; e <= n; ++e) {
            const int next = (e % n) + 1;
            if (!contains(e) && contains(next)) ++transitions;
        }
        return transitions == 1;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int e : elements()) {
            if (!first) s += ",";
            s += std::to_string(e);
            first = false;
        }
        return s + "}";
    }

    auto operator<=>(const GroundSubset&) const = default;

private:
    static constexpr std::uint32_t bit_of(int e) { return 1u << (e - 1); }

    std::uint32_t bits_ = 0;
};

inline void require_ground_size(int n) {
    if (n < 0 || n > kMaxGroundSize)
        throw capability_error("ground set size " + std::to_string(n) + " outside [0," +
                               std::to_string(kMaxGroundSize) + "]");
}

/// Calls f on every size-k subset of [n], ascending as bitmasks (Gosper's hack).
template <typename F>
void for_each_k_subset(int n, int k, F&& f) {
    require_ground_size(n);
    if (k < 0 || k > n) return;
    if (k == 0) {
        f(GroundSubset{});
        return;
    }
    const std::uint32_t limit = GroundSubset::full(n).bits();
    std::uint32_t v = (1u << k) - 1u;
    while (v <= limit) {
        f(GroundSubset(v));
        const std::uint32_t t = v | (v - 1);
        const std::uint32_t next = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        if (next <= v) break; // overflow wrap
        v = next;
    }
}

inline std::vector<GroundSubset> k_subsets(int n, int k) {
    std::vector<GroundSubset> out;
    for_each_k_subset(n, k, [&](GroundSubset s) { out.push_back(s); });
    return out;
}

/// Calls f on every subset of the given support mask, ascending as bitmasks.
template <typename F>
void for_each_subset_of(GroundSubset support, F&& f) {
    const std::uint32_t m = support.bits();
    std::uint32_t s = 0;
    while (true) {
        f(GroundSubset(s));
        if (s == m) break;
        s = (s - m) & m; // next subset of m
    }
}

/// Cyclic successor in [n]: n maps to 1.
inline constexpr int cyclic_next(int e, int n) { return e % n + 1; }

/// Position of x in the rotated order a < a+1 < ... < n < 1 < ... < a-1 (0-based).
inline constexpr int cyclic_position(int x, int a, int n) {
    return ((x - a) % n + n) % n;
}

} // namespace shapeloci
