#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "pivots.hpp"
#include "positroid.hpp"
#include "set_system.hpp"

namespace shapeloci {

namespace detail {

/// The 2n dihedral maps of [n] as element permutations (perm[e-1] = image of e).
inline std::vector<std::vector<int>> dihedral_maps(int n) {
    std::vector<std::vector<int>> maps;
    for (int reflect = 0; reflect < 2; ++reflect) {
        for (int t = 0; t < n; ++t) {
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int e = 1; e <= n; ++e) {
                const int base = reflect ? (n + 1 - e) : e;
                perm[static_cast<std::size_t>(e - 1)] = (base - 1 + t) % n + 1;
            }
            maps.push_back(std::move(perm));
        }
    }
    return maps;
}

inline GroundSubset map_subset(GroundSubset s, const std::vector<int>& perm) {
    GroundSubset out{};
    for (int e : s.elements()) out = out.with(perm[static_cast<std::size_t>(e - 1)]);
    return out;
}

} // namespace detail

/// Canonical key of a system under simultaneous rotation/reflection of [n] and
/// permutation of the sets: the least sorted mask vector over the dihedral orbit.
inline std::vector<GroundSubset> canonical_key(const SetSystem& sys) {
    std::vector<GroundSubset> best = sys.sorted_sets();
    for (const auto& perm : detail::dihedral_maps(sys.n())) {
        std::vector<GroundSubset> image;
        image.reserve(sys.sets().size());
        for (GroundSubset s : sys.sets()) image.push_back(detail::map_subset(s, perm));
        std::sort(image.begin(), image.end());
        if (image < best) best = image;
    }
    return best;
}

inline bool is_canonical(const SetSystem& sys) { return canonical_key(sys) == sys.sorted_sets(); }

/// Enumerates minimal presentations on [n] with exactly k distinct sets covering all
/// of [n] (uncovered elements would be loops, which affect neither crossings nor
/// positroidness and are covered at smaller n). With canonical_only, keeps one system
/// per dihedral orbit.
template <typename F>
void enumerate_minimal_systems(int n, int k, bool canonical_only, F&& f) {
    require_ground_size(n);
    const std::uint32_t full = GroundSubset::full(n).bits();
    std::vector<std::uint32_t> pick(static_cast<std::size_t>(k));
    const std::function<void(int, std::uint32_t, std::uint32_t)> rec =
        [&](int depth, std::uint32_t from, std::uint32_t covered) {
            if (depth == k) {
                if (covered != full) return;
                std::vector<GroundSubset> sets;
                sets.reserve(static_cast<std::size_t>(k));
                for (std::uint32_t m : pick) sets.push_back(GroundSubset(m));
                SetSystem sys(n, std::move(sets));
                if (!satisfies_minimality_inequalities(sys)) return;
                if (canonical_only && !is_canonical(sys)) return;
                f(sys);
                return;
            }
            // Remaining sets cannot cover what the largest remaining mask misses.
            for (std::uint32_t m = from; m <= full; ++m) {
                pick[static_cast<std::size_t>(depth)] = m;
                rec(depth + 1, m + 1, covered | m);
            }
        };
    rec(0, 1, 0);
}

struct ConjectureRecord {
    SetSystem system;
    bool positroid = false;
    std::optional<int> noncrossing_a; // least a with gale_minimal(system, a) noncrossing
};

struct ConjectureSummary {
    long long systems = 0;
    long long positroids = 0;
    long long counterexamples = 0;
    long long wall_ms = 0;
};

struct RandomMode {
    std::uint64_t seed = 0;
    long long trials = 0;
};

/// Tests one system against the refined noncrossing-presentation conjecture.
inline ConjectureRecord test_conjecture_on(const SetSystem& sys) {
    ConjectureRecord rec{sys, false, std::nullopt};
    rec.positroid = is_positroid(transversal_matroid(sys));
    if (!rec.positroid) return rec;
    for (int a = 1; a <= sys.n(); ++a) {
        if (is_noncrossing(gale_minimal(sys, a))) {
            rec.noncrossing_a = a;
            break;
        }
    }
    return rec;
}

/// Sweeps every canonical minimal presentation with k <= max_k sets on n <= max_n
/// elements (or random samples), asking for each positroid whether some rotation a
/// makes the a-Gale minimization noncrossing. Counterexamples are positroids with no
/// such a. Work is split across threads; records are emitted in enumeration order.
inline ConjectureSummary verify_conjecture(
    int max_n, int max_k, std::optional<RandomMode> random_mode = std::nullopt,
    unsigned threads = std::thread::hardware_concurrency(),
    const std::function<void(const ConjectureRecord&)>& emit = {},
    const std::function<bool(const SetSystem&)>& skip = {}) {
    const auto start = std::chrono::steady_clock::now();
    ConjectureSummary summary;

    auto process_batch = [&](const std::vector<SetSystem>& batch) {
        std::vector<std::optional<ConjectureRecord>> results(batch.size());
        const unsigned workers = std::max(1u, std::min<unsigned>(threads, batch.size()));
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            while (true) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= batch.size()) return;
                results[idx] = test_conjecture_on(batch[idx]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
        for (const auto& rec : results) {
            ++summary.systems;
            if (rec->positroid) {
                ++summary.positroids;
                if (!rec->noncrossing_a) ++summary.counterexamples;
            }
            if (emit) emit(*rec);
        }
    };

    if (!random_mode) {
        for (int n = 1; n <= max_n; ++n) {
            for (int k = 1; k <= max_k; ++k) {
                std::vector<SetSystem> batch;
                enumerate_minimal_systems(n, k, /*canonical_only=*/true, [&](const SetSystem& s) {
                    if (skip && skip(s)) return;
                    batch.push_back(s);
                });
                process_batch(batch);
            }
        }
    } else {
        std::mt19937_64 rng(random_mode->seed);
        std::vector<SetSystem> batch;
        long long attempts = 0;
        const long long attempt_cap = random_mode->trials * 1000 + 1000;
        while (static_cast<long long>(batch.size()) < random_mode->trials &&
               attempts < attempt_cap) {
            ++attempts;
            const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
            const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_k));
            std::vector<GroundSubset> sets;
            bool distinct = true;
            for (int i = 0; i < k && distinct; ++i) {
                GroundSubset s{};
                while (s.empty()) {
                    for (int e = 1; e <= n; ++e)
                        if (rng() % 2 == 0) s = s.with(e);
                }
                for (int j = 0; j < i; ++j)
                    if (sets[static_cast<std::size_t>(j)] == s) distinct = false;
                sets.push_back(s);
            }
            if (!distinct) continue;
            SetSystem sys(n, std::move(sets));
            if (!satisfies_minimality_inequalities(sys)) continue;
            if (skip && skip(sys)) continue;
            batch.push_back(std::move(sys));
        }
        process_batch(batch);
    }

    summary.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return summary;
}

} // namespace shapeloci
