#pragma once

#include <stdexcept>
#include <string>

namespace shapeloci {

/// Base class for all library errors.
class error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-range elements, malformed structures, failed preconditions.
class domain_error : public error {
    using error::error;
};

/// A set system whose bipartite graph admits no matching saturating all sets.
class rank_deficient_error : public error {
public:
    rank_deficient_error(const std::string& msg, int achieved)
        : error(msg), achieved_rank(achieved) {}

    int achieved_rank;
};

/// Instance exceeds the exact-computation budget (ground set too large, search too wide).
class capability_error : public error {
    using error::error;
};

/// A computation contradicted an identity the library relies on. Never expected to
/// fire; if it does, the finding itself is the interesting output (exit code 2 in the CLI).
class anomaly_error : public error {
    using error::error;
};

} // namespace shapeloci
