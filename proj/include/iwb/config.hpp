#pragma once

// Run configuration and the imaginary quadratic field descriptor.

#include <cstdlib>
#include <string>
#include <thread>

#include "iwb/arith.hpp"

namespace iwb {

/// Smallest truncation degree holding prod_{k <= n_max} Phi_{p^k}(1+X).
inline long min_trunc_degree(long p, long n_max) { return ipow(p, static_cast<int>(n_max)) - 1; }

struct RunConfig {
    long p = 3;
    long n_max = 6;
    long N = 30;
    long D = 0;  // 0: use min_trunc_degree(p, n_max)
    std::string cache_dir;
    int workers = 1;
    bool strict_paper_hypotheses = false;

    long trunc_degree() const { return D > 0 ? D : min_trunc_degree(p, n_max); }

    void validate() const {
        require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, "p must be an odd prime");
        require(n_max >= 2, ErrorKind::InvalidArgument, "n_max must be at least 2");
        require(n_max <= 9, ErrorKind::InvalidArgument, "n_max above 9 is not supported");
        require(N >= 10, ErrorKind::InvalidArgument, "precision N must be at least 10");
        require(trunc_degree() >= min_trunc_degree(p, n_max), ErrorKind::InvalidArgument,
                "truncation degree must be at least " + std::to_string(min_trunc_degree(p, n_max)));
        require(workers >= 1, ErrorKind::InvalidArgument, "worker count must be positive");
    }

    /// WORKBENCH_CACHE, else ./.iwb-cache.
    static std::string default_cache_dir() {
        const char* env = std::getenv("WORKBENCH_CACHE");
        return env && *env ? std::string(env) : std::string(".iwb-cache");
    }

    static int default_workers() {
        unsigned n = std::thread::hardware_concurrency();
        return n == 0 ? 1 : static_cast<int>(n);
    }
};

/// K = Q(sqrt D), D a negative fundamental discriminant.
struct FieldSpec {
    long D = -3;

    explicit FieldSpec(long d) : D(d) {
        require(D < 0, ErrorKind::InvalidArgument, "K must be imaginary quadratic");
        require(is_fundamental_discriminant(D), ErrorKind::InvalidArgument,
                std::to_string(D) + " is not a fundamental discriminant");
    }

    bool p_splits(long p) const { return kronecker(D, p) == 1; }

    /// With strict hypotheses p must split in K.
    void check_prime(long p, bool strict) const {
        if (strict)
            require(p_splits(p), ErrorKind::UnsupportedHypothesis,
                    std::to_string(p) + " does not split in Q(sqrt " + std::to_string(D) + ")");
    }
};

}  // namespace iwb
