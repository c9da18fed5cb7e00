#pragma once

#include <cstdint>

#include "tmac/suite.hpp"

namespace tmac::attack {

// sqrt(2 ln 2) at the precision commonly quoted for the birthday bound.
inline constexpr double kBirthdayHalfConstant = 1.1774;

// Julian year.
inline constexpr double kSecondsPerYear = 31'557'600.0;

// Hashes per second of the fastest surveyed mining ASIC; default d.
inline constexpr double kReferenceHashrate = 7722e9;

// Largest space size for which the exact product is evaluated.
inline constexpr std::uint64_t kMaxExactSpace = std::uint64_t{1} << 24;

// Exact birthday collision probability 1 - prod_{i=0}^{k-1}(1 - i/m),
// evaluated as a telescoping product in log space (never literal
// factorials). Throws DomainError when m < 1, k > m or m > kMaxExactSpace.
double collision_probability_exact(std::uint64_t m, std::uint64_t k);

// Bit-width form with m = 2^c; c <= 24.
double collision_probability_exact_bits(unsigned c, std::uint64_t k);

// 1 - exp(-k^2 / (2m)). Throws DomainError when m < 1 or k < 0.
double collision_probability_approx(double m, double k);

// Smallest trial count reaching collision probability p:
// sqrt(2 m ln(1/(1-p))). m may be huge (pass std::exp2(c) for bit widths).
// Throws DomainError unless 0 < p < 1 and m >= 1.
double trials_for_probability(double p, double m);

// Expected wall time of a birthday attack on a c-bit digest at d hashes
// per second: 1.1774 * 2^(c/2) / d. Throws DomainError on d <= 0 or c < 1.
double attack_time_seconds(unsigned c, double hashrate_d);

inline double seconds_to_years(double seconds) { return seconds / kSecondsPerYear; }

struct CollisionTrialsResult {
    unsigned truncate_bits = 0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    double mean_trials = 0.0;
    double expected_trials = 0.0;  // 1.1774 * 2^(c/2)
    std::uint64_t min_trials = 0;
    std::uint64_t max_trials = 0;
};

// Desk-scale birthday attack on truncated MACs: per run, feeds distinct
// pseudorandom messages through the suite's MAC at a frozen clock, keeps the
// leading truncate_bits bits, and counts trials until the first repeat.
// Deterministic for a fixed seed. truncate_bits in [8, 32].
CollisionTrialsResult empirical_collision_trials(const TmacSuite& suite,
                                                 const SecretKey& key,
                                                 unsigned truncate_bits,
                                                 std::size_t runs,
                                                 std::uint64_t seed,
                                                 Timestamp frozen_now = 0);

struct WindowInvalidationRecord {
    std::size_t corpus_size = 0;
    std::uint64_t window_before = 0;
    std::uint64_t window_after = 0;
    // Revalidation inside the collection window: sanity check, expected
    // to equal corpus_size.
    std::size_t full_width_valid_same_window = 0;
    // Full-width survivors after the counter increment: expected 0.
    std::size_t full_width_still_valid = 0;
    unsigned truncate_bits = 0;
    std::size_t truncated_still_valid = 0;
    double truncated_valid_fraction = 0.0;
};

// Collects a (message, mac) corpus in the clock's current window, then
// recomputes every MAC one step past the window boundary. Full-width MACs
// all stop verifying; truncated MACs survive only at the ~2^-c chance rate.
WindowInvalidationRecord window_invalidates_attack(const TmacSuite& suite,
                                                   const SecretKey& key,
                                                   unsigned truncate_bits,
                                                   std::size_t corpus_size,
                                                   std::uint64_t seed,
                                                   const ClockSource& clock);

}  // namespace tmac::attack
