#include "tmac/attack_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "tmac/errors.hpp"

namespace tmac::attack {

namespace {

// Distinct pseudorandom 16-byte message: the trial index guarantees
// distinctness, the generator supplies the random tail.
Bytes trial_message(std::uint64_t trial, std::mt19937_64& rng) {
    Bytes msg;
    msg.reserve(16);
    put_u64_be(msg, trial);
    put_u64_be(msg, rng());
    return msg;
}

// Leading `bits` bits of the MAC, right-aligned in a word.
std::uint64_t truncate_leading_bits(ByteView mac, unsigned bits) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i)
        v = v << 8 | (i < mac.size() ? mac[i] : 0);
    return v >> (64 - bits);
}

void check_truncation(unsigned bits) {
    if (bits < 8 || bits > 32)
        throw DomainError("truncation width must be in [8, 32] bits");
}

}  // namespace

double collision_probability_exact(std::uint64_t m, std::uint64_t k) {
    if (m < 1)
        throw DomainError("space size m must be at least 1");
    if (m > kMaxExactSpace)
        throw DomainError("space size m too large for exact evaluation");
    if (k > m)
        throw DomainError("trial count k must not exceed m");
    // log of the telescoping product prod_{i=0}^{k-1} (1 - i/m); the
    // factorial form is definitional, not algorithmic.
    double log_no_collision = 0.0;
    const double md = static_cast<double>(m);
    for (std::uint64_t i = 1; i < k; ++i)
        log_no_collision += std::log1p(-static_cast<double>(i) / md);
    return -std::expm1(log_no_collision);
}

double collision_probability_exact_bits(unsigned c, std::uint64_t k) {
    if (c < 1 || c > 24)
        throw DomainError("bit width must be in [1, 24] for exact evaluation");
    return collision_probability_exact(std::uint64_t{1} << c, k);
}

double collision_probability_approx(double m, double k) {
    if (m < 1)
        throw DomainError("space size m must be at least 1");
    if (k < 0)
        throw DomainError("trial count k must be non-negative");
    return -std::expm1(-k * k / (2.0 * m));
}

double trials_for_probability(double p, double m) {
    if (!(p > 0.0) || !(p < 1.0))
        throw DomainError("probability must lie strictly between 0 and 1");
    if (m < 1)
        throw DomainError("space size m must be at least 1");
    return std::sqrt(2.0 * m * std::log(1.0 / (1.0 - p)));
}

double attack_time_seconds(unsigned c, double hashrate_d) {
    if (c < 1)
        throw DomainError("digest width must be at least 1 bit");
    if (!(hashrate_d > 0.0))
        throw DomainError("hashrate must be positive");
    return kBirthdayHalfConstant * std::exp2(c / 2.0) / hashrate_d;
}

CollisionTrialsResult empirical_collision_trials(const TmacSuite& suite,
                                                 const SecretKey& key,
                                                 unsigned truncate_bits,
                                                 std::size_t runs,
                                                 std::uint64_t seed,
                                                 Timestamp frozen_now) {
    check_truncation(truncate_bits);
    if (runs < 1)
        throw DomainError("at least one run is required");

    // The counter is frozen for the whole experiment, so the derived key --
    // and with it the effective hash function under attack -- is fixed.
    TimeCounter counter = time_counter(suite.time_params, frozen_now);
    Bytes derived = totp(suite.hash, key, counter);

    CollisionTrialsResult result;
    result.truncate_bits = truncate_bits;
    result.runs = runs;
    result.seed = seed;
    result.expected_trials = kBirthdayHalfConstant * std::exp2(truncate_bits / 2.0);
    result.min_trials = std::numeric_limits<std::uint64_t>::max();

    double total = 0.0;
    for (std::size_t run = 0; run < runs; ++run) {
        std::mt19937_64 rng(seed + run);
        std::unordered_set<std::uint64_t> seen;
        std::uint64_t trials = 0;
        while (true) {
            ++trials;
            Bytes msg = trial_message(trials, rng);
            Bytes mac = hmac(suite.hash, derived, msg);
            if (!seen.insert(truncate_leading_bits(mac, truncate_bits)).second)
                break;
        }
        total += static_cast<double>(trials);
        result.min_trials = std::min(result.min_trials, trials);
        result.max_trials = std::max(result.max_trials, trials);
    }
    result.mean_trials = total / static_cast<double>(runs);

    secure_wipe(derived.data(), derived.size());
    return result;
}

WindowInvalidationRecord window_invalidates_attack(const TmacSuite& suite,
                                                   const SecretKey& key,
                                                   unsigned truncate_bits,
                                                   std::size_t corpus_size,
                                                   std::uint64_t seed,
                                                   const ClockSource& clock) {
    check_truncation(truncate_bits);
    if (corpus_size < 1)
        throw DomainError("corpus must contain at least one message");

    const Timestamp collected_at = clock.now();
    TimeCounter before = time_counter(suite.time_params, collected_at);
    TimeCounter after{before.value + 1};

    Bytes key_before = totp(suite.hash, key, before);
    Bytes key_after = totp(suite.hash, key, after);

    WindowInvalidationRecord record;
    record.corpus_size = corpus_size;
    record.window_before = before.value;
    record.window_after = after.value;
    record.truncate_bits = truncate_bits;

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < corpus_size; ++i) {
        Bytes msg = trial_message(i, rng);
        Bytes mac_before = hmac(suite.hash, key_before, msg);
        Bytes mac_after = hmac(suite.hash, key_after, msg);

        // Same window: the MAC is a pure function of the message.
        if (verify_mac_equal(hmac(suite.hash, key_before, msg), mac_before))
            ++record.full_width_valid_same_window;

        if (verify_mac_equal(mac_after, mac_before))
            ++record.full_width_still_valid;
        if (truncate_leading_bits(mac_after, truncate_bits) ==
            truncate_leading_bits(mac_before, truncate_bits))
            ++record.truncated_still_valid;
    }
    record.truncated_valid_fraction =
        static_cast<double>(record.truncated_still_valid) /
        static_cast<double>(corpus_size);

    secure_wipe(key_before.data(), key_before.size());
    secure_wipe(key_after.data(), key_after.size());
    return record;
}

}  // namespace tmac::attack
