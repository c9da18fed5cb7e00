#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tmac/envelope.hpp"

namespace tmac {

enum class Outcome {
    Accept,
    ReplayDetected,
    InvalidMac,
    IdentifierNotAssigned,
    MalformedEnvelope,
};

std::string_view outcome_name(Outcome o);
std::optional<Outcome> outcome_from_name(std::string_view name);

struct VerificationOutcome {
    Outcome outcome;
    // Counter whose window matched; set on Accept.
    std::optional<TimeCounter> matched;

    bool accepted() const noexcept { return outcome == Outcome::Accept; }
};

// Per-counter sets of retained identifiers. check_and_insert is the single
// linearization point of concurrent verification: for a given
// (counter, identifier) at most one caller ever observes an insert.
class IdentifierCache {
public:
    explicit IdentifierCache(unsigned retention_depth);

    // True iff the identifier was newly inserted into the counter's window.
    bool check_and_insert(TimeCounter counter, const Bytes& identifier);

    bool contains(TimeCounter counter, const Bytes& identifier) const;

    // Drops every window older than current - depth + 1; returns the number
    // of windows evicted.
    std::size_t evict_outside(TimeCounter current);

    std::size_t window_count() const;
    unsigned retention_depth() const noexcept { return depth_; }

    // Snapshot/restore for the verifier state file.
    std::map<std::uint64_t, std::set<Bytes>> snapshot() const;
    void restore(std::map<std::uint64_t, std::set<Bytes>> windows);

private:
    mutable std::mutex mu_;
    unsigned depth_;
    std::map<std::uint64_t, std::set<Bytes>> windows_;
};

// Recipient-assigned identifier sets. Each identifier belongs to exactly one
// sender; assigning the same identifier twice raises DuplicateAssignment.
class AssignedIdRegistry {
public:
    void assign(const std::string& sender, const std::vector<Bytes>& identifiers);

    bool is_assigned(const Bytes& identifier) const;
    std::optional<std::string> sender_of(const Bytes& identifier) const;

private:
    mutable std::shared_mutex mu_;
    std::map<Bytes, std::string> owner_by_id_;
};

inline constexpr unsigned kMaxAcceptanceWindow = 4;

// Verifier state for one (suite, key) pairing. verify() may be called from
// any number of threads against the shared identifier cache; identifiers
// are only ever retained after a MAC match, so a forged envelope can never
// block a later legitimate one.
class Verifier {
public:
    // acceptance_window is the number of consecutive counters accepted,
    // in [1, kMaxAcceptanceWindow].
    Verifier(TmacSuite suite, SecretKey key, unsigned acceptance_window = 1);

    VerificationOutcome verify(const Envelope& env, Timestamp now);
    VerificationOutcome verify(const Envelope& env, const ClockSource& clock);

    // Evicts windows outside the acceptance window of now; returns the
    // number evicted. verify() performs the same eviction on every call.
    std::size_t flush_expired(Timestamp now);

    // Switches to assigned-identifier mode: envelopes whose identifier is
    // not in the registry verify to IdentifierNotAssigned.
    void use_assigned_identifiers(std::shared_ptr<AssignedIdRegistry> registry);

    const TmacSuite& suite() const noexcept { return suite_; }
    unsigned acceptance_window() const noexcept { return window_; }
    IdentifierCache& cache() noexcept { return cache_; }
    const IdentifierCache& cache() const noexcept { return cache_; }

private:
    TmacSuite suite_;
    SecretKey key_;
    unsigned window_;
    IdentifierCache cache_;
    std::shared_ptr<AssignedIdRegistry> assigned_;
};

}  // namespace tmac
