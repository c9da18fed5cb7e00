#include "tmac/replay.hpp"

#include <stdexcept>

#include "tmac/errors.hpp"

namespace tmac {

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Accept: return "Accept";
        case Outcome::ReplayDetected: return "ReplayDetected";
        case Outcome::InvalidMac: return "InvalidMac";
        case Outcome::IdentifierNotAssigned: return "IdentifierNotAssigned";
        case Outcome::MalformedEnvelope: return "MalformedEnvelope";
    }
    return "?";
}

std::optional<Outcome> outcome_from_name(std::string_view name) {
    for (Outcome o : {Outcome::Accept, Outcome::ReplayDetected, Outcome::InvalidMac,
                      Outcome::IdentifierNotAssigned, Outcome::MalformedEnvelope})
        if (name == outcome_name(o))
            return o;
    return std::nullopt;
}

IdentifierCache::IdentifierCache(unsigned retention_depth) : depth_(retention_depth) {
    if (depth_ < 1)
        throw DomainError("retention depth must be at least 1 window");
}

bool IdentifierCache::check_and_insert(TimeCounter counter, const Bytes& identifier) {
    std::lock_guard lock(mu_);
    return windows_[counter.value].insert(identifier).second;
}

bool IdentifierCache::contains(TimeCounter counter, const Bytes& identifier) const {
    std::lock_guard lock(mu_);
    auto it = windows_.find(counter.value);
    return it != windows_.end() && it->second.contains(identifier);
}

std::size_t IdentifierCache::evict_outside(TimeCounter current) {
    // Only windows strictly older than the acceptance range go. A window
    // "ahead" of current can only exist after the clock regressed; keeping it
    // preserves the one-Accept-per-(identifier, counter) guarantee until the
    // clock catches up again.
    std::uint64_t lowest_kept =
        current.value >= depth_ - 1 ? current.value - (depth_ - 1) : 0;
    std::lock_guard lock(mu_);
    std::size_t evicted = 0;
    for (auto it = windows_.begin(); it != windows_.end() && it->first < lowest_kept;) {
        it = windows_.erase(it);
        ++evicted;
    }
    return evicted;
}

std::size_t IdentifierCache::window_count() const {
    std::lock_guard lock(mu_);
    return windows_.size();
}

std::map<std::uint64_t, std::set<Bytes>> IdentifierCache::snapshot() const {
    std::lock_guard lock(mu_);
    return windows_;
}

void IdentifierCache::restore(std::map<std::uint64_t, std::set<Bytes>> windows) {
    std::lock_guard lock(mu_);
    windows_ = std::move(windows);
}

void AssignedIdRegistry::assign(const std::string& sender,
                                const std::vector<Bytes>& identifiers) {
    for (const Bytes& id : identifiers)
        if (id.size() < kMinIdentifierLen)
            throw WeakIdentifier("assigned identifier must be at least 8 bytes");

    std::unique_lock lock(mu_);
    for (const Bytes& id : identifiers) {
        auto it = owner_by_id_.find(id);
        if (it != owner_by_id_.end() && it->second != sender)
            throw DuplicateAssignment("identifier already assigned to sender " + it->second);
    }
    for (const Bytes& id : identifiers)
        owner_by_id_.insert_or_assign(id, sender);
}

bool AssignedIdRegistry::is_assigned(const Bytes& identifier) const {
    std::shared_lock lock(mu_);
    return owner_by_id_.contains(identifier);
}

std::optional<std::string> AssignedIdRegistry::sender_of(const Bytes& identifier) const {
    std::shared_lock lock(mu_);
    auto it = owner_by_id_.find(identifier);
    if (it == owner_by_id_.end())
        return std::nullopt;
    return it->second;
}

Verifier::Verifier(TmacSuite suite, SecretKey key, unsigned acceptance_window)
    : suite_(std::move(suite)),
      key_(std::move(key)),
      window_(acceptance_window),
      cache_(acceptance_window) {
    if (window_ < 1 || window_ > kMaxAcceptanceWindow)
        throw DomainError("acceptance window must be in [1, 4]");
}

VerificationOutcome Verifier::verify(const Envelope& env, const ClockSource& clock) {
    // The clock is read exactly once so a counter increment mid-verification
    // cannot split the match and retain decisions across windows.
    return verify(env, clock.now());
}

VerificationOutcome Verifier::verify(const Envelope& env, Timestamp now) {
    // Structural checks first; none of these touch the cache.
    TmacSuite declared;
    try {
        declared = parse_suite_name(env.suite_name);
    } catch (const Error&) {
        return {Outcome::MalformedEnvelope, std::nullopt};
    }
    if (!same_suite(declared, suite_))
        return {Outcome::MalformedEnvelope, std::nullopt};
    if (env.mac.size() != suite_.hash.output_len)
        return {Outcome::MalformedEnvelope, std::nullopt};
    if (env.identifier.size() < kMinIdentifierLen)
        return {Outcome::MalformedEnvelope, std::nullopt};

    TimeCounter current = time_counter(suite_.time_params, now);

    VerificationOutcome result{Outcome::InvalidMac, std::nullopt};

    if (assigned_ && !assigned_->is_assigned(env.identifier)) {
        result = {Outcome::IdentifierNotAssigned, std::nullopt};
    } else {
        Bytes inner = intermediate_signature(suite_.hash, env.identifier, env.message);
        for (unsigned j = 0; j < window_ && j <= current.value; ++j) {
            TimeCounter candidate{current.value - j};
            Bytes expected = compute_tmac_at(suite_, key_, inner, candidate);
            if (!verify_mac_equal(expected, env.mac))
                continue;
            // The identifier is retained only after the MAC matched. A
            // rejected envelope therefore never poisons the cache (the
            // denial-of-service vector of retain-before-authenticate), and
            // under concurrent verification of the same envelope exactly
            // one caller wins the insert.
            if (cache_.check_and_insert(candidate, env.identifier))
                result = {Outcome::Accept, candidate};
            else
                result = {Outcome::ReplayDetected, std::nullopt};
            break;
        }
    }

    cache_.evict_outside(current);
    return result;
}

std::size_t Verifier::flush_expired(Timestamp now) {
    return cache_.evict_outside(time_counter(suite_.time_params, now));
}

void Verifier::use_assigned_identifiers(std::shared_ptr<AssignedIdRegistry> registry) {
    assigned_ = std::move(registry);
}

}  // namespace tmac
