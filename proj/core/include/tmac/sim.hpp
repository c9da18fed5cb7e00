#pragma once

#include <atomic>
#include <iosfwd>
#include <vector>

#include "tmac/replay.hpp"

namespace tmac::sim {

// Deterministic clock for scripted scenarios. Time never decreases.
class SimClock final : public ClockSource {
public:
    explicit SimClock(Timestamp start = 0) : current_(start) {}

    Timestamp now() const override { return current_.load(std::memory_order_relaxed); }

    void advance(std::int64_t seconds);  // DomainError on negative
    void set(Timestamp t);               // DomainError on going backwards

private:
    std::atomic<Timestamp> current_;
};

enum class EventKind {
    Deliver,  // sender signs message `ref` (first reference) and it arrives
    Replay,   // adversary re-sends the observed envelope `ref` unmodified
    Tamper,   // observed envelope `ref` with one byte XORed
    Forge,    // observed envelope's message+identifier with an invalid MAC
    Delay,    // clock advance; produces no verification outcome
};

// Adversary events only reference previously observed envelopes; the
// adversary never sees the key.
struct ChannelEvent {
    EventKind kind = EventKind::Deliver;
    std::size_t ref = 0;  // message index (Deliver) or observed-envelope index

    // Tamper: position indexes the concatenation message|identifier|mac.
    std::size_t byte_position = 0;
    std::uint8_t xor_mask = 0;

    // Delay: relative advance, or absolute target when delay_until is set.
    std::int64_t delay_seconds = 0;
    std::optional<Timestamp> delay_until;

    std::optional<Outcome> expected;
};

struct ScenarioStep {
    ChannelEvent event;
    std::optional<VerificationOutcome> outcome;  // empty for Delay steps
    bool matched_expectation = true;
};

struct ScenarioResult {
    std::vector<ScenarioStep> transcript;  // one step per event
    std::vector<Envelope> observed;        // observed[i] is envelope i; never-
                                           // referenced indices stay empty
    bool passed = true;
};

struct ScenarioConfig {
    unsigned acceptance_window = 1;
    std::uint64_t seed = 0;        // identifier randomness, for determinism
    std::vector<Bytes> messages;   // payload per message index; defaults to
                                   // "message-<index>" when absent
};

// Executes the events in order against a single verifier. Envelopes are
// signed lazily at the first event that references them, which is also the
// moment the adversary observes them; a Forge can therefore precede the
// Deliver of the same envelope, modelling the race of a forged copy
// arriving first. Deterministic for fixed (events, clock, seed).
ScenarioResult run_scenario(const TmacSuite& suite, const SecretKey& key,
                            const std::vector<ChannelEvent>& events,
                            SimClock& clock, const ScenarioConfig& config = {});

struct RaceResult {
    std::map<Outcome, std::size_t> counts;

    std::size_t count(Outcome o) const {
        auto it = counts.find(o);
        return it == counts.end() ? 0 : it->second;
    }
};

// Verifies one envelope from `parallelism` threads simultaneously against a
// fresh shared verifier. The check-and-insert atomicity guarantees exactly
// one Accept.
RaceResult run_race_scenario(const TmacSuite& suite, const SecretKey& key,
                             const Envelope& envelope, unsigned parallelism,
                             Timestamp now);

// Line-oriented scenario description:
//
//   # comment
//   message <index> <payload text...>
//   deliver <index> [outcome]
//   replay <ref> [outcome]
//   tamper <ref> <byte-pos> <xor-mask> [outcome]
//   forge <ref> [outcome]
//   delay +<seconds> | delay <absolute-ts>
//
// Outcome tokens: accept, replay-detected, invalid-mac,
// identifier-not-assigned, malformed-envelope (CamelCase also accepted).
// Throws MalformedScenario on any defect.
struct ParsedScenario {
    std::vector<ChannelEvent> events;
    std::vector<Bytes> messages;
};

ParsedScenario parse_scenario_text(std::string_view text);
ParsedScenario parse_scenario_file(const std::string& path);

}  // namespace tmac::sim
