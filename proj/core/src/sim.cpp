#include "tmac/sim.hpp"

#include <barrier>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "tmac/errors.hpp"

namespace tmac::sim {

void SimClock::advance(std::int64_t seconds) {
    if (seconds < 0)
        throw DomainError("simulated time cannot move backwards");
    current_.fetch_add(seconds, std::memory_order_relaxed);
}

void SimClock::set(Timestamp t) {
    if (t < current_.load(std::memory_order_relaxed))
        throw DomainError("simulated time cannot move backwards");
    current_.store(t, std::memory_order_relaxed);
}

namespace {

Bytes default_message(std::size_t index) {
    return to_bytes("message-" + std::to_string(index));
}

// Identifiers come from a seeded generator so a scenario's transcript,
// envelopes included, is reproducible bit for bit.
Bytes scripted_identifier(std::mt19937_64& rng) {
    Bytes id;
    id.reserve(kDefaultIdentifierLen);
    put_u64_be(id, rng());
    put_u64_be(id, rng());
    return id;
}

}  // namespace

ScenarioResult run_scenario(const TmacSuite& suite, const SecretKey& key,
                            const std::vector<ChannelEvent>& events,
                            SimClock& clock, const ScenarioConfig& config) {
    Verifier verifier(suite, key, config.acceptance_window);
    std::mt19937_64 id_rng(config.seed);

    ScenarioResult result;
    // observed[i] is envelope i once the sender has put it on the channel;
    // signing happens at the first event that references it.
    std::vector<std::optional<Envelope>> observed;

    auto observe = [&](std::size_t ref) -> const Envelope& {
        if (ref >= observed.size())
            observed.resize(ref + 1);
        if (!observed[ref]) {
            Bytes payload = ref < config.messages.size() && !config.messages[ref].empty()
                                ? config.messages[ref]
                                : default_message(ref);
            observed[ref] =
                sign(suite, key, payload, clock.now(), scripted_identifier(id_rng));
        }
        return *observed[ref];
    };

    for (const ChannelEvent& event : events) {
        ScenarioStep step;
        step.event = event;

        switch (event.kind) {
            case EventKind::Delay:
                if (event.delay_until)
                    clock.set(*event.delay_until);
                else
                    clock.advance(event.delay_seconds);
                break;

            case EventKind::Deliver:
            case EventKind::Replay:
                step.outcome = verifier.verify(observe(event.ref), clock.now());
                break;

            case EventKind::Tamper: {
                Envelope tampered = observe(event.ref);
                std::size_t total =
                    tampered.message.size() + tampered.identifier.size() + tampered.mac.size();
                if (event.byte_position >= total)
                    throw MalformedScenario("tamper position beyond the envelope fields");
                std::size_t pos = event.byte_position;
                if (pos < tampered.message.size()) {
                    tampered.message[pos] ^= event.xor_mask;
                } else if (pos -= tampered.message.size(); pos < tampered.identifier.size()) {
                    tampered.identifier[pos] ^= event.xor_mask;
                } else {
                    tampered.mac[pos - tampered.identifier.size()] ^= event.xor_mask;
                }
                step.outcome = verifier.verify(tampered, clock.now());
                break;
            }

            case EventKind::Forge: {
                // Legitimate message and identifier, garbage MAC: every byte
                // flipped, so it can never equal the real one.
                Envelope forged = observe(event.ref);
                for (std::uint8_t& b : forged.mac)
                    b ^= 0xff;
                step.outcome = verifier.verify(forged, clock.now());
                break;
            }
        }

        if (event.expected) {
            step.matched_expectation =
                step.outcome.has_value() && step.outcome->outcome == *event.expected;
            result.passed = result.passed && step.matched_expectation;
        }
        result.transcript.push_back(std::move(step));
    }

    result.observed.resize(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i)
        if (observed[i])
            result.observed[i] = std::move(*observed[i]);
    return result;
}

RaceResult run_race_scenario(const TmacSuite& suite, const SecretKey& key,
                             const Envelope& envelope, unsigned parallelism,
                             Timestamp now) {
    if (parallelism < 1)
        throw DomainError("parallelism must be at least 1");

    Verifier verifier(suite, key, 1);
    std::vector<Outcome> outcomes(parallelism);
    std::barrier start_line(static_cast<std::ptrdiff_t>(parallelism));

    std::vector<std::thread> threads;
    threads.reserve(parallelism);
    for (unsigned i = 0; i < parallelism; ++i) {
        threads.emplace_back([&, i] {
            start_line.arrive_and_wait();
            outcomes[i] = verifier.verify(envelope, now).outcome;
        });
    }
    for (auto& t : threads)
        t.join();

    RaceResult result;
    for (Outcome o : outcomes)
        ++result.counts[o];
    return result;
}

namespace {

std::optional<Outcome> parse_outcome_token(std::string_view token) {
    if (auto o = outcome_from_name(token))
        return o;
    if (token == "accept") return Outcome::Accept;
    if (token == "replay-detected") return Outcome::ReplayDetected;
    if (token == "invalid-mac") return Outcome::InvalidMac;
    if (token == "identifier-not-assigned") return Outcome::IdentifierNotAssigned;
    if (token == "malformed-envelope") return Outcome::MalformedEnvelope;
    return std::nullopt;
}

std::uint64_t parse_number(const std::string& token, const std::string& what) {
    try {
        std::size_t used = 0;
        int base = token.starts_with("0x") || token.starts_with("0X") ? 16 : 10;
        std::uint64_t v = std::stoull(token, &used, base);
        if (used != token.size())
            throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw MalformedScenario("bad " + what + ": " + token);
    }
}

}  // namespace

ParsedScenario parse_scenario_text(std::string_view text) {
    ParsedScenario scenario;
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(stream, line)) {
        ++lineno;
        std::istringstream words(line);
        std::string verb;
        if (!(words >> verb) || verb.starts_with('#'))
            continue;

        auto fail = [&](const std::string& why) -> MalformedScenario {
            return MalformedScenario("line " + std::to_string(lineno) + ": " + why);
        };

        std::vector<std::string> args;
        for (std::string w; words >> w;)
            args.push_back(std::move(w));

        auto expected_from_tail = [&](std::size_t fixed) -> std::optional<Outcome> {
            if (args.size() == fixed)
                return std::nullopt;
            if (args.size() == fixed + 1) {
                auto o = parse_outcome_token(args[fixed]);
                if (!o)
                    throw fail("unknown outcome: " + args[fixed]);
                return o;
            }
            throw fail("wrong number of fields for " + verb);
        };

        ChannelEvent event;
        if (verb == "message") {
            if (args.size() < 2)
                throw fail("message needs an index and a payload");
            std::size_t index = parse_number(args[0], "message index");
            std::size_t text_at = line.find(args[0]);
            text_at = line.find_first_not_of(" \t", text_at + args[0].size());
            if (scenario.messages.size() <= index)
                scenario.messages.resize(index + 1);
            scenario.messages[index] = to_bytes(line.substr(text_at));
            continue;
        } else if (verb == "deliver" || verb == "replay" || verb == "forge") {
            if (args.empty())
                throw fail(verb + " needs an envelope reference");
            event.kind = verb == "deliver"  ? EventKind::Deliver
                         : verb == "replay" ? EventKind::Replay
                                            : EventKind::Forge;
            event.ref = parse_number(args[0], "envelope reference");
            event.expected = expected_from_tail(1);
        } else if (verb == "tamper") {
            if (args.size() < 3)
                throw fail("tamper needs <ref> <byte-pos> <xor-mask>");
            event.kind = EventKind::Tamper;
            event.ref = parse_number(args[0], "envelope reference");
            event.byte_position = parse_number(args[1], "byte position");
            std::uint64_t mask = parse_number(args[2], "xor mask");
            if (mask > 0xff)
                throw fail("xor mask must fit one byte");
            event.xor_mask = static_cast<std::uint8_t>(mask);
            event.expected = expected_from_tail(3);
        } else if (verb == "delay") {
            if (args.size() != 1)
                throw fail("delay needs exactly one field");
            event.kind = EventKind::Delay;
            if (args[0].starts_with('+'))
                event.delay_seconds =
                    static_cast<std::int64_t>(parse_number(args[0].substr(1), "delay"));
            else
                event.delay_until =
                    static_cast<Timestamp>(parse_number(args[0], "delay timestamp"));
        } else {
            throw fail("unknown event: " + verb);
        }
        scenario.events.push_back(std::move(event));
    }

    return scenario;
}

ParsedScenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

}  // namespace tmac::sim
