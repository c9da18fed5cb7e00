// tmac: sign and verify replay-resistant authenticated messages, estimate
// birthday-attack costs, and drive the adversarial channel demos.

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tmac/tmac.hpp"
#include "tmac/net_demo.hpp"

namespace {

using namespace tmac;

// Exit codes are part of the public contract; scripts branch on them.
int outcome_exit_code(Outcome o) {
    switch (o) {
        case Outcome::Accept: return 0;
        case Outcome::ReplayDetected: return 2;
        case Outcome::InvalidMac: return 3;
        case Outcome::IdentifierNotAssigned: return 4;
        case Outcome::MalformedEnvelope: return 5;
    }
    return 1;
}

int error_exit_code(const Error& e) {
    const std::string& n = e.name();
    if (n == "UnsupportedAlgorithm") return 10;
    if (n == "UnsupportedEpoch") return 11;
    if (n == "MalformedSuiteName") return 12;
    if (n == "TimeBeforeEpoch") return 13;
    if (n == "WeakIdentifier") return 14;
    if (n == "WeakKeyLength") return 15;
    if (n == "DomainError") return 16;
    if (n == "DuplicateAssignment") return 17;
    if (n == "MalformedScenario") return 18;
    if (n == "IoError") return 19;
    if (n == "StateFileCorrupt") return 20;
    if (n == "ParseError") return 21;
    if (n == "MalformedEnvelope") return 5;
    return 1;
}

Bytes read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

Bytes read_input(const std::string& path) {
    if (path == "-" || path.empty())
        return Bytes((std::istreambuf_iterator<char>(std::cin)),
                     std::istreambuf_iterator<char>());
    return read_file_bytes(path);
}

void write_output(const std::string& path, ByteView data) {
    if (path == "-" || path.empty()) {
        std::cout.write(reinterpret_cast<const char*>(data.data()),
                        static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        if (!std::cout)
            throw IoError("short write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out)
        throw IoError("short write to " + path);
}

SecretKey load_key(const std::string& path) {
    Bytes raw = read_file_bytes(path);
    if (raw.empty())
        throw WeakKeyLength("key file " + path + " is empty");
    return SecretKey(std::move(raw));
}

// Flag wins over the TMAC_SUITE environment variable; both win over the
// fallback (used for sign, where nothing else names a suite).
TmacSuite resolve_suite(const std::string& flag_value, const char* fallback) {
    if (!flag_value.empty())
        return parse_suite_name(flag_value);
    if (const char* env = std::getenv("TMAC_SUITE"); env != nullptr && *env != '\0')
        return parse_suite_name(env);
    return parse_suite_name(fallback);
}

// Exclusive advisory lock beside the state file, held across load-verify-save.
class StateLock {
public:
    explicit StateLock(const std::string& state_path) {
        std::string lock_path = state_path + ".lock";
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT, 0600);
        if (fd_ < 0)
            throw IoError("cannot open " + lock_path);
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw IoError("cannot lock " + lock_path);
        }
    }

    ~StateLock() {
        if (fd_ >= 0)
            ::close(fd_);  // releases the lock
    }

private:
    int fd_ = -1;
};

int cmd_keygen(const std::string& out_path, unsigned bytes) {
    if (bytes < 16)
        throw WeakKeyLength("keys below 16 bytes are refused");
    Bytes key = secure_random(bytes);

    // Owner-only permissions from the first byte onward.
    int fd = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fd < 0)
        throw IoError("cannot create " + out_path);
    ssize_t written = ::write(fd, key.data(), key.size());
    ::close(fd);
    secure_wipe(key.data(), key.size());
    if (written < 0 || static_cast<std::size_t>(written) != bytes)
        throw IoError("short write to " + out_path);

    std::cerr << "wrote " << bytes << "-byte key to " << out_path << "\n";
    return 0;
}

int cmd_sign(const std::string& key_path, const std::string& suite_name,
             const std::string& in_path, const std::string& out_path,
             const std::string& id_hex) {
    SecretKey key = load_key(key_path);
    TmacSuite suite = resolve_suite(suite_name, "TMAC-SHA256");
    Bytes message = read_input(in_path);

    std::optional<Bytes> identifier;
    if (!id_hex.empty())
        identifier = from_hex(id_hex);

    Envelope env = sign(suite, key, message, SystemClock().now(), std::move(identifier));
    write_output(out_path, encode_envelope(env));
    std::cerr << "identifier: " << to_hex(env.identifier) << "\n";
    return 0;
}

int cmd_verify(const std::string& key_path, const std::string& suite_name,
               const std::string& in_path, const std::string& state_path,
               unsigned window) {
    SecretKey key = load_key(key_path);
    Envelope env;
    try {
        env = decode_envelope(read_input(in_path));
    } catch (const MalformedEnvelope&) {
        std::cout << outcome_name(Outcome::MalformedEnvelope) << "\n";
        return outcome_exit_code(Outcome::MalformedEnvelope);
    }

    // The envelope's declared suite is the default context; a flag or the
    // environment pins it explicitly (a mismatch then reads as malformed).
    TmacSuite suite = resolve_suite(suite_name, env.suite_name.c_str());
    Verifier verifier(suite, key, window);

    Outcome outcome;
    if (!state_path.empty()) {
        StateLock lock(state_path);
        load_verifier_state(state_path, verifier);
        Timestamp now = SystemClock().now();
        outcome = verifier.verify(env, now).outcome;
        save_verifier_state(state_path, verifier, time_counter(suite.time_params, now));
    } else {
        outcome = verifier.verify(env, SystemClock()).outcome;
    }

    std::cout << outcome_name(outcome) << "\n";
    return outcome_exit_code(outcome);
}

int cmd_attack_cost(unsigned bits, double hashrate, double probability) {
    double trials = attack::trials_for_probability(probability, std::exp2(bits));
    // At even odds this is the 1.1774 * 2^(c/2) / d form; otherwise k(p,m)/d.
    double seconds = probability == 0.5 ? attack::attack_time_seconds(bits, hashrate)
                                        : trials / hashrate;

    std::printf("birthday-attack cost estimate\n");
    std::printf("  digest bits c    : %u\n", bits);
    std::printf("  hashrate d       : %.6g hashes/second\n", hashrate);
    std::printf("  probability p    : %.4g\n", probability);
    std::printf("  trials k(p, 2^c) : %.6g\n", trials);
    std::printf("  time             : %.6g seconds\n", seconds);
    std::printf("                   = %.2f years\n", attack::seconds_to_years(seconds));
    return 0;
}

int cmd_attack_sim(const std::string& suite_name, unsigned bits, std::size_t runs,
                   std::uint64_t seed, bool window_demo, std::size_t corpus) {
    TmacSuite suite = resolve_suite(suite_name, "TMAC-SHA256");
    SecretKey key = SecretKey::random();

    auto r = attack::empirical_collision_trials(suite, key, bits, runs, seed);
    std::printf("empirical birthday attack on truncated MACs\n");
    std::printf("  suite                  : %s\n", suite.canonical_name().c_str());
    std::printf("  truncate bits c        : %u\n", r.truncate_bits);
    std::printf("  runs                   : %zu\n", r.runs);
    std::printf("  seed                   : %llu\n",
                static_cast<unsigned long long>(r.seed));
    std::printf("  mean trials            : %.2f\n", r.mean_trials);
    std::printf("  predicted 1.1774*2^(c/2): %.2f\n", r.expected_trials);
    std::printf("  min / max trials       : %llu / %llu\n",
                static_cast<unsigned long long>(r.min_trials),
                static_cast<unsigned long long>(r.max_trials));

    if (window_demo) {
        sim::SimClock clock(SystemClock().now());
        auto record = attack::window_invalidates_attack(suite, key, bits, corpus, seed, clock);
        std::printf("\nwindow-increment invalidation\n");
        std::printf("  corpus size            : %zu\n", record.corpus_size);
        std::printf("  window before -> after : %llu -> %llu\n",
                    static_cast<unsigned long long>(record.window_before),
                    static_cast<unsigned long long>(record.window_after));
        std::printf("  full-width valid (same window) : %zu\n",
                    record.full_width_valid_same_window);
        std::printf("  full-width valid after increment : %zu\n",
                    record.full_width_still_valid);
        std::printf("  %u-bit truncated still valid     : %zu (%.6f of corpus)\n",
                    record.truncate_bits, record.truncated_still_valid,
                    record.truncated_valid_fraction);
    }
    return 0;
}

int cmd_demo_scenario(const std::string& key_path, const std::string& suite_name,
                      const std::string& file, Timestamp start, unsigned window,
                      std::uint64_t seed) {
    SecretKey key = load_key(key_path);
    TmacSuite suite = resolve_suite(suite_name, "TMAC-SHA256");

    sim::ParsedScenario scenario = sim::parse_scenario_file(file);
    sim::SimClock clock(start);
    sim::ScenarioConfig config;
    config.acceptance_window = window;
    config.seed = seed;
    config.messages = scenario.messages;

    sim::ScenarioResult result = run_scenario(suite, key, scenario.events, clock, config);

    for (std::size_t i = 0; i < result.transcript.size(); ++i) {
        const auto& step = result.transcript[i];
        std::printf("[%2zu] ", i);
        switch (step.event.kind) {
            case sim::EventKind::Deliver: std::printf("deliver %zu", step.event.ref); break;
            case sim::EventKind::Replay: std::printf("replay  %zu", step.event.ref); break;
            case sim::EventKind::Tamper:
                std::printf("tamper  %zu @%zu ^0x%02x", step.event.ref,
                            step.event.byte_position, step.event.xor_mask);
                break;
            case sim::EventKind::Forge: std::printf("forge   %zu", step.event.ref); break;
            case sim::EventKind::Delay:
                if (step.event.delay_until)
                    std::printf("delay   @%lld",
                                static_cast<long long>(*step.event.delay_until));
                else
                    std::printf("delay   +%lld",
                                static_cast<long long>(step.event.delay_seconds));
                break;
        }
        if (step.outcome)
            std::printf(" -> %s", std::string(outcome_name(step.outcome->outcome)).c_str());
        if (step.event.expected) {
            std::printf(" [expected %s: %s]",
                        std::string(outcome_name(*step.event.expected)).c_str(),
                        step.matched_expectation ? "ok" : "MISMATCH");
        }
        std::printf("\n");
    }
    std::printf("%s\n", result.passed ? "PASS" : "FAIL");
    return result.passed ? 0 : 1;
}

int cmd_demo_sender(const std::string& key_path, const std::string& suite_name,
                    const std::string& host, std::uint16_t port, std::size_t count,
                    unsigned interval_ms) {
    SecretKey key = load_key(key_path);
    TmacSuite suite = resolve_suite(suite_name, "TMAC-SHA256");
    net::SenderOptions options;
    options.count = count;
    options.interval = std::chrono::milliseconds(interval_ms);
    SystemClock clock;
    std::size_t sent = run_sender(suite, key, host, port, options, clock, std::cerr);
    return sent == count ? 0 : 1;
}

int cmd_demo_recipient(const std::string& key_path, const std::string& suite_name,
                       std::uint16_t port, unsigned window, std::size_t max_messages) {
    SecretKey key = load_key(key_path);
    TmacSuite suite = resolve_suite(suite_name, "TMAC-SHA256");
    net::UdpSocket sock = net::UdpSocket::bind("0.0.0.0", port);
    std::cerr << "listening on udp/" << sock.local_port() << "\n";
    net::RecipientOptions options;
    options.acceptance_window = window;
    options.max_messages = max_messages;
    SystemClock clock;
    run_recipient(suite, key, sock, options, clock, std::cout);
    return 0;
}

int cmd_demo_adversary(std::uint16_t listen_port, const std::string& dest_host,
                       std::uint16_t dest_port, unsigned replay_delay_ms,
                       std::size_t max_messages) {
    net::UdpSocket sock = net::UdpSocket::bind("0.0.0.0", listen_port);
    std::cerr << "recording on udp/" << sock.local_port() << ", replaying to "
              << dest_host << ":" << dest_port << "\n";
    net::AdversaryOptions options;
    options.replay_delay = std::chrono::milliseconds(replay_delay_ms);
    options.max_messages = max_messages;
    run_adversary(sock, dest_host, dest_port, options, std::cerr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-based message authentication with replay protection"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a random key file");
    std::string kg_out;
    unsigned kg_bytes = 32;
    keygen->add_option("--out", kg_out, "output path")->required();
    keygen->add_option("--bytes", kg_bytes, "key length in bytes (minimum 16)");

    // sign
    auto* sign_cmd = app.add_subcommand("sign", "sign a message into a wire envelope");
    std::string sg_key, sg_suite, sg_in = "-", sg_out = "-", sg_id;
    sign_cmd->add_option("--key", sg_key, "key file")->required();
    sign_cmd->add_option("--suite", sg_suite, "suite name (default TMAC-SHA256 or $TMAC_SUITE)");
    sign_cmd->add_option("--in", sg_in, "message file, '-' for stdin");
    sign_cmd->add_option("--out", sg_out, "envelope file, '-' for stdout");
    sign_cmd->add_option("--id", sg_id, "explicit identifier in hex (>= 8 bytes)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "verify a wire envelope");
    std::string vf_key, vf_suite, vf_in = "-", vf_state;
    unsigned vf_window = 1;
    verify_cmd->add_option("--key", vf_key, "key file")->required();
    verify_cmd->add_option("--suite", vf_suite, "pin the expected suite name");
    verify_cmd->add_option("--in", vf_in, "envelope file, '-' for stdin");
    verify_cmd->add_option("--state", vf_state, "verifier state file for cross-run replay detection");
    verify_cmd->add_option("--window", vf_window, "acceptance window in time steps (1..4)");

    // attack-cost
    auto* cost = app.add_subcommand("attack-cost", "birthday-attack cost table");
    unsigned ac_bits = 160;
    double ac_rate = attack::kReferenceHashrate;
    double ac_prob = 0.5;
    cost->add_option("--bits", ac_bits, "digest width in bits")->required();
    cost->add_option("--hashrate", ac_rate, "attacker hashes per second");
    cost->add_option("--probability", ac_prob, "target collision probability");

    // attack-sim
    auto* sim_cmd = app.add_subcommand("attack-sim", "desk-scale empirical birthday attack");
    std::string as_suite;
    unsigned as_bits = 16;
    std::size_t as_runs = 1000;
    std::uint64_t as_seed = 1;
    bool as_window_demo = false;
    std::size_t as_corpus = 20000;
    sim_cmd->add_option("--suite", as_suite, "suite name");
    sim_cmd->add_option("--bits", as_bits, "truncation width in bits (8..32)");
    sim_cmd->add_option("--runs", as_runs, "independent seeded runs");
    sim_cmd->add_option("--seed", as_seed, "base RNG seed");
    sim_cmd->add_flag("--window-demo", as_window_demo,
                      "also demonstrate corpus invalidation across a window boundary");
    sim_cmd->add_option("--corpus", as_corpus, "corpus size for the window demo");

    // demo
    auto* demo = app.add_subcommand("demo", "adversarial channel demos");
    demo->require_subcommand(1);

    auto* scenario = demo->add_subcommand("scenario", "run a scripted scenario file");
    std::string sc_key, sc_suite, sc_file;
    Timestamp sc_start = 0;
    unsigned sc_window = 1;
    std::uint64_t sc_seed = 0;
    scenario->add_option("--key", sc_key, "key file")->required();
    scenario->add_option("--suite", sc_suite, "suite name");
    scenario->add_option("--file", sc_file, "scenario description file")->required();
    scenario->add_option("--start", sc_start, "simulated start time (seconds)");
    scenario->add_option("--window", sc_window, "acceptance window (1..4)");
    scenario->add_option("--seed", sc_seed, "identifier RNG seed");

    auto* sender = demo->add_subcommand("sender", "sign and send datagrams");
    std::string sd_key, sd_suite, sd_host = "127.0.0.1";
    std::uint16_t sd_port = 0;
    std::size_t sd_count = 10;
    unsigned sd_interval = 1000;
    sender->add_option("--key", sd_key, "key file")->required();
    sender->add_option("--suite", sd_suite, "suite name");
    sender->add_option("--dest-host", sd_host, "recipient IPv4 address");
    sender->add_option("--dest-port", sd_port, "recipient UDP port")->required();
    sender->add_option("--count", sd_count, "messages to send");
    sender->add_option("--interval", sd_interval, "milliseconds between messages");

    auto* recipient = demo->add_subcommand("recipient", "receive and verify datagrams");
    std::string rc_key, rc_suite;
    std::uint16_t rc_port = 0;
    unsigned rc_window = 1;
    std::size_t rc_max = 0;
    recipient->add_option("--key", rc_key, "key file")->required();
    recipient->add_option("--suite", rc_suite, "suite name");
    recipient->add_option("--port", rc_port, "UDP port to listen on")->required();
    recipient->add_option("--window", rc_window, "acceptance window (1..4)");
    recipient->add_option("--max", rc_max, "stop after this many messages (0 = forever)");

    auto* adversary = demo->add_subcommand("adversary", "record, forward and replay datagrams");
    std::uint16_t ad_listen = 0, ad_dest_port = 0;
    std::string ad_dest_host = "127.0.0.1";
    unsigned ad_delay = 0;
    std::size_t ad_max = 0;
    adversary->add_option("--listen", ad_listen, "UDP port to impersonate the recipient on")
        ->required();
    adversary->add_option("--dest-host", ad_dest_host, "real recipient IPv4 address");
    adversary->add_option("--dest-port", ad_dest_port, "real recipient UDP port")->required();
    adversary->add_option("--replay-delay", ad_delay, "milliseconds before each replay");
    adversary->add_option("--max", ad_max, "stop after this many envelopes (0 = forever)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) return cmd_keygen(kg_out, kg_bytes);
        if (*sign_cmd) return cmd_sign(sg_key, sg_suite, sg_in, sg_out, sg_id);
        if (*verify_cmd) return cmd_verify(vf_key, vf_suite, vf_in, vf_state, vf_window);
        if (*cost) return cmd_attack_cost(ac_bits, ac_rate, ac_prob);
        if (*sim_cmd)
            return cmd_attack_sim(as_suite, as_bits, as_runs, as_seed, as_window_demo,
                                  as_corpus);
        if (*scenario)
            return cmd_demo_scenario(sc_key, sc_suite, sc_file, sc_start, sc_window, sc_seed);
        if (*sender)
            return cmd_demo_sender(sd_key, sd_suite, sd_host, sd_port, sd_count, sd_interval);
        if (*recipient)
            return cmd_demo_recipient(rc_key, rc_suite, rc_port, rc_window, rc_max);
        if (*adversary)
            return cmd_demo_adversary(ad_listen, ad_dest_host, ad_dest_port, ad_delay, ad_max);
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
