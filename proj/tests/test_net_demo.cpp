#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <thread>

#include "tmac/errors.hpp"
#include "tmac/net_demo.hpp"
#include "tmac/sim.hpp"
#include "tmac/wire.hpp"

#include "test_util.hpp"

using namespace tmac;
using namespace tmac::net;

namespace {

SecretKey demo_key() { return SecretKey(to_bytes("datagram demo key")); }

}  // namespace

TEST_CASE("udp socket: bind, send, receive on loopback") {
    UdpSocket receiver = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t port = receiver.local_port();
    CHECK(port != 0);

    UdpSocket sender;
    sender.send_to("127.0.0.1", port, as_bytes("ping"));

    auto got = receiver.recv(std::chrono::milliseconds(2000));
    REQUIRE(got.has_value());
    CHECK(got->payload == to_bytes("ping"));
    CHECK(got->from_host == "127.0.0.1");
}

TEST_CASE("udp socket: oversized datagrams are rejected at send time") {
    UdpSocket sock;
    Bytes huge(kMaxDatagram + 1, 0x00);
    CHECK_THROWS_AS(sock.send_to("127.0.0.1", 9, huge), IoError);
}

TEST_CASE("udp socket: recv times out cleanly") {
    UdpSocket sock = UdpSocket::bind("127.0.0.1", 0);
    CHECK(!sock.recv(std::chrono::milliseconds(50)).has_value());
}

TEST_CASE("demo: sender to recipient, no adversary, all Accept") {
    TmacSuite suite = default_suite();
    SecretKey key = demo_key();
    sim::SimClock clock(10'000);

    UdpSocket sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t port = sock.local_port();

    RecipientOptions ropts;
    ropts.max_messages = 3;
    std::ostringstream rlog;
    std::map<Outcome, std::size_t> counts;
    std::thread recipient(
        [&] { counts = run_recipient(suite, key, sock, ropts, clock, rlog); });

    SenderOptions sopts;
    sopts.count = 3;
    sopts.interval = std::chrono::milliseconds(10);
    std::ostringstream slog;
    std::size_t sent = run_sender(suite, key, "127.0.0.1", port, sopts, clock, slog);
    recipient.join();

    CHECK(sent == 3);
    CHECK(counts[Outcome::Accept] == 3);
    CHECK(counts.size() == 1);

    // One ISO-8601-stamped line per message.
    std::string log = rlog.str();
    CHECK(log.find("Accept") != std::string::npos);
    CHECK(log.find("T") != std::string::npos);
    CHECK(log.find("Z Accept ") != std::string::npos);
}

TEST_CASE("demo: replayed datagram is logged as ReplayDetected") {
    TmacSuite suite = default_suite();
    SecretKey key = demo_key();
    sim::SimClock clock(50'000);

    UdpSocket sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t port = sock.local_port();

    RecipientOptions ropts;
    ropts.max_messages = 2;
    std::ostringstream rlog;
    std::map<Outcome, std::size_t> counts;
    std::thread recipient(
        [&] { counts = run_recipient(suite, key, sock, ropts, clock, rlog); });

    Envelope env = sign(suite, key, as_bytes("replayable"), clock.now());
    Bytes wire = encode_envelope(env);
    UdpSocket attacker;
    attacker.send_to("127.0.0.1", port, wire);
    attacker.send_to("127.0.0.1", port, wire);
    recipient.join();

    CHECK(counts[Outcome::Accept] == 1);
    CHECK(counts[Outcome::ReplayDetected] == 1);
    CHECK(rlog.str().find("ReplayDetected " + to_hex(env.identifier)) != std::string::npos);
}

TEST_CASE("demo: envelope from an expired window is InvalidMac") {
    TmacSuite suite = default_suite();
    SecretKey key = demo_key();
    sim::SimClock clock(90'000);

    // Recorded in one window, delivered after the counter increments.
    Envelope stale = sign(suite, key, as_bytes("stale"), clock.now());
    clock.advance(60);

    UdpSocket sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t port = sock.local_port();

    RecipientOptions ropts;
    ropts.max_messages = 1;
    std::ostringstream rlog;
    std::map<Outcome, std::size_t> counts;
    std::thread recipient(
        [&] { counts = run_recipient(suite, key, sock, ropts, clock, rlog); });

    UdpSocket attacker;
    attacker.send_to("127.0.0.1", port, encode_envelope(stale));
    recipient.join();

    CHECK(counts[Outcome::InvalidMac] == 1);
}

TEST_CASE("demo: garbage datagrams are malformed, loop survives") {
    TmacSuite suite = default_suite();
    SecretKey key = demo_key();
    sim::SimClock clock(60'000);

    UdpSocket sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t port = sock.local_port();

    RecipientOptions ropts;
    ropts.max_messages = 2;
    std::ostringstream rlog;
    std::map<Outcome, std::size_t> counts;
    std::thread recipient(
        [&] { counts = run_recipient(suite, key, sock, ropts, clock, rlog); });

    UdpSocket sender;
    sender.send_to("127.0.0.1", port, as_bytes("not an envelope"));
    Envelope env = sign(suite, key, as_bytes("fine"), clock.now());
    sender.send_to("127.0.0.1", port, encode_envelope(env));
    recipient.join();

    CHECK(counts[Outcome::MalformedEnvelope] == 1);
    CHECK(counts[Outcome::Accept] == 1);
}

TEST_CASE("demo: adversary records, forwards and replays") {
    TmacSuite suite = default_suite();
    SecretKey key = demo_key();
    sim::SimClock clock(70'000);

    UdpSocket recipient_sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t recipient_port = recipient_sock.local_port();
    UdpSocket adversary_sock = UdpSocket::bind("127.0.0.1", 0);
    std::uint16_t adversary_port = adversary_sock.local_port();

    RecipientOptions ropts;
    ropts.max_messages = 6;  // 3 originals + 3 replays
    std::ostringstream rlog;
    std::map<Outcome, std::size_t> counts;
    std::thread recipient([&] {
        counts = run_recipient(suite, key, recipient_sock, ropts, clock, rlog);
    });

    AdversaryOptions aopts;
    aopts.max_messages = 3;
    std::ostringstream alog;
    std::thread adversary([&] {
        run_adversary(adversary_sock, "127.0.0.1", recipient_port, aopts, alog);
    });

    // The sender talks to the adversary, believing it to be the recipient.
    SenderOptions sopts;
    sopts.count = 3;
    sopts.interval = std::chrono::milliseconds(10);
    std::ostringstream slog;
    run_sender(suite, key, "127.0.0.1", adversary_port, sopts, clock, slog);

    adversary.join();
    recipient.join();

    CHECK(counts[Outcome::Accept] == 3);
    CHECK(counts[Outcome::ReplayDetected] == 3);
}
