#pragma once

#include <atomic>
#include <chrono>
#include <iosfwd>
#include <map>
#include <string>

#include "tmac/replay.hpp"

namespace tmac::net {

// One envelope per datagram; anything larger than a single UDP payload is
// rejected at send time.
inline constexpr std::size_t kMaxDatagram = 65507;

// Minimal RAII UDP socket. Throws IoError on system call failures.
class UdpSocket {
public:
    UdpSocket();
    ~UdpSocket();

    UdpSocket(UdpSocket&& other) noexcept;
    UdpSocket& operator=(UdpSocket&& other) noexcept;
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    static UdpSocket bind(const std::string& host, std::uint16_t port);

    std::uint16_t local_port() const;

    void send_to(const std::string& host, std::uint16_t port, ByteView datagram);

    struct Datagram {
        Bytes payload;
        std::string from_host;
        std::uint16_t from_port = 0;
    };

    // Empty optional on timeout.
    std::optional<Datagram> recv(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
};

struct SenderOptions {
    std::size_t count = 10;
    std::chrono::milliseconds interval{1000};
    std::string payload_prefix = "msg";
};

// Signs `count` messages and sends one datagram each; per-message transport
// errors are logged and skipped. Returns the number actually sent.
std::size_t run_sender(const TmacSuite& suite, const SecretKey& key,
                       const std::string& dest_host, std::uint16_t dest_port,
                       const SenderOptions& options, const ClockSource& clock,
                       std::ostream& log);

struct RecipientOptions {
    unsigned acceptance_window = 1;
    std::size_t max_messages = 0;  // 0 = run until *stop
    std::chrono::milliseconds poll{200};
};

// Receives datagrams on `sock`, verifies each envelope, and logs one line
// per message: ISO-8601 time, outcome name, identifier in lowercase hex.
// Returns outcome counts.
std::map<Outcome, std::size_t> run_recipient(const TmacSuite& suite, const SecretKey& key,
                                             UdpSocket& sock, const RecipientOptions& options,
                                             const ClockSource& clock, std::ostream& log,
                                             const std::atomic<bool>* stop = nullptr);

struct AdversaryOptions {
    std::size_t max_messages = 0;
    std::chrono::milliseconds replay_delay{0};
    std::chrono::milliseconds poll{200};
};

// Passive recorder and active replayer: forwards every datagram from the
// sender to the recipient, then re-sends it once after replay_delay. Needs
// no key material. Returns the number of envelopes forwarded.
std::size_t run_adversary(UdpSocket& listen_sock, const std::string& dest_host,
                          std::uint16_t dest_port, const AdversaryOptions& options,
                          std::ostream& log, const std::atomic<bool>* stop = nullptr);

}  // namespace tmac::net
