#include "tmac/net_demo.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <ostream>
#include <thread>

#include "tmac/errors.hpp"
#include "tmac/wire.hpp"

namespace tmac::net {

namespace {

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw IoError("bad IPv4 address: " + host);
    return addr;
}

std::string iso8601_utc(Timestamp t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

UdpSocket::UdpSocket() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0)
        throw IoError(std::string("socket: ") + std::strerror(errno));
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0)
        ::close(fd_);
}

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) {
    other.fd_ = -1;
}

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

UdpSocket UdpSocket::bind(const std::string& host, std::uint16_t port) {
    UdpSocket sock;
    sockaddr_in addr = make_addr(host, port);
    if (::bind(sock.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0)
        throw IoError(std::string("bind: ") + std::strerror(errno));
    return sock;
}

std::uint16_t UdpSocket::local_port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        throw IoError(std::string("getsockname: ") + std::strerror(errno));
    return ntohs(addr.sin_port);
}

void UdpSocket::send_to(const std::string& host, std::uint16_t port, ByteView datagram) {
    if (datagram.size() > kMaxDatagram)
        throw IoError("envelope exceeds the datagram limit of " +
                      std::to_string(kMaxDatagram) + " bytes");
    sockaddr_in addr = make_addr(host, port);
    ssize_t sent = ::sendto(fd_, datagram.data(), datagram.size(), 0,
                            reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
    if (sent < 0 || static_cast<std::size_t>(sent) != datagram.size())
        throw IoError(std::string("sendto: ") + std::strerror(errno));
}

std::optional<UdpSocket::Datagram> UdpSocket::recv(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready < 0)
        throw IoError(std::string("poll: ") + std::strerror(errno));
    if (ready == 0)
        return std::nullopt;

    Bytes buf(kMaxDatagram);
    sockaddr_in from{};
    socklen_t fromlen = sizeof from;
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                           reinterpret_cast<sockaddr*>(&from), &fromlen);
    if (n < 0)
        throw IoError(std::string("recvfrom: ") + std::strerror(errno));
    buf.resize(static_cast<std::size_t>(n));

    char host[INET_ADDRSTRLEN] = {};
    inet_ntop(AF_INET, &from.sin_addr, host, sizeof host);
    return Datagram{std::move(buf), host, ntohs(from.sin_port)};
}

std::size_t run_sender(const TmacSuite& suite, const SecretKey& key,
                       const std::string& dest_host, std::uint16_t dest_port,
                       const SenderOptions& options, const ClockSource& clock,
                       std::ostream& log) {
    UdpSocket sock;
    std::size_t sent = 0;
    for (std::size_t i = 0; i < options.count; ++i) {
        if (i > 0)
            std::this_thread::sleep_for(options.interval);
        try {
            Bytes payload = to_bytes(options.payload_prefix + "-" + std::to_string(i));
            Envelope env = sign(suite, key, payload, clock.now());
            sock.send_to(dest_host, dest_port, encode_envelope(env));
            log << iso8601_utc(clock.now()) << " sent " << to_hex(env.identifier) << "\n";
            ++sent;
        } catch (const Error& e) {
            // Per-message failures must not kill the loop.
            log << "send error: " << e.name() << ": " << e.what() << "\n";
        }
    }
    return sent;
}

std::map<Outcome, std::size_t> run_recipient(const TmacSuite& suite, const SecretKey& key,
                                             UdpSocket& sock, const RecipientOptions& options,
                                             const ClockSource& clock, std::ostream& log,
                                             const std::atomic<bool>* stop) {
    Verifier verifier(suite, key, options.acceptance_window);
    std::map<Outcome, std::size_t> counts;
    std::size_t handled = 0;

    while ((options.max_messages == 0 || handled < options.max_messages) &&
           (stop == nullptr || !stop->load())) {
        std::optional<UdpSocket::Datagram> datagram;
        try {
            datagram = sock.recv(options.poll);
        } catch (const Error& e) {
            log << "recv error: " << e.name() << ": " << e.what() << "\n";
            continue;
        }
        if (!datagram)
            continue;

        Outcome outcome;
        std::string id_hex = "-";
        try {
            Envelope env = decode_envelope(datagram->payload);
            id_hex = to_hex(env.identifier);
            outcome = verifier.verify(env, clock).outcome;
        } catch (const MalformedEnvelope&) {
            outcome = Outcome::MalformedEnvelope;
        }
        ++counts[outcome];
        ++handled;
        log << iso8601_utc(clock.now()) << " " << outcome_name(outcome) << " " << id_hex
            << "\n";
    }
    return counts;
}

std::size_t run_adversary(UdpSocket& listen_sock, const std::string& dest_host,
                          std::uint16_t dest_port, const AdversaryOptions& options,
                          std::ostream& log, const std::atomic<bool>* stop) {
    std::size_t forwarded = 0;
    while ((options.max_messages == 0 || forwarded < options.max_messages) &&
           (stop == nullptr || !stop->load())) {
        std::optional<UdpSocket::Datagram> datagram;
        try {
            datagram = listen_sock.recv(options.poll);
        } catch (const Error& e) {
            log << "recv error: " << e.name() << ": " << e.what() << "\n";
            continue;
        }
        if (!datagram)
            continue;

        try {
            // Pass the original through, then replay the recorded copy.
            listen_sock.send_to(dest_host, dest_port, datagram->payload);
            if (options.replay_delay.count() > 0)
                std::this_thread::sleep_for(options.replay_delay);
            listen_sock.send_to(dest_host, dest_port, datagram->payload);
            log << "recorded and replayed a " << datagram->payload.size()
                << "-byte envelope\n";
            ++forwarded;
        } catch (const Error& e) {
            log << "forward error: " << e.name() << ": " << e.what() << "\n";
        }
    }
    return forwarded;
}

}  // namespace tmac::net
