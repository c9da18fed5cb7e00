#pragma once

#include <optional>

#include "tmac/suite.hpp"

namespace tmac {

inline constexpr std::size_t kMinIdentifierLen = 8;
inline constexpr std::size_t kDefaultIdentifierLen = 16;

// The transmitted 3-tuple (message, mac, identifier) plus the suite name.
struct Envelope {
    std::string suite_name;
    Bytes message;
    Bytes mac;
    Bytes identifier;

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

// Inner signature I = hmac(identifier-as-key, message).
Bytes intermediate_signature(const HashAlgorithm& alg, ByteView identifier,
                             ByteView message);

// Two-step signing: I = hmac(s, m), then mac = tmac(K, I). When no
// identifier is supplied a fresh random one of kDefaultIdentifierLen bytes
// is drawn; supplied identifiers shorter than kMinIdentifierLen are
// rejected with WeakIdentifier.
Envelope sign(const TmacSuite& suite, const SecretKey& key, ByteView message,
              Timestamp now, std::optional<Bytes> identifier = std::nullopt);

}  // namespace tmac
