#include "tmac/envelope.hpp"

#include "tmac/errors.hpp"

namespace tmac {

Bytes intermediate_signature(const HashAlgorithm& alg, ByteView identifier,
                             ByteView message) {
    return hmac(alg, identifier, message);
}

Envelope sign(const TmacSuite& suite, const SecretKey& key, ByteView message,
              Timestamp now, std::optional<Bytes> identifier) {
    Bytes id;
    if (identifier.has_value()) {
        if (identifier->size() < kMinIdentifierLen)
            throw WeakIdentifier("message identifier must be at least 8 bytes");
        id = std::move(*identifier);
    } else {
        id = secure_random(kDefaultIdentifierLen);
    }

    Bytes inner = intermediate_signature(suite.hash, id, message);
    Bytes mac = compute_tmac(suite, key, inner, now);

    Envelope env;
    env.suite_name = suite.canonical_name();
    env.message.assign(message.begin(), message.end());
    env.mac = std::move(mac);
    env.identifier = std::move(id);
    return env;
}

}  // namespace tmac
