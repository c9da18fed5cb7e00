#pragma once

#include "tmac/hash.hpp"
#include "tmac/secret_key.hpp"

namespace tmac {

inline constexpr std::uint8_t kIpadByte = 0x36;
inline constexpr std::uint8_t kOpadByte = 0x5c;

// Nested keyed-hash construction H((K' ^ opad) || H((K' ^ ipad) || m)).
// The key is pre-processed to exactly block_len bytes: hashed first if
// longer than the block, then zero-padded. Throws WeakKeyLength on an
// empty key and propagates UnsupportedAlgorithm.
Bytes hmac(const HashAlgorithm& alg, ByteView key, ByteView msg);

inline Bytes hmac(const HashAlgorithm& alg, const SecretKey& key, ByteView msg) {
    return hmac(alg, key.view(), msg);
}

// Constant-time MAC equality. A length mismatch returns false immediately
// (lengths are public); for equal lengths the running time does not depend
// on the position of the first differing byte.
bool verify_mac_equal(ByteView a, ByteView b);

}  // namespace tmac
