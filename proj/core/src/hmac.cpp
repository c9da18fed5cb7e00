#include "tmac/hmac.hpp"

#include <algorithm>

#include "tmac/errors.hpp"

namespace tmac {

Bytes hmac(const HashAlgorithm& alg, ByteView key, ByteView msg) {
    if (key.empty())
        throw WeakKeyLength("hmac key must be at least 1 byte");

    // K' = key hashed down if longer than the block, then zero-padded.
    Bytes padded_key(alg.block_len, 0x00);
    if (key.size() > alg.block_len) {
        Bytes hashed = digest(alg, key);
        std::copy(hashed.begin(), hashed.end(), padded_key.begin());
        secure_wipe(hashed.data(), hashed.size());
    } else {
        std::copy(key.begin(), key.end(), padded_key.begin());
    }

    // H((K' ^ ipad) || m)
    Bytes inner_block(alg.block_len + msg.size());
    for (std::size_t i = 0; i < alg.block_len; ++i)
        inner_block[i] = padded_key[i] ^ kIpadByte;
    std::copy(msg.begin(), msg.end(), inner_block.begin() + alg.block_len);
    Bytes inner_digest = digest(alg, inner_block);

    // H((K' ^ opad) || inner)
    Bytes outer_block(alg.block_len + inner_digest.size());
    for (std::size_t i = 0; i < alg.block_len; ++i)
        outer_block[i] = padded_key[i] ^ kOpadByte;
    std::copy(inner_digest.begin(), inner_digest.end(), outer_block.begin() + alg.block_len);
    Bytes mac = digest(alg, outer_block);

    secure_wipe(padded_key.data(), padded_key.size());
    secure_wipe(inner_block.data(), inner_block.size());
    secure_wipe(outer_block.data(), outer_block.size());
    return mac;
}

bool verify_mac_equal(ByteView a, ByteView b) {
    if (a.size() != b.size())
        return false;
    volatile std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = acc | static_cast<std::uint8_t>(a[i] ^ b[i]);
    return acc == 0;
}

}  // namespace tmac
