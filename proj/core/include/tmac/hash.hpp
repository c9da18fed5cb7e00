#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "tmac/bytes.hpp"

namespace tmac {

// A hash function registered by name. Everything above this layer treats the
// hash as a black box and only relies on (output_len, block_len, compute).
struct HashAlgorithm {
    std::string name;
    std::size_t output_len = 0;  // digest size in bytes
    std::size_t block_len = 0;   // compression block size in bytes
    std::function<Bytes(ByteView)> compute;
};

// Look up a registered algorithm by name. SHA256 and SHA1 are built in.
// Throws UnsupportedAlgorithm for unknown names.
const HashAlgorithm& find_hash(std::string_view name);

bool hash_is_registered(std::string_view name);

// Register (or replace) an algorithm, e.g. an instrumented hash in tests.
// Requires output_len > 0 and block_len >= output_len. Not safe to call
// concurrently with lookups of the same name; register before use.
void register_hash(HashAlgorithm alg);

// One-shot digest. Returns exactly alg.output_len bytes.
Bytes digest(const HashAlgorithm& alg, ByteView msg);

}  // namespace tmac
