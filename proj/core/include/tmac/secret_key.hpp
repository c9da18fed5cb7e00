#pragma once

#include <cstddef>

#include "tmac/bytes.hpp"

namespace tmac {

// Wipe a buffer in a way the optimizer must not elide.
void secure_wipe(void* p, std::size_t n);

// Fill a fresh buffer from the process CSPRNG.
Bytes secure_random(std::size_t n);

// Shared master secret. The backing memory is wiped whenever the key object
// releases it, and the type deliberately has no serialization or stream
// output so the key cannot end up in wire messages or logs.
class SecretKey {
public:
    explicit SecretKey(Bytes bytes);  // throws WeakKeyLength on empty input

    static SecretKey random(std::size_t n = 32);

    SecretKey(const SecretKey& other);
    SecretKey& operator=(const SecretKey& other);
    SecretKey(SecretKey&& other) noexcept;
    SecretKey& operator=(SecretKey&& other) noexcept;
    ~SecretKey();

    ByteView view() const noexcept { return bytes_; }
    std::size_t size() const noexcept { return bytes_.size(); }

private:
    void wipe() noexcept;

    Bytes bytes_;
};

}  // namespace tmac
