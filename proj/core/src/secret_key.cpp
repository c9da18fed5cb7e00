#include "tmac/secret_key.hpp"

#include <stdexcept>

#include <openssl/crypto.h>
#include <openssl/rand.h>

#include "tmac/errors.hpp"

namespace tmac {

void secure_wipe(void* p, std::size_t n) {
    if (p != nullptr && n > 0)
        OPENSSL_cleanse(p, n);
}

Bytes secure_random(std::size_t n) {
    Bytes out(n);
    if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1)
        throw std::runtime_error("CSPRNG failure");
    return out;
}

SecretKey::SecretKey(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty())
        throw WeakKeyLength("secret key must be at least 1 byte");
}

SecretKey SecretKey::random(std::size_t n) {
    if (n == 0)
        throw WeakKeyLength("secret key must be at least 1 byte");
    return SecretKey(secure_random(n));
}

SecretKey::SecretKey(const SecretKey& other) : bytes_(other.bytes_) {}

SecretKey& SecretKey::operator=(const SecretKey& other) {
    if (this != &other) {
        wipe();
        bytes_ = other.bytes_;
    }
    return *this;
}

SecretKey::SecretKey(SecretKey&& other) noexcept : bytes_(std::move(other.bytes_)) {
    other.bytes_.clear();
}

SecretKey& SecretKey::operator=(SecretKey&& other) noexcept {
    if (this != &other) {
        wipe();
        bytes_ = std::move(other.bytes_);
        other.bytes_.clear();
    }
    return *this;
}

SecretKey::~SecretKey() {
    wipe();
}

void SecretKey::wipe() noexcept {
    secure_wipe(bytes_.data(), bytes_.capacity());
}

}  // namespace tmac
