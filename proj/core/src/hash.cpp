#include "tmac/hash.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include <openssl/evp.h>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

Bytes evp_digest(const EVP_MD* md, ByteView msg) {
    Bytes out(static_cast<std::size_t>(EVP_MD_get_size(md)));
    unsigned int written = 0;
    if (EVP_Digest(msg.data(), msg.size(), out.data(), &written, md, nullptr) != 1)
        throw std::runtime_error("EVP_Digest failed");
    out.resize(written);
    return out;
}

std::mutex& registry_mutex() {
    static std::mutex mu;
    return mu;
}

std::map<std::string, HashAlgorithm, std::less<>>& registry() {
    static std::map<std::string, HashAlgorithm, std::less<>> algs = [] {
        std::map<std::string, HashAlgorithm, std::less<>> m;
        m.emplace("SHA256", HashAlgorithm{"SHA256", 32, 64,
                                          [](ByteView msg) { return evp_digest(EVP_sha256(), msg); }});
        m.emplace("SHA1", HashAlgorithm{"SHA1", 20, 64,
                                        [](ByteView msg) { return evp_digest(EVP_sha1(), msg); }});
        return m;
    }();
    return algs;
}

}  // namespace

const HashAlgorithm& find_hash(std::string_view name) {
    std::lock_guard lock(registry_mutex());
    auto& algs = registry();
    auto it = algs.find(name);
    if (it == algs.end())
        throw UnsupportedAlgorithm("unknown hash algorithm: " + std::string(name));
    return it->second;
}

bool hash_is_registered(std::string_view name) {
    std::lock_guard lock(registry_mutex());
    return registry().contains(name);
}

void register_hash(HashAlgorithm alg) {
    if (alg.name.empty() || !alg.compute)
        throw std::invalid_argument("hash registration needs a name and a compute function");
    if (alg.output_len == 0 || alg.block_len < alg.output_len)
        throw std::invalid_argument("hash registration violates output/block length invariants");
    std::lock_guard lock(registry_mutex());
    registry().insert_or_assign(alg.name, std::move(alg));
}

Bytes digest(const HashAlgorithm& alg, ByteView msg) {
    Bytes out = alg.compute(msg);
    if (out.size() != alg.output_len)
        throw std::logic_error("hash " + alg.name + " returned a digest of the wrong size");
    return out;
}

}  // namespace tmac
