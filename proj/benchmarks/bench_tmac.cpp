#include <benchmark/benchmark.h>

#include "tmac/tmac.hpp"

using namespace tmac;

namespace {

Bytes payload(std::size_t n) {
    Bytes out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<std::uint8_t>(i * 131 + 7);
    return out;
}

void BM_Digest_SHA256(benchmark::State& state) {
    const auto& alg = find_hash("SHA256");
    Bytes msg = payload(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(digest(alg, msg));
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Digest_SHA256)->Arg(64)->Arg(4096)->Arg(65536);

void BM_Hmac_SHA256(benchmark::State& state) {
    const auto& alg = find_hash("SHA256");
    SecretKey key = SecretKey::random();
    Bytes msg = payload(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(hmac(alg, key, msg));
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Hmac_SHA256)->Arg(64)->Arg(4096)->Arg(65536);

void BM_Tmac(benchmark::State& state) {
    TmacSuite suite = default_suite();
    SecretKey key = SecretKey::random();
    Bytes msg = payload(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_tmac(suite, key, msg, 1'000'000));
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tmac)->Arg(64)->Arg(4096);

void BM_Sign(benchmark::State& state) {
    TmacSuite suite = default_suite();
    SecretKey key = SecretKey::random();
    Bytes msg = payload(256);
    for (auto _ : state)
        benchmark::DoNotOptimize(sign(suite, key, msg, 1'000'000));
}
BENCHMARK(BM_Sign);

void BM_SignVerify(benchmark::State& state) {
    TmacSuite suite = default_suite();
    SecretKey key = SecretKey::random();
    Bytes msg = payload(256);
    for (auto _ : state) {
        Verifier verifier(suite, key, 1);
        Envelope env = sign(suite, key, msg, 1'000'000);
        benchmark::DoNotOptimize(verifier.verify(env, 1'000'000));
    }
}
BENCHMARK(BM_SignVerify);

void BM_WireEncode(benchmark::State& state) {
    TmacSuite suite = default_suite();
    SecretKey key = SecretKey::random();
    Envelope env = sign(suite, key, payload(256), 1'000'000);
    for (auto _ : state)
        benchmark::DoNotOptimize(encode_envelope(env));
}
BENCHMARK(BM_WireEncode);

void BM_WireDecode(benchmark::State& state) {
    TmacSuite suite = default_suite();
    SecretKey key = SecretKey::random();
    Bytes wire = encode_envelope(sign(suite, key, payload(256), 1'000'000));
    for (auto _ : state)
        benchmark::DoNotOptimize(decode_envelope(wire));
}
BENCHMARK(BM_WireDecode);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
