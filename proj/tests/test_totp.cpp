#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tmac/errors.hpp"
#include "tmac/totp.hpp"

#include "test_util.hpp"

using namespace tmac;

TEST_CASE("time_counter: integer division throws away the remainder") {
    TimeParams params{0, 30};
    CHECK(time_counter(params, 59).value == 1);
    CHECK(time_counter(params, 0).value == 0);
    CHECK(time_counter(params, 29).value == 0);
    CHECK(time_counter(params, 30).value == 1);
    CHECK(time_counter(params, 1111111109).value == 37037036);
}

TEST_CASE("time_counter: nonzero epoch") {
    TimeParams params{1000, 60};
    CHECK(time_counter(params, 1000).value == 0);
    CHECK(time_counter(params, 1059).value == 0);
    CHECK(time_counter(params, 1060).value == 1);
}

TEST_CASE("time_counter: time before the epoch is an error") {
    TimeParams params{100, 30};
    CHECK_THROWS_AS(time_counter(params, 99), TimeBeforeEpoch);
    CHECK_THROWS_AS(time_counter(params, -1), TimeBeforeEpoch);
    CHECK_NOTHROW(time_counter(params, 100));
}

TEST_CASE("time_counter: zero step is rejected") {
    CHECK_THROWS_AS(time_counter(TimeParams{0, 0}, 5), DomainError);
}

TEST_CASE("time_counter: monotone non-decreasing in now") {
    std::mt19937_64 rng(3);
    TimeParams params{0, 30};
    Timestamp t = 0;
    std::uint64_t previous = 0;
    for (int i = 0; i < 1000; ++i) {
        t += static_cast<Timestamp>(rng() % 100);
        std::uint64_t v = time_counter(params, t).value;
        CHECK(v >= previous);
        previous = v;
    }
}

TEST_CASE("totp: constant within one window, fresh across windows") {
    const auto& alg = find_hash("SHA256");
    SecretKey key(to_bytes("shared master secret"));
    TimeParams params{0, 30};

    Bytes at0 = totp(alg, key, time_counter(params, 0));
    Bytes at29 = totp(alg, key, time_counter(params, 29));
    CHECK(at0 == at29);

    Bytes next = totp(alg, key, time_counter(params, 30));
    CHECK(at0 != next);
    CHECK(totp(alg, key, TimeCounter{0}) != totp(alg, key, TimeCounter{1}));
}

TEST_CASE("totp: is hmac over the 8-byte big-endian counter") {
    const auto& alg = find_hash("SHA256");
    SecretKey key(to_bytes("shared master secret"));

    CHECK(encode_counter(TimeCounter{1}) == from_hex("0000000000000001"));
    CHECK(encode_counter(TimeCounter{0x0102030405060708ull}) ==
          from_hex("0102030405060708"));
    CHECK(totp(alg, key, TimeCounter{1}) == hmac(alg, key, from_hex("0000000000000001")));
}

TEST_CASE("totp: full-width derived key, no truncation") {
    const auto& sha256 = find_hash("SHA256");
    const auto& sha1 = find_hash("SHA1");
    SecretKey key(to_bytes("k"));
    CHECK(totp(sha256, key, TimeCounter{5}).size() == sha256.output_len);
    CHECK(totp(sha1, key, TimeCounter{5}).size() == sha1.output_len);
}

TEST_CASE("totp: sweep across one window boundary with a scripted clock") {
    const auto& alg = find_hash("SHA256");
    SecretKey key(to_bytes("sweep key"));
    TimeParams params{0, 30};

    Bytes window0 = totp(alg, key, time_counter(params, 0));
    Bytes window1 = totp(alg, key, time_counter(params, 30));
    for (Timestamp t = 0; t < 60; ++t) {
        Bytes derived = totp(alg, key, time_counter(params, t));
        if (t < 30)
            CHECK(derived == window0);
        else
            CHECK(derived == window1);
    }
    CHECK(window0 != window1);
}
