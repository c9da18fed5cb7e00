#pragma once

#include <compare>
#include <cstdint>

#include "tmac/hmac.hpp"

namespace tmac {

// Absolute civil time in whole seconds.
using Timestamp = std::int64_t;

class ClockSource {
public:
    virtual ~ClockSource() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public ClockSource {
public:
    Timestamp now() const override;
};

struct TimeParams {
    Timestamp epoch_t0 = 0;           // epoch relative to which time is counted
    std::uint32_t time_step_ts = 30;  // step in seconds, >= 1
};

// Quantized time index: floor((now - t0) / ts).
struct TimeCounter {
    std::uint64_t value = 0;

    friend auto operator<=>(const TimeCounter&, const TimeCounter&) = default;
};

// Throws TimeBeforeEpoch when now < params.epoch_t0 and DomainError when
// time_step_ts < 1.
TimeCounter time_counter(const TimeParams& params, Timestamp now);

// 8-byte big-endian counter encoding fed to the HMAC.
Bytes encode_counter(TimeCounter counter);

// Full-width time-derived key: hmac(key, encode_counter(counter)). This is
// the key-derivation step with truncation and modular addition removed, so
// the output is alg.output_len bytes, not a short decimal code.
Bytes totp(const HashAlgorithm& alg, const SecretKey& key, TimeCounter counter);

}  // namespace tmac
