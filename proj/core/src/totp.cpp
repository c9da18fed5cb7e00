#include "tmac/totp.hpp"

#include <chrono>

#include "tmac/errors.hpp"

namespace tmac {

Timestamp SystemClock::now() const {
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

TimeCounter time_counter(const TimeParams& params, Timestamp now) {
    if (params.time_step_ts < 1)
        throw DomainError("time step must be at least 1 second");
    if (now < params.epoch_t0)
        throw TimeBeforeEpoch("timestamp precedes the suite epoch");
    // Integer division; the remainder is always thrown away.
    auto elapsed = static_cast<std::uint64_t>(now - params.epoch_t0);
    return TimeCounter{elapsed / params.time_step_ts};
}

Bytes encode_counter(TimeCounter counter) {
    return u64_be(counter.value);
}

Bytes totp(const HashAlgorithm& alg, const SecretKey& key, TimeCounter counter) {
    return hmac(alg, key, encode_counter(counter));
}

}  // namespace tmac
