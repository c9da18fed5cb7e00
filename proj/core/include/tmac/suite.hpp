#pragma once

#include "tmac/totp.hpp"

namespace tmac {

inline constexpr std::uint32_t kDefaultTimeStep = 30;

// A fully specified TMAC instance: hash function, epoch and time step.
struct TmacSuite {
    HashAlgorithm hash;
    TimeParams time_params;
    std::string epoch_name = "UNIX";

    // Explicit long form, e.g. "TMAC-SHA256-UNIX-30".
    std::string canonical_name() const;
};

bool same_suite(const TmacSuite& a, const TmacSuite& b);

// TMAC-SHA256-UNIX-30.
TmacSuite default_suite();

// Name grammar: "TMAC-" <HASH> [ "-" <EPOCH> "-" <STEP> ]. An omitted tail
// means the UNIX epoch and a 30 s step. The step field is decimal seconds
// with no leading zeros. Throws MalformedSuiteName, UnsupportedAlgorithm or
// UnsupportedEpoch.
TmacSuite parse_suite_name(std::string_view name);

std::string format_suite_name(const TmacSuite& suite);

// Register an additional named epoch (only "UNIX" is built in).
void register_epoch(const std::string& name, Timestamp epoch_t0);

// The time-dependent MAC: hmac(hash, totp(hash, key, counter(now)), msg).
// Constant within one counter window, different across windows.
Bytes compute_tmac(const TmacSuite& suite, const SecretKey& key, ByteView msg,
                   Timestamp now);

// Same MAC pinned to an explicit counter instead of a wall-clock reading.
Bytes compute_tmac_at(const TmacSuite& suite, const SecretKey& key, ByteView msg,
                      TimeCounter counter);

}  // namespace tmac
