#pragma once

#include <array>

#include "tmac/envelope.hpp"

namespace tmac {

// Binary envelope layout, all lengths explicit:
//
//   magic "TMAC" | version 0x01 | u8 suite_name_len | suite_name
//   | u16be id_len | identifier | u16be mac_len | mac
//   | u32be msg_len | message
//
// Decoding validates every length against the remaining input before
// allocating, and rejects trailing bytes.
inline constexpr std::array<std::uint8_t, 4> kWireMagic = {'T', 'M', 'A', 'C'};
inline constexpr std::uint8_t kWireVersion = 0x01;

// Throws MalformedEnvelope when a field exceeds its length prefix.
Bytes encode_envelope(const Envelope& env);

// Throws MalformedEnvelope on any structural defect.
Envelope decode_envelope(ByteView wire);

}  // namespace tmac
