#pragma once

#include <filesystem>

#include "tmac/replay.hpp"

namespace tmac {

// Versioned, checksummed snapshot of a verifier's identifier cache so that a
// verifier restarted within the acceptance window keeps rejecting replays.
//
//   magic "TMST" | version 0x01 | u8 suite_name_len | suite_name
//   | u32be acceptance_window | u64be last_counter | u32be window_count
//   | window_count x ( u64be counter | u32be id_count
//                      | id_count x ( u16be len | bytes ) )
//   | 32-byte SHA-256 checksum of everything before it
//
// Writes go to a temp file in the same directory followed by an atomic
// rename. Loading validates magic, version, checksum, the suite name, the
// acceptance window and that every stored counter lies within the window of
// last_counter; any mismatch raises StateFileCorrupt.

void save_verifier_state(const std::filesystem::path& path, const Verifier& verifier,
                         TimeCounter last_counter);

// Returns false when the file does not exist yet.
bool load_verifier_state(const std::filesystem::path& path, Verifier& verifier);

}  // namespace tmac
