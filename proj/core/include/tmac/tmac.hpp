#pragma once

// Umbrella header for the TMAC toolkit.

#include "tmac/attack_math.hpp"
#include "tmac/envelope.hpp"
#include "tmac/errors.hpp"
#include "tmac/hash.hpp"
#include "tmac/hmac.hpp"
#include "tmac/replay.hpp"
#include "tmac/secret_key.hpp"
#include "tmac/sim.hpp"
#include "tmac/state_file.hpp"
#include "tmac/suite.hpp"
#include "tmac/totp.hpp"
#include "tmac/wire.hpp"
