#pragma once

#include "schedcycle/sched_core.hpp"

#include <string>

namespace schedcycle {

// Injective byte encoding of a SystemState: equal states <=> equal keys.
std::string canonical_state_key(const SystemState &state);

std::string to_hex(const std::string &bytes);
// Throws InputError on malformed hex.
std::string from_hex(const std::string &hex);

// Inverse of canonical_state_key (used to read decision tables back).
SystemState decode_state_key(const std::string &key);

} // namespace schedcycle
