#pragma once

#include <json.hpp>

namespace assembly {

// Insertion-ordered so that serialized payloads are stable byte-for-byte.
using Json = nlohmann::ordered_json;

} // namespace assembly
