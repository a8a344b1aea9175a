#pragma once

#include <cstdint>
#include <string>

namespace sgf {

// Plain SHA-256, used to fingerprint canonical graph serializations inside
// certificates.  Returns the lowercase hex digest.
std::string sha256_hex(const std::string& data);

} // namespace sgf
