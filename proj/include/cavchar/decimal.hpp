#ifndef CAVCHAR_DECIMAL_HPP
#define CAVCHAR_DECIMAL_HPP

#include <string>
#include <string_view>

namespace cavchar {

// Shortest decimal string that round-trips the double exactly (std::to_chars).
// All serialized numerics go through this so emitted files are byte-stable.
std::string dec_string(double value);

// Strict inverse; throws invalid_input on anything but a full numeric token.
double dec_parse(std::string_view text);

// FNV-1a 64-bit over a file's bytes, rendered "fnv1a64:<16 hex>". Content
// fingerprint for provenance, not a cryptographic hash.
std::string hash_file(const std::string& path);

} // namespace cavchar

#endif
