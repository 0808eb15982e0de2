#include "cavchar/decimal.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <system_error>

#include "cavchar/errors.hpp"

namespace cavchar {

std::string dec_string(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    if (result.ec != std::errc{}) {
        throw compute_error("failed to format a double");
    }
    return std::string(buf, result.ptr);
}

double dec_parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size() || text.empty()) {
        throw invalid_input("not a decimal number: '" + std::string(text) + "'");
    }
    return value;
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw invalid_input("cannot open input for hashing: " + path);
    }
    std::uint64_t hash = 0xcbf29ce484222325ull; // FNV offset basis
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull; // FNV prime
        }
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return "fnv1a64:" + hex;
}

} // namespace cavchar
