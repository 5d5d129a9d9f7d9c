#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace museum {

// 128-bit non-cryptographic digest, stable across runs and platforms.
struct Digest128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    auto operator<=>(const Digest128&) const = default;

    std::string to_hex() const;
    static Digest128 from_hex(std::string_view hex);
};

// MurmurHash3 x64 128-bit variant. Byte order is fixed little-endian so the
// digest is identical on every platform.
Digest128 murmur3_x64_128(std::string_view data, std::uint32_t seed = 0);

}  // namespace museum
