#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lisa {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

/// Parses a non-negative decimal or 0x-prefixed hexadecimal integer.
/// Throws Error(InvalidConfig) on malformed text.
BigInt parse_integer(std::string_view text);

std::string to_hex(const BigInt& v);

std::size_t bit_length(const BigInt& v);

/// Big-endian, left-zero-padded to exactly `width` bytes.
/// Throws Error(ValueOutOfRange) if v is negative or needs more than `width` bytes.
Bytes to_bytes_be(const BigInt& v, std::size_t width);
void to_bytes_be(const BigInt& v, std::span<std::uint8_t> out);

BigInt from_bytes_be(std::span<const std::uint8_t> bytes);

std::string hex_encode(std::span<const std::uint8_t> bytes);
Bytes hex_decode(std::string_view hex);

} // namespace lisa
