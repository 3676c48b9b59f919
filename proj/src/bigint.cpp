#include "lisa/bigint.hpp"

#include "lisa/error.hpp"

#include <algorithm>
#include <cctype>

namespace lisa {

BigInt parse_integer(std::string_view text) {
    while(!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while(!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    int base = 10;
    if(text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    }
    if(text.empty()) {
        throw Error(ErrorCode::InvalidConfig, "empty integer");
    }
    for(char c : text) {
        const bool ok = base == 16 ? std::isxdigit(static_cast<unsigned char>(c)) != 0
                                   : std::isdigit(static_cast<unsigned char>(c)) != 0;
        if(!ok) {
            throw Error(ErrorCode::InvalidConfig, "malformed integer '" + std::string(text) + "'");
        }
    }
    return BigInt(std::string(text), base);
}

std::string to_hex(const BigInt& v) {
    return v.get_str(16);
}

std::size_t bit_length(const BigInt& v) {
    if(v == 0) {
        return 0;
    }
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

void to_bytes_be(const BigInt& v, std::span<std::uint8_t> out) {
    if(v < 0 || (bit_length(v) + 7) / 8 > out.size()) {
        throw Error(ErrorCode::ValueOutOfRange, "integer does not fit in " + std::to_string(out.size()) + " bytes");
    }
    std::fill(out.begin(), out.end(), std::uint8_t{0});
    std::size_t count = 0;
    std::vector<std::uint8_t> tmp((bit_length(v) + 7) / 8 + 1);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    std::copy_n(tmp.begin(), count, out.end() - static_cast<std::ptrdiff_t>(count));
}

Bytes to_bytes_be(const BigInt& v, std::size_t width) {
    Bytes out(width);
    to_bytes_be(v, out);
    return out;
}

BigInt from_bytes_be(std::span<const std::uint8_t> bytes) {
    BigInt v;
    if(!bytes.empty()) {
        mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return v;
}

std::string hex_encode(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for(auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes hex_decode(std::string_view hex) {
    if(hex.size() % 2 != 0) {
        throw Error(ErrorCode::InvalidConfig, "odd-length hex string");
    }
    auto nibble = [](char c) -> int {
        if(c >= '0' && c <= '9') return c - '0';
        if(c >= 'a' && c <= 'f') return c - 'a' + 10;
        if(c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error(ErrorCode::InvalidConfig, "bad hex digit");
    };
    Bytes out(hex.size() / 2);
    for(std::size_t i = 0; i != out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    }
    return out;
}

} // namespace lisa
