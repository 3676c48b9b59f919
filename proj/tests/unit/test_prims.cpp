#include "doctest.h"
#include "fixtures.hpp"

#include "lisa/prims.hpp"

using namespace lisa;

namespace {

Bytes str(std::string_view s) { return Bytes(s.begin(), s.end()); }

} // namespace

TEST_SUITE("prims") {

TEST_CASE("h0 is the leading 160 bits of SHA-256 (FIPS 180 vectors)") {
    CHECK(hex_encode(h0(str("abc")).view()) == "ba7816bf8f01cfea414140de5dae2223b00361a3");
    CHECK(hex_encode(h0(Bytes{}).view()) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4");
    CHECK(hex_encode(h0(str("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).view()) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce459");
    OpCounters c;
    h0(str("x"), &c);
    CHECK(c.hashes == 1);
}

TEST_CASE("fixed-width encodings") {
    CHECK(hex_encode(encode(Identity{0x5A170001})) == "5a170001");
    CHECK(hex_encode(encode(Timestamp{1000})) == "000003e8");
    CHECK(decode_identity(encode(Identity{0xDEADBEEF})).value == 0xDEADBEEF);
    CHECK(decode_timestamp(encode(Timestamp{7})).seconds == 7);
    CHECK_THROWS_WITH_AS(decode_identity(Bytes(3)), doctest::Contains("MALFORMED_MESSAGE"), Error);
    CHECK_THROWS_AS(decode_timestamp(Bytes(5)), Error);

    const Bytes x = encode_x(FieldElement{BigInt(0x0102)}, 20);
    CHECK(x.size() == 20);
    CHECK(x[18] == 1);
    CHECK(x[19] == 2);
    CHECK(decode_x(x).value() == 0x0102);
    CHECK_THROWS_WITH_AS(encode_x(FieldElement{BigInt(1) << 160}, 20), doctest::Contains("VALUE_OUT_OF_RANGE"), Error);
}

TEST_CASE("xor_mask places T in the trailing bytes and inverts") {
    const Bytes payload = hex_decode("00112233445566778899aabbccddeeff01020304");
    const FieldElement key{parse_integer("0x0f0e0d0c0b0a09080706050403020100ffeeddcc")};
    const MaskedToken t = xor_mask(payload, key, Timestamp{0x01020304}, 20);
    // Oracle: byte-wise XOR with the key and the left-zero-extended timestamp.
    const Bytes k = encode_x(key, 20);
    const Bytes ts = oracle::be(0x01020304, 20);
    for(std::size_t i = 0; i != 20; ++i) {
        CHECK(t.bytes[i] == (payload[i] ^ k[i] ^ ts[i]));
    }
    CHECK(xor_unmask(t, key, Timestamp{0x01020304}) == payload);
    CHECK(xor_unmask(t, key, Timestamp{0x01020305}) != payload);
    CHECK_THROWS_WITH_AS(xor_mask(Bytes(21), key, Timestamp{}, 20), doctest::Contains("PAYLOAD_TOO_WIDE"), Error);
}

TEST_CASE("short payloads are left-padded under the mask") {
    const Bytes mask(8, 0);
    const MaskedToken t = xor_mask(hex_decode("aabb"), mask, Timestamp{0});
    CHECK(hex_encode(t.bytes) == "000000000000aabb");
}

TEST_CASE("kdf layout matches a straight-line reconstruction") {
    const Identity id{0x5A170001};
    const FieldElement cert{BigInt(12345)};
    const FieldElement shared{BigInt(54321)};
    const SessionKey k = kdf(id, cert, shared, Timestamp{1001}, Timestamp{1000}, 20);
    const Bytes expect = oracle::sha160(oracle::cat({Bytes{0x01}, oracle::be(0x5A170001, 4), oracle::be(12345, 20),
                                                     oracle::be(54321, 20), oracle::be(1001, 4),
                                                     oracle::be(1000, 4)}));
    CHECK(Bytes(k.bytes.begin(), k.bytes.end()) == expect);

    OpCounters c;
    kdf(id, cert, shared, Timestamp{1001}, Timestamp{1000}, 20, &c);
    CHECK(c.hashes == 1);
    CHECK(c.kdf_calls == 1);
    CHECK(c.table_hashes() == 0);
}

TEST_CASE("kdf separates every input") {
    const Identity id{1};
    const FieldElement a{BigInt(2)};
    const FieldElement b{BigInt(3)};
    const SessionKey base = kdf(id, a, b, Timestamp{4}, Timestamp{5}, 20);
    CHECK(kdf(Identity{9}, a, b, Timestamp{4}, Timestamp{5}, 20) != base);
    CHECK(kdf(id, b, a, Timestamp{4}, Timestamp{5}, 20) != base);
    CHECK(kdf(id, a, b, Timestamp{5}, Timestamp{4}, 20) != base);
    CHECK(kdf(id, a, b, Timestamp{4}, Timestamp{5}, 20) == base);
    // tagged input: differs from a plain h0 over the same bytes without the tag
    Bytes untagged = oracle::cat({oracle::be(1, 4), oracle::be(2, 20), oracle::be(3, 20), oracle::be(4, 4),
                                  oracle::be(5, 4)});
    CHECK(h0(untagged).bytes != base.bytes);
}

TEST_CASE("expand_mask: counter blocks, exact width, one hash per block") {
    const FieldElement x{BigInt(77)};
    OpCounters c;
    const Bytes m = expand_mask(x, 20, 24, &c);
    CHECK(m.size() == 24);
    CHECK(c.hashes == 2);
    const Bytes b0 = oracle::sha160(oracle::cat({Bytes{0x02, 0x00}, oracle::be(77, 20)}));
    const Bytes b1 = oracle::sha160(oracle::cat({Bytes{0x02, 0x01}, oracle::be(77, 20)}));
    CHECK(Bytes(m.begin(), m.begin() + 20) == b0);
    CHECK(Bytes(m.begin() + 20, m.end()) == Bytes(b1.begin(), b1.begin() + 4));
    CHECK(expand_mask(x, 20, 20) == b0);
}

TEST_CASE("scalar_from_digest reduces mod q") {
    Digest d;
    d.bytes.fill(0xFF);
    const Scalar s = scalar_from_digest(d, BigInt(65287));
    CHECK(s.value() < 65287);
    CHECK(s.value() == BigInt((BigInt(1) << 160) - 1) % 65287);
}

TEST_CASE("bigint helpers") {
    CHECK(parse_integer("0x10") == 16);
    CHECK(parse_integer("255") == 255);
    CHECK_THROWS_AS(parse_integer("0xzz"), Error);
    CHECK_THROWS_AS(parse_integer("-5"), Error);
    CHECK(bit_length(BigInt(0)) == 0);
    CHECK(bit_length(BigInt(255)) == 8);
    CHECK(to_bytes_be(BigInt(258), 3) == Bytes{0, 1, 2});
    CHECK_THROWS_AS(to_bytes_be(BigInt(256), 1), Error);
    CHECK(hex_decode("0aff") == Bytes{0x0a, 0xff});
    CHECK_THROWS_AS(hex_decode("abc"), Error);
}

}
