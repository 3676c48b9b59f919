#pragma once

// Reference arithmetic for tests, written without the library: int64 curve
// math for small primes, brute-force point enumeration, and a straight-line
// transcript of registration and the handshake on such curves.
// Hashing goes straight to OpenSSL's SHA256.

#include <openssl/sha.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using Bytes = std::vector<std::uint8_t>;

struct Pt {
    i64 x = 0;
    i64 y = 0;
    bool inf = true;
    friend bool operator==(const Pt&, const Pt&) = default;
};

inline Pt pt(i64 x, i64 y) { return Pt{x, y, false}; }

struct SmallCurve {
    i64 p, a, b;

    i64 mod(i64 v) const {
        v %= p;
        return v < 0 ? v + p : v;
    }
    i64 pow(i64 base, i64 e) const {
        i64 r = 1;
        base = mod(base);
        while(e > 0) {
            if(e & 1) {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        return r;
    }
    i64 inv(i64 v) const { return pow(v, p - 2); } // p prime

    bool on(const Pt& q) const {
        return q.inf || mod(q.y * q.y) == mod(mod(q.x * q.x) * q.x + a * q.x + b);
    }

    Pt add(const Pt& l, const Pt& r) const {
        if(l.inf) {
            return r;
        }
        if(r.inf) {
            return l;
        }
        i64 lambda;
        if(l.x == r.x) {
            if(mod(l.y + r.y) == 0) {
                return Pt{};
            }
            lambda = mod((3 * mod(l.x * l.x) + a) % p * inv(2 * l.y));
        } else {
            lambda = mod(mod(r.y - l.y) * inv(mod(r.x - l.x)));
        }
        const i64 x = mod(lambda * lambda - l.x - r.x);
        const i64 y = mod(lambda * mod(l.x - x) - l.y);
        return pt(x, y);
    }

    /// k·P by right-to-left binary expansion.
    Pt mul(i64 k, Pt base) const {
        Pt acc;
        while(k > 0) {
            if(k & 1) {
                acc = add(acc, base);
            }
            base = add(base, base);
            k >>= 1;
        }
        return acc;
    }

    /// Every affine point, by testing all (x, y).
    std::vector<Pt> enumerate() const {
        std::vector<Pt> out;
        for(i64 x = 0; x < p; ++x) {
            const i64 rhs = mod(mod(x * x) * x + a * x + b);
            for(i64 y = 0; y < p; ++y) {
                if(mod(y * y) == rhs) {
                    out.push_back(pt(x, y));
                }
            }
        }
        return out;
    }
};

// ---- byte helpers --------------------------------------------------------------

inline Bytes be(std::uint64_t v, std::size_t width) {
    Bytes out(width, 0);
    for(std::size_t i = 0; i != width && i < 8; ++i) {
        out[width - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return out;
}

inline Bytes cat(std::initializer_list<Bytes> parts) {
    Bytes out;
    for(const auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

inline Bytes sha160(const Bytes& in) {
    std::array<std::uint8_t, SHA256_DIGEST_LENGTH> d{};
    SHA256(in.data(), in.size(), d.data());
    return Bytes(d.begin(), d.begin() + 20);
}

inline std::uint64_t leading_u64_mod(const Bytes& digest, std::uint64_t q) {
    // digest as a big-endian integer mod q, one byte at a time
    unsigned __int128 r = 0;
    for(auto b : digest) {
        r = (r * 256 + b) % q;
    }
    return static_cast<std::uint64_t>(r);
}

// ---- straight-line registration and handshake -----------------------------------

struct Domain {
    SmallCurve curve;
    Pt g;
    i64 q;
    std::size_t x_width = 20;
};

struct Registration {
    Pt r_a, r_t, cert;
    i64 e = 0; // H0(x(Cert)||ID) mod q
    i64 r = 0; // TTP's reply scalar
    i64 d = 0; // private key
    Pt q_pub;  // d·P
    Pt q_reconstructed; // e·Cert + Q_T
    Bytes digest; // 16-byte certificate digest
};

inline Registration register_entity(const Domain& dom, i64 d_t, std::uint32_t id, i64 r_a, i64 r_t) {
    const SmallCurve& c = dom.curve;
    Registration out;
    out.r_a = c.mul(r_a, dom.g);
    out.r_t = c.mul(r_t, dom.g);
    out.cert = c.add(out.r_a, out.r_t);
    out.e = static_cast<i64>(leading_u64_mod(sha160(cat({be(out.cert.x, dom.x_width), be(id, 4)})),
                                             static_cast<std::uint64_t>(dom.q)));
    out.r = (out.e * r_t + d_t) % dom.q;
    out.d = (out.e * r_a + out.r) % dom.q;
    out.q_pub = c.mul(out.d, dom.g);
    out.q_reconstructed = c.add(c.mul(out.e, out.cert), c.mul(d_t, dom.g));
    const Bytes h = sha160(be(out.cert.x, dom.x_width));
    out.digest.assign(h.begin(), h.begin() + 16);
    return out;
}

struct Handshake {
    Bytes msg1; // T_SM || x(R_SM) || Auth_SM
    Bytes msg2; // T_SP || Auth_SP
    i64 shared_x = 0;
    Bytes key;
};

/// paper-160 wire layout.
inline Handshake handshake(const Domain& dom, const Registration& meter, std::uint32_t meter_id, i64 d_b,
                           i64 r_sm, std::uint32_t t_sm, std::uint32_t t_sp) {
    const SmallCurve& c = dom.curve;
    const std::size_t w = dom.x_width;
    const Pt q_b = c.mul(d_b, dom.g);
    const Pt r = c.mul(r_sm, dom.g);
    const Pt shared_sm = c.mul(r_sm, q_b);
    const Pt shared_sp = c.mul(d_b, r); // equal to shared_sm

    Handshake out;
    out.shared_x = shared_sm.x;

    Bytes token = cat({meter.digest, be(meter_id, 4)});
    const Bytes mask = be(static_cast<std::uint64_t>(shared_sm.x), w);
    const Bytes t_ext = be(t_sm, w);
    Bytes auth_sm(w);
    for(std::size_t i = 0; i != w; ++i) {
        auth_sm[i] = static_cast<std::uint8_t>(token[i] ^ mask[i] ^ t_ext[i]);
    }
    out.msg1 = cat({be(t_sm, 4), be(r.x, w), auth_sm});

    Bytes tag_in = cat({be(shared_sp.x, w), be(meter.cert.x, w), be(meter_id, 4)});
    const Bytes tsp_ext = be(t_sp, tag_in.size());
    for(std::size_t i = 0; i != tag_in.size(); ++i) {
        tag_in[i] ^= tsp_ext[i];
    }
    out.msg2 = cat({be(t_sp, 4), sha160(tag_in)});

    out.key = sha160(cat({Bytes{0x01}, be(meter_id, 4), be(meter.cert.x, w), be(shared_sm.x, w), be(t_sp, 4),
                          be(t_sm, 4)}));
    return out;
}

} // namespace oracle
