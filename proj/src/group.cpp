#include "lisa/group.hpp"

#include "lisa/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace lisa {

namespace {

BigInt mod(const BigInt& v, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

BigInt inverse(const BigInt& v, const BigInt& m) {
    BigInt r;
    if(mpz_invert(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw Error(ErrorCode::InvalidPoint, "non-invertible denominator");
    }
    return r;
}

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& m) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool is_prime(const BigInt& n) {
    if(n < 2) {
        return false;
    }
    if(bit_length(n) <= 32) {
        const unsigned long v = n.get_ui();
        for(unsigned long d = 2; d * d <= v; ++d) {
            if(v % d == 0) {
                return false;
            }
        }
        return true;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

[[noreturn]] void bad_profile(const std::string& what) {
    throw Error(ErrorCode::InvalidProfile, what);
}

} // namespace

void validate(const CurveParams& c) {
    if(!is_prime(c.p)) {
        bad_profile("p is not prime");
    }
    if(c.a < 0 || c.a >= c.p || c.b < 0 || c.b >= c.p) {
        bad_profile("a, b must be reduced mod p");
    }
    if(mod(4 * c.a * c.a * c.a + 27 * c.b * c.b, c.p) == 0) {
        bad_profile("singular curve");
    }
    if(!is_prime(c.q)) {
        bad_profile("q is not prime");
    }
    if(c.cofactor != 1) {
        bad_profile("cofactor must be 1");
    }
    if(c.x_bits % 8 != 0 || c.x_bits < bit_length(c.p)) {
        bad_profile("x_bits must be a multiple of 8 covering p");
    }
    if(c.generator.is_infinity()) {
        bad_profile("generator is the point at infinity");
    }
    const auto& g = c.generator;
    if(g.x() < 0 || g.x() >= c.p || g.y() < 0 || g.y() >= c.p ||
       mod(g.y() * g.y() - (g.x() * g.x() * g.x() + c.a * g.x() + c.b), c.p) != 0) {
        bad_profile("generator not on curve");
    }
}

Curve::Curve(CurveParams params) : params_(std::move(params)) {
    validate(params_);
    if(!mul(params_.q, params_.generator).is_infinity()) {
        bad_profile("q * G != Infinity");
    }
}

BigInt Curve::rhs(const BigInt& x) const {
    return mod(x * x * x + params_.a * x + params_.b, params_.p);
}

bool Curve::on_curve(const CurvePoint& pt) const {
    if(pt.is_infinity()) {
        return true;
    }
    if(pt.x() < 0 || pt.x() >= params_.p || pt.y() < 0 || pt.y() >= params_.p) {
        return false;
    }
    return mod(pt.y() * pt.y(), params_.p) == rhs(pt.x());
}

void Curve::check_point(const CurvePoint& pt) const {
    if(!on_curve(pt)) {
        throw Error(ErrorCode::InvalidPoint, "point fails the curve equation");
    }
}

CurvePoint Curve::negate(const CurvePoint& pt) const {
    if(pt.is_infinity() || pt.y() == 0) {
        return pt;
    }
    return CurvePoint{pt.x(), params_.p - pt.y()};
}

CurvePoint Curve::double_unchecked(const CurvePoint& pt) const {
    if(pt.is_infinity() || pt.y() == 0) {
        return CurvePoint::infinity();
    }
    const BigInt& p = params_.p;
    const BigInt lambda = mod((3 * pt.x() * pt.x() + params_.a) * inverse(2 * pt.y(), p), p);
    BigInt x = mod(lambda * lambda - 2 * pt.x(), p);
    BigInt y = mod(lambda * (pt.x() - x) - pt.y(), p);
    return CurvePoint{std::move(x), std::move(y)};
}

CurvePoint Curve::add_unchecked(const CurvePoint& lhs, const CurvePoint& rhs) const {
    if(lhs.is_infinity()) {
        return rhs;
    }
    if(rhs.is_infinity()) {
        return lhs;
    }
    const BigInt& p = params_.p;
    if(lhs.x() == rhs.x()) {
        if(mod(lhs.y() + rhs.y(), p) == 0) {
            return CurvePoint::infinity();
        }
        return double_unchecked(lhs);
    }
    const BigInt lambda = mod((rhs.y() - lhs.y()) * inverse(mod(rhs.x() - lhs.x(), p), p), p);
    BigInt x = mod(lambda * lambda - lhs.x() - rhs.x(), p);
    BigInt y = mod(lambda * (lhs.x() - x) - lhs.y(), p);
    return CurvePoint{std::move(x), std::move(y)};
}

CurvePoint Curve::add(const CurvePoint& lhs, const CurvePoint& rhs, OpCounters* counters) const {
    check_point(lhs);
    check_point(rhs);
    count_add(counters);
    return add_unchecked(lhs, rhs);
}

CurvePoint Curve::mul(const BigInt& k, const CurvePoint& pt, OpCounters* counters) const {
    if(k < 0) {
        throw Error(ErrorCode::ValueOutOfRange, "negative scalar");
    }
    check_point(pt);
    count_mult(counters);
    CurvePoint acc;
    for(std::size_t i = bit_length(k); i-- > 0;) {
        acc = double_unchecked(acc);
        if(mpz_tstbit(k.get_mpz_t(), i)) {
            acc = add_unchecked(acc, pt);
        }
    }
    return acc;
}

std::optional<BigInt> Curve::sqrt_mod(const BigInt& v) const {
    const BigInt& p = params_.p;
    const BigInt a = mod(v, p);
    if(a == 0) {
        return BigInt{0};
    }
    if(powm(a, (p - 1) / 2, p) != 1) {
        return std::nullopt;
    }
    if(mod(p, 4) == 3) {
        return powm(a, (p + 1) / 4, p);
    }
    // Tonelli-Shanks: p - 1 = s * 2^e with s odd.
    BigInt s = p - 1;
    unsigned long e = 0;
    while(mpz_even_p(s.get_mpz_t())) {
        s /= 2;
        ++e;
    }
    BigInt z = 2;
    while(powm(z, (p - 1) / 2, p) != p - 1) {
        ++z;
    }
    BigInt x = powm(a, (s + 1) / 2, p);
    BigInt b = powm(a, s, p);
    BigInt g = powm(z, s, p);
    unsigned long r = e;
    while(b != 1) {
        unsigned long m = 0;
        BigInt t = b;
        while(t != 1) {
            t = mod(t * t, p);
            ++m;
        }
        BigInt gs = g;
        for(unsigned long i = 0; i + 1 < r - m; ++i) {
            gs = mod(gs * gs, p);
        }
        x = mod(x * gs, p);
        g = mod(gs * gs, p);
        b = mod(b * g, p);
        r = m;
    }
    return x;
}

CurvePoint Curve::lift_x(const BigInt& x, bool odd_y) const {
    if(x < 0 || x >= params_.p) {
        throw Error(ErrorCode::NotOnCurve, "x outside the field");
    }
    auto y = sqrt_mod(rhs(x));
    if(!y) {
        throw Error(ErrorCode::NotOnCurve, "x^3 + ax + b is a non-residue");
    }
    BigInt yv = *y;
    const bool is_odd = mpz_odd_p(yv.get_mpz_t()) != 0;
    if(is_odd != odd_y && yv != 0) {
        yv = params_.p - yv;
    }
    return CurvePoint{x, std::move(yv)};
}

CurvePoint Curve::lift_x(const BigInt& x) const {
    return lift_x(x, false);
}

Scalar Curve::random_scalar(Rng& rng) const {
    for(;;) {
        BigInt v = rng.below(params_.q);
        if(v != 0) {
            return Scalar{std::move(v)};
        }
    }
}

Scalar Curve::reduce(const BigInt& v) const {
    return Scalar{mod(v, params_.q)};
}

FieldElement Curve::element(const BigInt& v) const {
    if(v < 0 || v >= params_.p) {
        throw Error(ErrorCode::ValueOutOfRange, "field element not reduced");
    }
    return FieldElement{v};
}

namespace profiles {

CurveParams toy() {
    CurveParams c;
    c.name = "toy";
    c.p = 65519;
    c.a = 4;
    c.b = 12;
    c.generator = CurvePoint{BigInt{2}, BigInt{20624}};
    c.q = 65287;
    c.x_bits = 160;
    return c;
}

// SEC 2 secp160r1.
CurveParams paper160() {
    CurveParams c;
    c.name = "paper-160";
    c.p = parse_integer("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF7FFFFFFF");
    c.a = parse_integer("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF7FFFFFFC");
    c.b = parse_integer("0x1C97BEFC54BD7A8B65ACF89F81D4D4ADC565FA45");
    c.generator = CurvePoint{parse_integer("0x4A96B5688EF573284664698968C38BB913CBFC82"),
                             parse_integer("0x23A628553168947D59DCC912042351377AC5FB32")};
    c.q = parse_integer("0x0100000000000000000001F4C8F927AED3CA752257");
    c.x_bits = 160;
    return c;
}

CurveParams by_name(std::string_view name) {
    if(name == "toy") {
        return toy();
    }
    if(name == "paper-160") {
        return paper160();
    }
    throw Error(ErrorCode::InvalidProfile, "unknown curve profile '" + std::string(name) + "'");
}

CurveParams parse(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while(std::getline(in, line)) {
        if(auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto eq = line.find('=');
        if(eq == std::string::npos) {
            if(line.find_first_not_of(" \t\r") != std::string::npos) {
                bad_profile("expected key = value, got '" + line + "'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if(kv.count(key) != 0) {
            bad_profile("duplicate key '" + key + "'");
        }
        kv[key] = trim(line.substr(eq + 1));
    }

    auto take = [&](const char* key) -> BigInt {
        auto it = kv.find(key);
        if(it == kv.end()) {
            bad_profile(std::string("missing key '") + key + "'");
        }
        try {
            BigInt v = parse_integer(it->second);
            kv.erase(it);
            return v;
        } catch(const Error& e) {
            bad_profile(std::string("key '") + key + "': " + e.what());
        }
    };

    CurveParams c;
    if(auto it = kv.find("name"); it != kv.end()) {
        c.name = it->second;
        kv.erase(it);
    } else {
        c.name = "custom";
    }
    c.p = take("p");
    c.a = take("a");
    c.b = take("b");
    BigInt gx = take("gx");
    BigInt gy = take("gy");
    c.generator = CurvePoint{std::move(gx), std::move(gy)};
    c.q = take("q");
    c.cofactor = kv.count("cofactor") ? take("cofactor") : BigInt{1};
    if(kv.count("x_bits")) {
        c.x_bits = take("x_bits").get_ui();
    } else {
        c.x_bits = std::max<std::size_t>(160, (bit_length(c.p) + 7) / 8 * 8);
    }
    if(!kv.empty()) {
        bad_profile("unknown key '" + kv.begin()->first + "'");
    }
    Curve check{c};
    return c;
}

CurveParams load(const std::string& path) {
    std::ifstream f(path);
    if(!f) {
        throw Error(ErrorCode::IoFailure, "cannot open profile '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

} // namespace profiles

} // namespace lisa
