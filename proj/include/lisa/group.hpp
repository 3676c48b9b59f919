#pragma once

// Prime-field short-Weierstrass curve arithmetic, affine coordinates.
//
// Not constant time. This code exists to make the protocol's algebra and its
// operation counts checkable, not to resist side channels.

#include "lisa/bigint.hpp"
#include "lisa/counters.hpp"
#include "lisa/rng.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace lisa {

/// Canonical residue in [0, p) for the curve it was produced by.
class FieldElement {
  public:
    FieldElement() = default;
    explicit FieldElement(BigInt value) : value_(std::move(value)) {}

    const BigInt& value() const noexcept { return value_; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.value_ == b.value_; }

  private:
    BigInt value_{0};
};

/// Element of Z_q. Random draws come from Curve::random_scalar and are never 0.
class Scalar {
  public:
    Scalar() = default;
    explicit Scalar(BigInt value) : value_(std::move(value)) {}

    const BigInt& value() const noexcept { return value_; }
    bool is_zero() const { return value_ == 0; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

  private:
    BigInt value_{0};
};

class CurvePoint {
  public:
    /// Default-constructed point is the point at infinity.
    CurvePoint() = default;
    CurvePoint(BigInt x, BigInt y) : x_(std::move(x)), y_(std::move(y)), infinity_(false) {}

    static CurvePoint infinity() { return CurvePoint{}; }

    bool is_infinity() const noexcept { return infinity_; }
    const BigInt& x() const noexcept { return x_; }
    const BigInt& y() const noexcept { return y_; }
    FieldElement x_coord() const { return FieldElement{x_}; }
    bool y_is_odd() const { return mpz_odd_p(y_.get_mpz_t()) != 0; }

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        if(a.infinity_ || b.infinity_) {
            return a.infinity_ == b.infinity_;
        }
        return a.x_ == b.x_ && a.y_ == b.y_;
    }

  private:
    BigInt x_{0};
    BigInt y_{0};
    bool infinity_ = true;
};

struct CurveParams {
    std::string name;
    BigInt p;
    BigInt a;
    BigInt b;
    CurvePoint generator;
    BigInt q;
    BigInt cofactor{1};
    /// Width of an x-coordinate on the wire. Multiple of 8, at least bit_length(p).
    std::size_t x_bits = 160;

    std::size_t x_bytes() const noexcept { return x_bits / 8; }
    std::size_t scalar_bytes() const { return (bit_length(q) + 7) / 8; }
};

/// Checks primality of p and q, non-singularity, the generator's curve
/// membership, cofactor 1 and the x width. The generator's order is checked by
/// the Curve constructor. Throws Error(InvalidProfile) naming the failed check.
void validate(const CurveParams& params);

namespace profiles {

CurveParams toy();
CurveParams paper160();

/// "toy" or "paper-160". Throws Error(InvalidProfile) otherwise.
CurveParams by_name(std::string_view name);

/// Plain-text profile: `key = value` lines, `#` comments. Keys: name, p, a, b,
/// gx, gy, q, cofactor (optional, must be 1), x_bits (optional). Integers are
/// decimal or 0x-prefixed hex. The result is validated.
CurveParams parse(std::string_view text);
CurveParams load(const std::string& path);

} // namespace profiles

/// A validated curve. Immutable; all operations are const and thread safe.
class Curve {
  public:
    explicit Curve(CurveParams params);

    const CurveParams& params() const noexcept { return params_; }
    const CurvePoint& generator() const noexcept { return params_.generator; }
    const BigInt& order() const noexcept { return params_.q; }
    const BigInt& prime() const noexcept { return params_.p; }

    bool on_curve(const CurvePoint& pt) const;

    /// Throws Error(InvalidPoint) unless pt is Infinity or on the curve.
    void check_point(const CurvePoint& pt) const;

    /// Group sum. Counts one point addition.
    CurvePoint add(const CurvePoint& lhs, const CurvePoint& rhs, OpCounters* counters = nullptr) const;

    CurvePoint negate(const CurvePoint& pt) const;

    /// k·pt by double-and-add, k >= 0. Counts exactly one multiplication.
    CurvePoint mul(const BigInt& k, const CurvePoint& pt, OpCounters* counters = nullptr) const;
    CurvePoint mul(const Scalar& k, const CurvePoint& pt, OpCounters* counters = nullptr) const {
        return mul(k.value(), pt, counters);
    }
    CurvePoint mul_base(const Scalar& k, OpCounters* counters = nullptr) const {
        return mul(k.value(), params_.generator, counters);
    }

    /// Point with this x and even y. Throws Error(NotOnCurve) if x >= p or
    /// x^3 + ax + b is a non-residue.
    CurvePoint lift_x(const BigInt& x) const;
    CurvePoint lift_x(const BigInt& x, bool odd_y) const;

    /// Square root mod p, or nullopt for a non-residue.
    std::optional<BigInt> sqrt_mod(const BigInt& v) const;

    /// Uniform over Z*_q.
    Scalar random_scalar(Rng& rng) const;

    Scalar reduce(const BigInt& v) const;

    FieldElement element(const BigInt& v) const;

  private:
    BigInt rhs(const BigInt& x) const;
    CurvePoint add_unchecked(const CurvePoint& lhs, const CurvePoint& rhs) const;
    CurvePoint double_unchecked(const CurvePoint& pt) const;

    CurveParams params_;
};

using CurvePtr = std::shared_ptr<const Curve>;

} // namespace lisa
