#pragma once

#include "lisa/actors.hpp"
#include "lisa/group.hpp"
#include "oracle.hpp"

#include <cstdlib>
#include <memory>

namespace fixtures {

/// y^2 = x^3 + x + 4 over F_97: 89 points, prime order, p = 1 mod 4.
inline lisa::CurveParams micro() {
    lisa::CurveParams c;
    c.name = "micro";
    c.p = 97;
    c.a = 1;
    c.b = 4;
    c.generator = lisa::CurvePoint{0, 2};
    c.q = 89;
    c.x_bits = 8;
    return c;
}

inline oracle::SmallCurve small(const lisa::CurveParams& c) {
    return {static_cast<oracle::i64>(c.p.get_si()), static_cast<oracle::i64>(c.a.get_si()),
            static_cast<oracle::i64>(c.b.get_si())};
}

inline oracle::Pt to_oracle(const lisa::CurvePoint& p) {
    if(p.is_infinity()) {
        return {};
    }
    return oracle::pt(p.x().get_si(), p.y().get_si());
}

inline lisa::CurvePoint from_oracle(const oracle::Pt& p) {
    return p.inf ? lisa::CurvePoint{} : lisa::CurvePoint{p.x, p.y};
}

inline oracle::Domain toy_domain() {
    const auto c = lisa::profiles::toy();
    return {small(c), to_oracle(c.generator), static_cast<oracle::i64>(c.q.get_si()), c.x_bytes()};
}

inline std::shared_ptr<const lisa::Curve> toy_curve() {
    static const auto c = std::make_shared<const lisa::Curve>(lisa::profiles::toy());
    return c;
}

/// Provisioned toy deployment shared by tests that only read from it.
inline const lisa::simnet::Deployment& toy_deployment() {
    static const lisa::simnet::Deployment d = lisa::simnet::provision(lisa::profiles::toy(), 4, 42);
    return d;
}

inline const lisa::simnet::Deployment& paper_deployment() {
    static const lisa::simnet::Deployment d = lisa::simnet::provision(lisa::profiles::paper160(), 2, 43);
    return d;
}

inline std::string source_path(const std::string& rel) { return std::string(LISA_SOURCE_DIR) + "/" + rel; }

} // namespace fixtures
