#include "lisa/ecqv.hpp"

#include "lisa/error.hpp"

#include <algorithm>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace lisa {

namespace {

void append(Bytes& out, std::span<const std::uint8_t> in) {
    out.insert(out.end(), in.begin(), in.end());
}

Scalar add_mod(const BigInt& a, const BigInt& b, const BigInt& q) {
    BigInt r = a + b;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
    return Scalar{std::move(r)};
}

void require_length(std::span<const std::uint8_t> bytes, std::size_t n, const char* what) {
    if(bytes.size() != n) {
        throw Error(ErrorCode::MalformedMessage, std::string(what) + ": expected " + std::to_string(n) +
                                                     " bytes, got " + std::to_string(bytes.size()));
    }
}

} // namespace

Bytes encode_point(const CurvePoint& pt, std::size_t x_width) {
    if(pt.is_infinity()) {
        throw Error(ErrorCode::InvalidPoint, "cannot encode the point at infinity");
    }
    Bytes out;
    out.reserve(1 + x_width);
    out.push_back(pt.y_is_odd() ? 0x03 : 0x02);
    append(out, to_bytes_be(pt.x(), x_width));
    return out;
}

CurvePoint decode_point(std::span<const std::uint8_t> bytes, const Curve& curve) {
    require_length(bytes, 1 + curve.params().x_bytes(), "point");
    if(bytes[0] != 0x02 && bytes[0] != 0x03) {
        throw Error(ErrorCode::MalformedMessage, "bad point tag");
    }
    return curve.lift_x(from_bytes_be(bytes.subspan(1)), bytes[0] == 0x03);
}

Bytes RegistrationRequest::encode(const DomainParams& params) const {
    Bytes out;
    append(out, lisa::encode(id));
    append(out, encode_point(r, params.x_bytes()));
    return out;
}

RegistrationRequest RegistrationRequest::decode(std::span<const std::uint8_t> bytes, const DomainParams& params) {
    require_length(bytes, kIdentityBytes + 1 + params.x_bytes(), "registration request");
    return RegistrationRequest{decode_identity(bytes.first(kIdentityBytes)),
                               decode_point(bytes.subspan(kIdentityBytes), params.ec())};
}

Bytes RegistrationResponse::encode(const DomainParams& params) const {
    Bytes out = encode_point(cert.point, params.x_bytes());
    append(out, to_bytes_be(r.value(), params.ec().params().scalar_bytes()));
    return out;
}

RegistrationResponse RegistrationResponse::decode(std::span<const std::uint8_t> bytes, const DomainParams& params) {
    const std::size_t pt = 1 + params.x_bytes();
    const std::size_t sc = params.ec().params().scalar_bytes();
    require_length(bytes, pt + sc, "registration response");
    BigInt r = from_bytes_be(bytes.subspan(pt));
    if(r >= params.ec().order()) {
        throw Error(ErrorCode::MalformedMessage, "scalar not reduced");
    }
    return RegistrationResponse{ImplicitCert{decode_point(bytes.first(pt), params.ec())}, Scalar{std::move(r)}};
}

Bytes encode_record(const RegistrationRecord& rec, const DomainParams& params) {
    Bytes out;
    append(out, encode(rec.id));
    append(out, encode_point(rec.cert.point, params.x_bytes()));
    append(out, encode_point(rec.q, params.x_bytes()));
    append(out, rec.digest.bytes);
    return out;
}

RegistrationRecord decode_record(std::span<const std::uint8_t> bytes, const DomainParams& params) {
    const std::size_t pt = 1 + params.x_bytes();
    require_length(bytes, kIdentityBytes + 2 * pt + kCertDigestBytes, "registration record");
    RegistrationRecord rec;
    rec.id = decode_identity(bytes.first(kIdentityBytes));
    rec.cert.point = decode_point(bytes.subspan(kIdentityBytes, pt), params.ec());
    rec.q = decode_point(bytes.subspan(kIdentityBytes + pt, pt), params.ec());
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(kIdentityBytes + 2 * pt), kCertDigestBytes,
                rec.digest.bytes.begin());
    return rec;
}

Scalar cert_hash(const DomainParams& params, const ImplicitCert& cert, Identity id, OpCounters* counters) {
    Bytes buf = encode_x(cert.point.x_coord(), params.x_bytes());
    append(buf, encode(id));
    return scalar_from_digest(h0(buf, counters), params.ec().order());
}

CurvePoint reconstruct_public_key(const DomainParams& params, const ImplicitCert& cert, Identity id,
                                  OpCounters* counters) {
    const Scalar e = cert_hash(params, cert, id, counters);
    return params.ec().add(params.ec().mul(e, cert.point, counters), params.q_t, counters);
}

CertDigest cert_digest(const DomainParams& params, const ImplicitCert& cert, OpCounters* counters) {
    const Digest d = h0(encode_x(cert.point.x_coord(), params.x_bytes()), counters);
    CertDigest out;
    std::copy_n(d.bytes.begin(), kCertDigestBytes, out.bytes.begin());
    return out;
}

PendingRegistration register_begin_with(const DomainParams& params, Identity id, const Scalar& r_a) {
    CurvePoint r = params.ec().mul_base(r_a);
    return PendingRegistration{r_a, r, RegistrationRequest{id, r}};
}

PendingRegistration register_begin(const DomainParams& params, Identity id, Rng& rng) {
    return register_begin_with(params, id, params.ec().random_scalar(rng));
}

Credential register_finish(const DomainParams& params, Identity id, const Scalar& r_a,
                           const RegistrationResponse& resp) {
    const Curve& ec = params.ec();
    ec.check_point(resp.cert.point);
    if(resp.cert.point.is_infinity()) {
        throw Error(ErrorCode::ReconstructionMismatch, "certificate is the point at infinity");
    }
    const Scalar e = cert_hash(params, resp.cert, id);
    const Scalar d = add_mod(e.value() * r_a.value(), resp.r.value(), ec.order());
    if(d.is_zero()) {
        throw Error(ErrorCode::ReconstructionMismatch, "derived private key is zero; re-register");
    }
    CurvePoint q = ec.mul_base(d);
    if(q != reconstruct_public_key(params, resp.cert, id)) {
        throw Error(ErrorCode::ReconstructionMismatch, "d·P != H0(Cert||ID)·Cert + Q_T");
    }
    return Credential{id, resp.cert, d, std::move(q), cert_digest(params, resp.cert)};
}

TrustedThirdParty TrustedThirdParty::setup_with_key(const CurveParams& curve, const Scalar& d_t) {
    auto ec = std::make_shared<const Curve>(curve);
    if(d_t.is_zero() || d_t.value() >= ec->order()) {
        throw Error(ErrorCode::ValueOutOfRange, "d_T must lie in Z*_q");
    }
    DomainParams params;
    params.q_t = ec->mul_base(d_t);
    params.curve = std::move(ec);
    return TrustedThirdParty{d_t, std::move(params)};
}

TrustedThirdParty TrustedThirdParty::setup(const CurveParams& curve, Rng& rng) {
    const Curve ec{curve};
    return setup_with_key(curve, ec.random_scalar(rng));
}

TrustedThirdParty::Issued TrustedThirdParty::issue_detached(const RegistrationRequest& req, Rng& rng,
                                                            const Scalar* forced_r_t) const {
    const Curve& ec = params_.ec();
    ec.check_point(req.r);
    if(req.r.is_infinity()) {
        throw Error(ErrorCode::InvalidPoint, "R_A is the point at infinity");
    }
    for(bool first = true;; first = false) {
        const Scalar r_t = (first && forced_r_t) ? *forced_r_t : ec.random_scalar(rng);
        const CurvePoint big_r_t = ec.mul_base(r_t);
        const ImplicitCert cert{ec.add(req.r, big_r_t)};
        if(cert.point.is_infinity()) {
            continue;
        }
        const Scalar e = cert_hash(params_, cert, req.id);
        const Scalar r = add_mod(e.value() * r_t.value(), d_t_.value(), ec.order());
        if(r.is_zero()) {
            continue;
        }
        RegistrationRecord record{req.id, cert, reconstruct_public_key(params_, cert, req.id),
                                  cert_digest(params_, cert)};
        return Issued{RegistrationResponse{cert, r}, std::move(record)};
    }
}

RegistrationResponse TrustedThirdParty::issue(const RegistrationRequest& req, Rng& rng, const Scalar* forced_r_t) {
    if(is_registered(req.id)) {
        throw Error(ErrorCode::DuplicateIdentity, "identity " + std::to_string(req.id.value));
    }
    Issued issued = issue_detached(req, rng, forced_r_t);
    commit(issued.record);
    return issued.response;
}

void TrustedThirdParty::commit(const RegistrationRecord& record) {
    if(!issued_.emplace(record.id.value, record).second) {
        throw Error(ErrorCode::DuplicateIdentity, "identity " + std::to_string(record.id.value));
    }
}

Credential enroll(TrustedThirdParty& ttp, Identity id, Rng& rng) {
    if(ttp.is_registered(id)) {
        throw Error(ErrorCode::DuplicateIdentity, "identity " + std::to_string(id.value));
    }
    for(;;) {
        const PendingRegistration pending = register_begin(ttp.params(), id, rng);
        const auto issued = ttp.issue_detached(pending.request, rng);
        try {
            Credential cred = register_finish(ttp.params(), id, pending.r_a, issued.response);
            ttp.commit(issued.record);
            return cred;
        } catch(const Error& e) {
            if(e.code() != ErrorCode::ReconstructionMismatch) {
                throw;
            }
        }
    }
}

void Directory::insert(const RegistrationRecord& record) {
    std::unique_lock lock(mu_);
    if(!by_id_.emplace(record.id.value, record).second) {
        throw Error(ErrorCode::DuplicateIdentity, "identity " + std::to_string(record.id.value));
    }
}

RegistrationRecord Directory::lookup(const CertDigest& digest, Identity id) const {
    lookups_.fetch_add(1, std::memory_order_relaxed);
    std::shared_lock lock(mu_);
    auto it = by_id_.find(id.value);
    if(it == by_id_.end() || it->second.digest != digest) {
        throw Error(ErrorCode::UnknownCredential);
    }
    return it->second;
}

RegistrationRecord Directory::lookup_by_cert_x(const FieldElement& cert_x, Identity id) const {
    lookups_.fetch_add(1, std::memory_order_relaxed);
    std::shared_lock lock(mu_);
    auto it = by_id_.find(id.value);
    if(it == by_id_.end() || it->second.cert.point.x() != cert_x.value()) {
        throw Error(ErrorCode::UnknownCredential);
    }
    return it->second;
}

std::size_t Directory::size() const {
    std::shared_lock lock(mu_);
    return by_id_.size();
}

std::vector<RegistrationRecord> Directory::records() const {
    std::shared_lock lock(mu_);
    std::vector<RegistrationRecord> out;
    out.reserve(by_id_.size());
    for(const auto& [id, rec] : by_id_) {
        out.push_back(rec);
    }
    return out;
}

void Directory::export_text(std::ostream& out, const DomainParams& params) const {
    const std::size_t w = params.x_bytes();
    for(const auto& rec : records()) {
        out << hex_encode(encode(rec.id)) << ' ' << hex_encode(to_bytes_be(rec.cert.point.x(), w)) << ' '
            << (rec.cert.point.y_is_odd() ? 1 : 0) << ' ' << hex_encode(to_bytes_be(rec.q.x(), w)) << ' '
            << (rec.q.y_is_odd() ? 1 : 0) << ' ' << hex_encode(rec.digest.bytes) << '\n';
    }
}

void Directory::import_text(std::istream& in, const DomainParams& params) {
    const Curve& ec = params.ec();
    std::string line;
    std::size_t lineno = 0;
    while(std::getline(in, line)) {
        ++lineno;
        if(line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string id_hex, cx, cpar, qx, qpar, dig, extra;
        if(!(fields >> id_hex >> cx >> cpar >> qx >> qpar >> dig) || (fields >> extra) ||
           (cpar != "0" && cpar != "1") || (qpar != "0" && qpar != "1")) {
            throw Error(ErrorCode::InvalidConfig, "registry line " + std::to_string(lineno) + " malformed");
        }
        const Bytes id_bytes = hex_decode(id_hex);
        const Bytes dig_bytes = hex_decode(dig);
        if(id_bytes.size() != kIdentityBytes || dig_bytes.size() != kCertDigestBytes ||
           cx.size() != 2 * params.x_bytes() || qx.size() != 2 * params.x_bytes()) {
            throw Error(ErrorCode::InvalidConfig, "registry line " + std::to_string(lineno) + " has wrong widths");
        }
        RegistrationRecord rec;
        rec.id = decode_identity(id_bytes);
        rec.cert.point = ec.lift_x(from_bytes_be(hex_decode(cx)), cpar == "1");
        rec.q = ec.lift_x(from_bytes_be(hex_decode(qx)), qpar == "1");
        std::copy(dig_bytes.begin(), dig_bytes.end(), rec.digest.bytes.begin());
        if(rec.digest != cert_digest(params, rec.cert) || rec.q != reconstruct_public_key(params, rec.cert, rec.id)) {
            throw Error(ErrorCode::ReconstructionMismatch, "registry line " + std::to_string(lineno));
        }
        insert(rec);
    }
}

} // namespace lisa
