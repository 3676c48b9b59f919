#include "lisa/handshake.hpp"

#include <algorithm>

namespace lisa {

namespace {

void append(Bytes& out, std::span<const std::uint8_t> in) {
    out.insert(out.end(), in.begin(), in.end());
}

} // namespace

std::string_view to_string(WireProfile w) noexcept {
    return w == WireProfile::Strict ? "strict" : "paper-160";
}

WireProfile parse_wire_profile(std::string_view name) {
    if(name == "paper-160") {
        return WireProfile::Paper160;
    }
    if(name == "strict") {
        return WireProfile::Strict;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown wire profile '" + std::string(name) + "'");
}

std::string_view to_string(SmState s) noexcept {
    switch(s) {
        case SmState::Init: return "Init";
        case SmState::Sent: return "Sent";
        case SmState::Established: return "Established";
        case SmState::Failed: return "Failed";
    }
    return "?";
}

std::string_view to_string(SpState s) noexcept {
    switch(s) {
        case SpState::Idle: return "Idle";
        case SpState::Challenged: return "Challenged";
        case SpState::Failed: return "Failed";
    }
    return "?";
}

WireLayout WireLayout::make(const DomainParams& params, WireProfile wire) {
    WireLayout l;
    l.x_bytes = params.x_bytes();
    l.mask_bytes = wire == WireProfile::Strict ? l.x_bytes + kIdentityBytes : kCertDigestBytes + kIdentityBytes;
    if(wire == WireProfile::Paper160 && l.mask_bytes != l.x_bytes) {
        // The digest||id token must exactly fill an x-coordinate.
        throw Error(ErrorCode::InvalidProfile, "paper-160 wire profile needs a 160-bit x width");
    }
    return l;
}

Bytes encode_msg(const AuthRequest& msg, const WireLayout& layout) {
    if(msg.auth_sm.bytes.size() != layout.mask_bytes) {
        throw Error(ErrorCode::MalformedMessage, "Auth_SM width does not match the wire profile");
    }
    Bytes out;
    out.reserve(layout.request_bytes());
    append(out, encode(msg.t_sm));
    append(out, encode_x(msg.r_sm_x, layout.x_bytes));
    append(out, msg.auth_sm.bytes);
    return out;
}

Bytes encode_msg(const AuthResponse& msg) {
    Bytes out;
    out.reserve(kTimestampBytes + kDigestBytes);
    append(out, encode(msg.t_sp));
    append(out, msg.auth_sp.bytes);
    return out;
}

AuthRequest decode_request(std::span<const std::uint8_t> bytes, const WireLayout& layout) {
    if(bytes.size() != layout.request_bytes()) {
        throw Error(ErrorCode::MalformedMessage, "message 1 must be " + std::to_string(layout.request_bytes()) +
                                                     " bytes, got " + std::to_string(bytes.size()));
    }
    AuthRequest msg;
    msg.t_sm = decode_timestamp(bytes.first(kTimestampBytes));
    msg.r_sm_x = decode_x(bytes.subspan(kTimestampBytes, layout.x_bytes));
    const auto tok = bytes.subspan(kTimestampBytes + layout.x_bytes);
    msg.auth_sm.bytes.assign(tok.begin(), tok.end());
    return msg;
}

AuthResponse decode_response(std::span<const std::uint8_t> bytes) {
    if(bytes.size() != kTimestampBytes + kDigestBytes) {
        throw Error(ErrorCode::MalformedMessage, "message 2 must be 24 bytes, got " + std::to_string(bytes.size()));
    }
    AuthResponse msg;
    msg.t_sp = decode_timestamp(bytes.first(kTimestampBytes));
    std::copy(bytes.begin() + kTimestampBytes, bytes.end(), msg.auth_sp.bytes.begin());
    return msg;
}

bool is_fresh(Timestamp t, Timestamp now, std::uint32_t window) noexcept {
    const std::int64_t skew = static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(t.seconds);
    return (skew < 0 ? -skew : skew) <= static_cast<std::int64_t>(window);
}

Digest auth_tag(const FieldElement& shared_x, const FieldElement& cert_x, Identity id, Timestamp t_sp,
                std::size_t x_width, OpCounters* counters) {
    Bytes buf = encode_x(shared_x, x_width);
    append(buf, encode_x(cert_x, x_width));
    append(buf, encode(id));
    const auto t = encode(t_sp);
    for(std::size_t i = 0; i != t.size(); ++i) {
        buf[buf.size() - t.size() + i] ^= t[i];
    }
    return h0(buf, counters);
}

Bytes credential_token(const Credential& cred, WireProfile wire, std::size_t x_width) {
    Bytes out;
    if(wire == WireProfile::Strict) {
        out = encode_x(cred.cert.point.x_coord(), x_width);
    } else {
        out.assign(cred.digest.bytes.begin(), cred.digest.bytes.end());
    }
    append(out, encode(cred.id));
    return out;
}

Bytes token_mask(const FieldElement& shared_x, const WireLayout& layout, WireProfile wire, OpCounters* counters) {
    if(wire == WireProfile::Strict) {
        return expand_mask(shared_x, layout.x_bytes, layout.mask_bytes, counters);
    }
    return encode_x(shared_x, layout.mask_bytes);
}

bool ReplayCache::try_insert(Timestamp t_sm, const FieldElement& r_sm_x, Timestamp now) {
    std::lock_guard lock(mu_);
    const std::int64_t horizon = static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(window_);
    while(!seen_.empty() && static_cast<std::int64_t>(seen_.begin()->first) < horizon) {
        seen_.erase(seen_.begin());
    }
    return seen_.emplace(t_sm.seconds, r_sm_x.value().get_str(16)).second;
}

void ReplayCache::erase(Timestamp t_sm, const FieldElement& r_sm_x) {
    std::lock_guard lock(mu_);
    seen_.erase(Key{t_sm.seconds, r_sm_x.value().get_str(16)});
}

std::size_t ReplayCache::size() const {
    std::lock_guard lock(mu_);
    return seen_.size();
}

SmSession::SmSession(DomainParams params, Credential cred, CurvePoint peer_q, HandshakeConfig config)
    : params_(std::move(params)),
      cred_(std::move(cred)),
      peer_q_(std::move(peer_q)),
      config_(config),
      layout_(WireLayout::make(params_, config.wire)) {
    params_.ec().check_point(peer_q_);
    if(peer_q_.is_infinity()) {
        throw Error(ErrorCode::InvalidPoint, "peer public key is the point at infinity");
    }
}

void SmSession::fail(ErrorCode code, const std::string& detail) {
    state_ = SmState::Failed;
    failure_ = code;
    throw Error(code, detail);
}

AuthRequest SmSession::initiate(Timestamp now, Rng& rng, OpCounters* counters) {
    return initiate_with(params_.ec().random_scalar(rng), now, counters);
}

AuthRequest SmSession::initiate_with(const Scalar& r_sm, Timestamp now, OpCounters* counters) {
    if(state_ != SmState::Init) {
        throw Error(ErrorCode::InvalidState, "initiate requires Init");
    }
    if(r_sm.is_zero() || r_sm.value() >= params_.ec().order()) {
        throw Error(ErrorCode::ValueOutOfRange, "r_SM must lie in Z*_q");
    }
    const Curve& ec = params_.ec();
    r_sm_ = r_sm;
    t_sm_ = now;
    const CurvePoint big_r = ec.mul_base(r_sm_, counters);
    shared_x_ = ec.mul(r_sm_, peer_q_, counters).x_coord();

    const Bytes token = credential_token(cred_, config_.wire, layout_.x_bytes);
    const Bytes mask = token_mask(shared_x_, layout_, config_.wire, counters);

    AuthRequest req;
    req.t_sm = t_sm_;
    req.r_sm_x = big_r.x_coord();
    req.auth_sm = xor_mask(token, mask, t_sm_);
    state_ = SmState::Sent;
    return req;
}

SessionKey SmSession::finalize(const AuthResponse& resp, Timestamp now, OpCounters* counters) {
    if(state_ != SmState::Sent) {
        throw Error(ErrorCode::InvalidState, "finalize requires Sent");
    }
    if(!is_fresh(resp.t_sp, now, config_.window)) {
        fail(ErrorCode::TimestampExpired, "T_SP outside the freshness window");
    }
    const FieldElement cert_x = cred_.cert.point.x_coord();
    const Digest expected = auth_tag(shared_x_, cert_x, cred_.id, resp.t_sp, layout_.x_bytes, counters);
    if(expected != resp.auth_sp) {
        fail(ErrorCode::AuthTagMismatch);
    }
    key_ = kdf(cred_.id, cert_x, shared_x_, resp.t_sp, t_sm_, layout_.x_bytes, counters);
    state_ = SmState::Established;
    return *key_;
}

SpSession::SpSession(DomainParams params, Credential self, const Directory& directory, HandshakeConfig config)
    : params_(std::move(params)),
      self_(std::move(self)),
      directory_(&directory),
      config_(config),
      layout_(WireLayout::make(params_, config.wire)) {}

AuthResponse SpSession::respond(const AuthRequest& req, Timestamp now, ReplayCache* cache, OpCounters* counters) {
    if(state_ != SpState::Idle) {
        throw Error(ErrorCode::InvalidState, "respond requires Idle");
    }
    const bool use_cache = config_.replay_cache && cache != nullptr;
    bool reserved = false;
    try {
        if(req.auth_sm.bytes.size() != layout_.mask_bytes) {
            throw Error(ErrorCode::MalformedMessage, "Auth_SM width does not match the wire profile");
        }
        // Gate 1
        if(!is_fresh(req.t_sm, now, config_.window)) {
            throw Error(ErrorCode::TimestampExpired, "T_SM outside the freshness window");
        }
        // Gate 1b
        if(use_cache) {
            if(!cache->try_insert(req.t_sm, req.r_sm_x, now)) {
                throw Error(ErrorCode::ReplayDetected);
            }
            reserved = true;
        }
        // Gate 2
        const Curve& ec = params_.ec();
        const CurvePoint big_r = ec.lift_x(req.r_sm_x.value());
        const FieldElement shared_x = ec.mul(self_.d, big_r, counters).x_coord();
        const Bytes mask = token_mask(shared_x, layout_, config_.wire, counters);
        const Bytes token = xor_unmask(req.auth_sm, mask, req.t_sm);
        const auto token_span = std::span<const std::uint8_t>(token);
        const Identity id = decode_identity(token_span.last(kIdentityBytes));
        RegistrationRecord record;
        if(config_.wire == WireProfile::Strict) {
            record = directory_->lookup_by_cert_x(decode_x(token_span.first(layout_.x_bytes)), id);
        } else {
            CertDigest digest;
            std::copy_n(token.begin(), kCertDigestBytes, digest.bytes.begin());
            record = directory_->lookup(digest, id);
        }
        // Gate 3
        if(reconstruct_public_key(params_, record.cert, record.id, counters) != record.q) {
            throw Error(ErrorCode::KeyMismatch, "reconstructed Q_A differs from the directory");
        }

        AuthResponse resp;
        resp.t_sp = now;
        const FieldElement cert_x = record.cert.point.x_coord();
        resp.auth_sp = auth_tag(shared_x, cert_x, record.id, resp.t_sp, layout_.x_bytes, counters);
        key_ = kdf(record.id, cert_x, shared_x, resp.t_sp, req.t_sm, layout_.x_bytes, counters);
        peer_ = std::move(record);
        state_ = SpState::Challenged;
        return resp;
    } catch(const Error& e) {
        if(reserved) {
            cache->erase(req.t_sm, req.r_sm_x);
        }
        state_ = SpState::Failed;
        failure_ = e.code();
        throw;
    }
}

} // namespace lisa
