#pragma once

// Setup and registration: the trusted third party, ECQV implicit-certificate
// issuance, key reconstruction, and the credential directory SPs consult.

#include "lisa/group.hpp"
#include "lisa/prims.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

namespace lisa {

/// The public tuple <E, P, q, H0, Q_T>.
struct DomainParams {
    CurvePtr curve;
    CurvePoint q_t;
    std::string hash_id = "sha256/160";

    const Curve& ec() const noexcept { return *curve; }
    std::size_t x_bytes() const noexcept { return curve->params().x_bytes(); }
};

struct ImplicitCert {
    CurvePoint point;
    friend bool operator==(const ImplicitCert&, const ImplicitCert&) = default;
};

struct Credential {
    Identity id;
    ImplicitCert cert;
    Scalar d;        // private key
    CurvePoint q;    // public key, q == d·P
    CertDigest digest;
};

struct RegistrationRecord {
    Identity id;
    ImplicitCert cert;
    CurvePoint q;
    CertDigest digest;
    friend bool operator==(const RegistrationRecord&, const RegistrationRecord&) = default;
};

// Secure-channel messages. Points travel compressed: 0x02/0x03 || x.
struct RegistrationRequest {
    Identity id;
    CurvePoint r;

    Bytes encode(const DomainParams& params) const;
    static RegistrationRequest decode(std::span<const std::uint8_t> bytes, const DomainParams& params);
    friend bool operator==(const RegistrationRequest&, const RegistrationRequest&) = default;
};

struct RegistrationResponse {
    ImplicitCert cert;
    Scalar r;

    Bytes encode(const DomainParams& params) const;
    static RegistrationResponse decode(std::span<const std::uint8_t> bytes, const DomainParams& params);
    friend bool operator==(const RegistrationResponse&, const RegistrationResponse&) = default;
};

Bytes encode_record(const RegistrationRecord& rec, const DomainParams& params);
RegistrationRecord decode_record(std::span<const std::uint8_t> bytes, const DomainParams& params);

Bytes encode_point(const CurvePoint& pt, std::size_t x_width);
/// Throws Error(MalformedMessage) on a bad tag or length, Error(NotOnCurve) on
/// an x that does not lift.
CurvePoint decode_point(std::span<const std::uint8_t> bytes, const Curve& curve);

/// H0(x(Cert) || ID) as a scalar. Counts one hash.
Scalar cert_hash(const DomainParams& params, const ImplicitCert& cert, Identity id, OpCounters* counters = nullptr);

/// Q = H0(Cert || ID)·Cert + Q_T. Counts one hash, one mult, one add.
CurvePoint reconstruct_public_key(const DomainParams& params, const ImplicitCert& cert, Identity id,
                                  OpCounters* counters = nullptr);

/// Leading 128 bits of h0(encode(x(Cert))).
CertDigest cert_digest(const DomainParams& params, const ImplicitCert& cert, OpCounters* counters = nullptr);

struct PendingRegistration {
    Scalar r_a;
    CurvePoint r;
    RegistrationRequest request;
};

/// Entity side, step 1: fresh r_A, R_A = r_A·P.
PendingRegistration register_begin(const DomainParams& params, Identity id, Rng& rng);
PendingRegistration register_begin_with(const DomainParams& params, Identity id, const Scalar& r_a);

/// Entity side, final step: d = H0(Cert||ID)·r_A + r, Q = d·P, and the
/// reconstruction check. Throws Error(ReconstructionMismatch) on a forged or
/// corrupted response, or when d == 0.
Credential register_finish(const DomainParams& params, Identity id, const Scalar& r_a,
                           const RegistrationResponse& resp);

/// TTP state: holds d_T, the public parameters and the registry of issued
/// certificates. Mutated only by issue/commit.
class TrustedThirdParty {
  public:
    struct Issued {
        RegistrationResponse response;
        RegistrationRecord record;
    };

    static TrustedThirdParty setup(const CurveParams& curve, Rng& rng);
    static TrustedThirdParty setup_with_key(const CurveParams& curve, const Scalar& d_t);

    const DomainParams& params() const noexcept { return params_; }

    /// Issues a certificate without touching the registry. `forced_r_t`, when
    /// given, is tried first; degenerate draws (Cert = Infinity or r = 0) are
    /// retried with fresh randomness from rng.
    Issued issue_detached(const RegistrationRequest& req, Rng& rng, const Scalar* forced_r_t = nullptr) const;

    /// ttp_issue: issue_detached plus commit.
    RegistrationResponse issue(const RegistrationRequest& req, Rng& rng, const Scalar* forced_r_t = nullptr);

    /// Throws Error(DuplicateIdentity) if the id is already registered.
    void commit(const RegistrationRecord& record);

    bool is_registered(Identity id) const { return issued_.count(id.value) != 0; }
    const std::map<std::uint32_t, RegistrationRecord>& issued() const noexcept { return issued_; }

  private:
    TrustedThirdParty(Scalar d_t, DomainParams params) : d_t_(std::move(d_t)), params_(std::move(params)) {}

    Scalar d_t_;
    DomainParams params_;
    std::map<std::uint32_t, RegistrationRecord> issued_;
};

/// Full registration flow for one entity against a local TTP, retrying when the
/// derived private key is 0. The record is committed only on success.
Credential enroll(TrustedThirdParty& ttp, Identity id, Rng& rng);

/// Registration records pushed by the TTP to service providers.
/// One writer, many concurrent readers.
class Directory {
  public:
    Directory() = default;
    Directory(const Directory&) = delete;
    Directory& operator=(const Directory&) = delete;

    /// Throws Error(DuplicateIdentity).
    void insert(const RegistrationRecord& record);

    /// Unique record matching both digest and id; Error(UnknownCredential) otherwise.
    RegistrationRecord lookup(const CertDigest& digest, Identity id) const;
    /// Strict wire profile: match on the full certificate x-coordinate.
    RegistrationRecord lookup_by_cert_x(const FieldElement& cert_x, Identity id) const;

    std::size_t size() const;
    std::uint64_t lookups() const noexcept { return lookups_.load(); }
    std::vector<RegistrationRecord> records() const;

    /// One record per line: id cert_x cert_y_parity q_x q_y_parity digest (hex).
    void export_text(std::ostream& out, const DomainParams& params) const;
    /// Validates each record's digest and ECQV reconstruction.
    void import_text(std::istream& in, const DomainParams& params);

  private:
    mutable std::shared_mutex mu_;
    std::map<std::uint32_t, RegistrationRecord> by_id_;
    mutable std::atomic<std::uint64_t> lookups_{0};
};

} // namespace lisa
