// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/crypto.hpp"
#include "core/types.hpp"

namespace cove::attest {

/// Compound device identity secret for one TCB layer:
///   cdi(i) = HMAC-SHA256(cdi(i-1), digest(layer i)),
/// rooted in the platform's device secret. Never leaves this module.
using Cdi = std::array<uint8_t, 32>;

enum class LayerKind : uint8_t { RoT = 0, TsmDriver = 1, Tsm = 2, Tvm = 3 };

const char* to_string(LayerKind k);

struct LayerSubject {
  LayerKind kind = LayerKind::RoT;
  uint64_t id = 0;  // TvmId for leaf certs, 0 otherwise
  auto operator<=>(const LayerSubject&) const = default;
};

struct Claim {
  std::string key;
  std::vector<uint8_t> value;
  auto operator<=>(const Claim&) const = default;
};

// Claim keys used by the platform layers.
inline constexpr const char* kClaimDigest = "digest";
inline constexpr const char* kClaimVersion = "version";
inline constexpr const char* kClaimDebugPlatform = "debug_platform";
inline constexpr const char* kClaimMeasurement = "measurement";
inline constexpr const char* kClaimDebug = "debug";
inline constexpr const char* kClaimReportData = "report_data";

/// One link of the credential chain. The signature is by the issuer's key
/// over the canonical encoding of (subject, subject_public_key, claims).
struct LayerCert {
  LayerSubject subject;
  crypto::PublicKey subject_public_key{};
  std::vector<Claim> claims;  // sorted by key
  LayerSubject issuer;
  crypto::Signature signature{};

  const Claim* find_claim(const std::string& key) const;
};

/// Canonical byte encoding of the signed portion of a cert.
std::vector<uint8_t> cert_signed_payload(const LayerCert& cert);

inline constexpr size_t kChainLength = 4;  // RoT, TSM-driver, TSM, TVM

struct AttestationEvidence {
  std::vector<LayerCert> chain;  // root first, TVM leaf last
};

struct DerivedLayer {
  Cdi cdi;
  LayerCert cert;
};

/// Derive the next layer: child CDI from (parent CDI, layer digest), a
/// deterministic keypair from the child CDI, and a cert for it issued and
/// signed by the parent. Same inputs always produce identical bytes.
DerivedLayer derive_layer(const Cdi& parent_cdi, LayerSubject parent_subject,
                          LayerSubject subject,
                          const crypto::Digest& layer_digest,
                          std::vector<Claim> claims);

/// Self-signed root cert for the device identity.
LayerCert make_root_cert(const Cdi& root_cdi);

crypto::PublicKey public_key_for(const Cdi& cdi);

enum class RejectReason : uint8_t {
  BadSignature,
  ChainBroken,
  WrongRoot,
  TcbMismatch,
  DebugForbidden,
  MeasurementMismatch,
};

const char* to_string(RejectReason r);

struct Verdict {
  bool accepted = false;
  std::optional<RejectReason> reason;

  static Verdict accept() { return {true, std::nullopt}; }
  static Verdict reject(RejectReason r) { return {false, r}; }
};

struct VerifyPolicy {
  std::optional<crypto::Digest> expected_tsm_driver_digest;
  std::optional<crypto::Digest> expected_tsm_digest;
  bool allow_debug = false;
  std::optional<crypto::Digest> expected_tvm_measurement;
};

/// Relying-party check: structure, issuer linkage, root key, every
/// signature, TCB digests against policy, debug posture, and (optionally)
/// the TVM measurement. Never throws; malformed chains reject as
/// ChainBroken.
Verdict verify_evidence(const AttestationEvidence& evidence,
                        const crypto::PublicKey& trusted_root,
                        const VerifyPolicy& policy);

std::vector<uint8_t> serialize_evidence(const AttestationEvidence& evidence);
std::optional<AttestationEvidence> parse_evidence(
    std::span<const uint8_t> bytes);

/// Structured-text dump for the CLI.
std::string evidence_to_text(const AttestationEvidence& evidence);

/// Boot-time identity state: the non-leaf chain and the TSM-layer CDI,
/// ready to issue per-TVM evidence. CDIs and secret keys stay inside.
class PlatformIdentity {
 public:
  static PlatformIdentity derive(const std::array<uint8_t, 32>& root_secret,
                                 const crypto::Digest& tsm_driver_digest,
                                 const crypto::Digest& tsm_digest,
                                 uint64_t tsm_version, bool debug_platform);

  const crypto::PublicKey& root_public_key() const { return root_public_key_; }

  AttestationEvidence issue_tvm_evidence(
      TvmId tvm, const crypto::Digest& tvm_measurement, bool debug_opt_in,
      const std::array<uint8_t, 64>& report_data) const;

 private:
  PlatformIdentity() = default;

  Cdi tsm_cdi_{};
  std::vector<LayerCert> prefix_;  // RoT, TSM-driver, TSM
  crypto::PublicKey root_public_key_{};
};

}  // namespace cove::attest
