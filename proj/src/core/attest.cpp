// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/attest.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace cove::attest {

namespace {

const uint8_t kEvidenceMagic[4] = {'C', 'V', 'E', 'V'};
constexpr uint8_t kEvidenceVersion = 1;

// Domain separation label for CDI -> signing-key-seed derivation.
const char* kKeySeedLabel = "cove/identity-key";

void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_bytes(std::vector<uint8_t>& buf, std::span<const uint8_t> bytes) {
  put_u32(buf, static_cast<uint32_t>(bytes.size()));
  buf.insert(buf.end(), bytes.begin(), bytes.end());
}

struct Reader {
  std::span<const uint8_t> data;
  size_t pos = 0;

  bool take(void* out, size_t n) {
    if (pos + n > data.size()) return false;
    if (n > 0) std::memcpy(out, data.data() + pos, n);
    pos += n;
    return true;
  }
  bool take_u8(uint8_t& v) { return take(&v, 1); }
  bool take_u32(uint32_t& v) {
    uint8_t b[4];
    if (!take(b, 4)) return false;
    v = b[0] | uint32_t{b[1]} << 8 | uint32_t{b[2]} << 16 | uint32_t{b[3]} << 24;
    return true;
  }
  bool take_u64(uint64_t& v) {
    uint8_t b[8];
    if (!take(b, 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | b[i];
    return true;
  }
  bool take_vec(std::vector<uint8_t>& out, uint32_t max_len) {
    uint32_t len;
    if (!take_u32(len) || len > max_len) return false;
    out.resize(len);
    return take(out.data(), len);
  }
};

crypto::KeyPair keypair_for(const Cdi& cdi) {
  std::span<const uint8_t> label{
      reinterpret_cast<const uint8_t*>(kKeySeedLabel),
      std::char_traits<char>::length(kKeySeedLabel)};
  crypto::Seed seed = crypto::hmac_sha256(cdi, label);
  return crypto::keypair_from_seed(seed);
}

void sort_claims(std::vector<Claim>& claims) {
  std::sort(claims.begin(), claims.end(),
            [](const Claim& a, const Claim& b) { return a.key < b.key; });
}

std::vector<uint8_t> bool_claim(bool v) {
  return {static_cast<uint8_t>(v ? 1 : 0)};
}

std::vector<uint8_t> u64_claim(uint64_t v) {
  std::vector<uint8_t> out;
  put_u64(out, v);
  return out;
}

}  // namespace

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::RoT: return "rot";
    case LayerKind::TsmDriver: return "tsm_driver";
    case LayerKind::Tsm: return "tsm";
    case LayerKind::Tvm: return "tvm";
  }
  return "?";
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::BadSignature: return "bad_signature";
    case RejectReason::ChainBroken: return "chain_broken";
    case RejectReason::WrongRoot: return "wrong_root";
    case RejectReason::TcbMismatch: return "tcb_mismatch";
    case RejectReason::DebugForbidden: return "debug_forbidden";
    case RejectReason::MeasurementMismatch: return "measurement_mismatch";
  }
  return "?";
}

const Claim* LayerCert::find_claim(const std::string& key) const {
  for (const Claim& c : claims) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

std::vector<uint8_t> cert_signed_payload(const LayerCert& cert) {
  std::vector<uint8_t> buf;
  buf.push_back(static_cast<uint8_t>(cert.subject.kind));
  put_u64(buf, cert.subject.id);
  put_bytes(buf, cert.subject_public_key);
  put_u32(buf, static_cast<uint32_t>(cert.claims.size()));
  for (const Claim& c : cert.claims) {
    put_bytes(buf, {reinterpret_cast<const uint8_t*>(c.key.data()),
                    c.key.size()});
    put_bytes(buf, c.value);
  }
  return buf;
}

DerivedLayer derive_layer(const Cdi& parent_cdi, LayerSubject parent_subject,
                          LayerSubject subject,
                          const crypto::Digest& layer_digest,
                          std::vector<Claim> claims) {
  DerivedLayer out;
  out.cdi = crypto::hmac_sha256(parent_cdi, layer_digest);

  sort_claims(claims);
  out.cert.subject = subject;
  out.cert.subject_public_key = keypair_for(out.cdi).pub;
  out.cert.claims = std::move(claims);
  out.cert.issuer = parent_subject;
  out.cert.signature =
      crypto::sign(keypair_for(parent_cdi).sec, cert_signed_payload(out.cert));
  return out;
}

LayerCert make_root_cert(const Cdi& root_cdi) {
  LayerCert cert;
  cert.subject = {LayerKind::RoT, 0};
  cert.subject_public_key = keypair_for(root_cdi).pub;
  cert.issuer = cert.subject;
  cert.signature =
      crypto::sign(keypair_for(root_cdi).sec, cert_signed_payload(cert));
  return cert;
}

crypto::PublicKey public_key_for(const Cdi& cdi) {
  return keypair_for(cdi).pub;
}

Verdict verify_evidence(const AttestationEvidence& evidence,
                        const crypto::PublicKey& trusted_root,
                        const VerifyPolicy& policy) {
  const auto& chain = evidence.chain;
  if (chain.size() != kChainLength) {
    return Verdict::reject(RejectReason::ChainBroken);
  }
  static constexpr LayerKind kExpectedOrder[kChainLength] = {
      LayerKind::RoT, LayerKind::TsmDriver, LayerKind::Tsm, LayerKind::Tvm};
  for (size_t i = 0; i < kChainLength; ++i) {
    if (chain[i].subject.kind != kExpectedOrder[i]) {
      return Verdict::reject(RejectReason::ChainBroken);
    }
    const LayerSubject expected_issuer =
        i == 0 ? chain[0].subject : chain[i - 1].subject;
    if (chain[i].issuer != expected_issuer) {
      return Verdict::reject(RejectReason::ChainBroken);
    }
  }
  if (chain[0].subject_public_key != trusted_root) {
    return Verdict::reject(RejectReason::WrongRoot);
  }
  for (size_t i = 0; i < kChainLength; ++i) {
    const crypto::PublicKey& signer =
        i == 0 ? chain[0].subject_public_key : chain[i - 1].subject_public_key;
    if (!crypto::verify(signer, cert_signed_payload(chain[i]),
                        chain[i].signature)) {
      return Verdict::reject(RejectReason::BadSignature);
    }
  }

  auto digest_claim = [](const LayerCert& cert,
                         const char* key) -> std::optional<crypto::Digest> {
    const Claim* c = cert.find_claim(key);
    if (c == nullptr || c->value.size() != 32) return std::nullopt;
    crypto::Digest d;
    std::copy(c->value.begin(), c->value.end(), d.begin());
    return d;
  };

  if (policy.expected_tsm_driver_digest.has_value()) {
    auto claimed = digest_claim(chain[1], kClaimDigest);
    if (!claimed.has_value() || *claimed != *policy.expected_tsm_driver_digest) {
      return Verdict::reject(RejectReason::TcbMismatch);
    }
  }
  if (policy.expected_tsm_digest.has_value()) {
    auto claimed = digest_claim(chain[2], kClaimDigest);
    if (!claimed.has_value() || *claimed != *policy.expected_tsm_digest) {
      return Verdict::reject(RejectReason::TcbMismatch);
    }
  }

  auto bool_of = [](const Claim* c) {
    return c != nullptr && !c->value.empty() && c->value[0] != 0;
  };
  const bool debug = bool_of(chain[3].find_claim(kClaimDebug)) ||
                     bool_of(chain[1].find_claim(kClaimDebugPlatform));
  if (debug && !policy.allow_debug) {
    return Verdict::reject(RejectReason::DebugForbidden);
  }

  if (policy.expected_tvm_measurement.has_value()) {
    auto claimed = digest_claim(chain[3], kClaimMeasurement);
    if (!claimed.has_value() || *claimed != *policy.expected_tvm_measurement) {
      return Verdict::reject(RejectReason::MeasurementMismatch);
    }
  }
  return Verdict::accept();
}

std::vector<uint8_t> serialize_evidence(const AttestationEvidence& evidence) {
  std::vector<uint8_t> buf;
  buf.insert(buf.end(), std::begin(kEvidenceMagic), std::end(kEvidenceMagic));
  buf.push_back(kEvidenceVersion);
  buf.push_back(static_cast<uint8_t>(evidence.chain.size()));
  for (const LayerCert& cert : evidence.chain) {
    std::vector<uint8_t> payload = cert_signed_payload(cert);
    buf.insert(buf.end(), payload.begin(), payload.end());
    buf.push_back(static_cast<uint8_t>(cert.issuer.kind));
    put_u64(buf, cert.issuer.id);
    put_bytes(buf, cert.signature);
  }
  return buf;
}

std::optional<AttestationEvidence> parse_evidence(
    std::span<const uint8_t> bytes) {
  Reader r{bytes};
  uint8_t magic[4];
  if (!r.take(magic, 4) || std::memcmp(magic, kEvidenceMagic, 4) != 0) {
    return std::nullopt;
  }
  uint8_t version, count;
  if (!r.take_u8(version) || version != kEvidenceVersion) return std::nullopt;
  if (!r.take_u8(count) || count > 8) return std::nullopt;

  AttestationEvidence out;
  for (uint8_t i = 0; i < count; ++i) {
    LayerCert cert;
    uint8_t kind;
    if (!r.take_u8(kind) || kind > 3) return std::nullopt;
    cert.subject.kind = static_cast<LayerKind>(kind);
    if (!r.take_u64(cert.subject.id)) return std::nullopt;

    std::vector<uint8_t> key_bytes;
    if (!r.take_vec(key_bytes, 64) ||
        key_bytes.size() != cert.subject_public_key.size()) {
      return std::nullopt;
    }
    std::copy(key_bytes.begin(), key_bytes.end(),
              cert.subject_public_key.begin());

    uint32_t claim_count;
    if (!r.take_u32(claim_count) || claim_count > 64) return std::nullopt;
    for (uint32_t c = 0; c < claim_count; ++c) {
      std::vector<uint8_t> key, value;
      if (!r.take_vec(key, 256) || !r.take_vec(value, 4096)) {
        return std::nullopt;
      }
      cert.claims.push_back({std::string(key.begin(), key.end()),
                             std::move(value)});
    }

    if (!r.take_u8(kind) || kind > 3) return std::nullopt;
    cert.issuer.kind = static_cast<LayerKind>(kind);
    if (!r.take_u64(cert.issuer.id)) return std::nullopt;

    std::vector<uint8_t> sig;
    if (!r.take_vec(sig, 128) || sig.size() != cert.signature.size()) {
      return std::nullopt;
    }
    std::copy(sig.begin(), sig.end(), cert.signature.begin());
    out.chain.push_back(std::move(cert));
  }
  if (r.pos != bytes.size()) return std::nullopt;
  return out;
}

std::string evidence_to_text(const AttestationEvidence& evidence) {
  std::ostringstream os;
  os << "attestation evidence (" << evidence.chain.size() << " certs)\n";
  for (size_t i = 0; i < evidence.chain.size(); ++i) {
    const LayerCert& cert = evidence.chain[i];
    os << "cert[" << i << "]\n";
    os << "  subject: " << to_string(cert.subject.kind);
    if (cert.subject.kind == LayerKind::Tvm) os << " id=" << cert.subject.id;
    os << "\n";
    os << "  issuer:  " << to_string(cert.issuer.kind);
    if (cert.issuer.kind == LayerKind::Tvm) os << " id=" << cert.issuer.id;
    os << "\n";
    os << "  public_key: " << crypto::to_hex(cert.subject_public_key) << "\n";
    for (const Claim& c : cert.claims) {
      os << "  claim " << c.key << ": " << crypto::to_hex(c.value) << "\n";
    }
    os << "  signature: " << crypto::to_hex(cert.signature) << "\n";
  }
  return os.str();
}

PlatformIdentity PlatformIdentity::derive(
    const std::array<uint8_t, 32>& root_secret,
    const crypto::Digest& tsm_driver_digest, const crypto::Digest& tsm_digest,
    uint64_t tsm_version, bool debug_platform) {
  PlatformIdentity out;
  Cdi root_cdi = root_secret;
  out.prefix_.push_back(make_root_cert(root_cdi));
  out.root_public_key_ = out.prefix_[0].subject_public_key;

  DerivedLayer driver = derive_layer(
      root_cdi, {LayerKind::RoT, 0}, {LayerKind::TsmDriver, 0},
      tsm_driver_digest,
      {{kClaimDigest, {tsm_driver_digest.begin(), tsm_driver_digest.end()}},
       {kClaimDebugPlatform, bool_claim(debug_platform)}});
  out.prefix_.push_back(driver.cert);

  DerivedLayer tsm = derive_layer(
      driver.cdi, {LayerKind::TsmDriver, 0}, {LayerKind::Tsm, 0}, tsm_digest,
      {{kClaimDigest, {tsm_digest.begin(), tsm_digest.end()}},
       {kClaimVersion, u64_claim(tsm_version)}});
  out.prefix_.push_back(tsm.cert);
  out.tsm_cdi_ = tsm.cdi;
  return out;
}

AttestationEvidence PlatformIdentity::issue_tvm_evidence(
    TvmId tvm, const crypto::Digest& tvm_measurement, bool debug_opt_in,
    const std::array<uint8_t, 64>& report_data) const {
  DerivedLayer leaf = derive_layer(
      tsm_cdi_, {LayerKind::Tsm, 0}, {LayerKind::Tvm, tvm}, tvm_measurement,
      {{kClaimMeasurement, {tvm_measurement.begin(), tvm_measurement.end()}},
       {kClaimDebug, bool_claim(debug_opt_in)},
       {kClaimReportData, {report_data.begin(), report_data.end()}}});
  AttestationEvidence evidence;
  evidence.chain = prefix_;
  evidence.chain.push_back(leaf.cert);
  return evidence;
}

}  // namespace cove::attest
