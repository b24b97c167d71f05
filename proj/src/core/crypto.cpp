// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/crypto.hpp"

#include <sodium.h>

#include <cctype>
#include <mutex>
#include <stdexcept>

namespace cove::crypto {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

}  // namespace

Digest sha256(std::span<const uint8_t> data) {
  ensure_sodium();
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest hmac_sha256(std::span<const uint8_t> key,
                   std::span<const uint8_t> data) {
  ensure_sodium();
  Digest out;
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

KeyPair keypair_from_seed(const Seed& seed) {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pub.data(), kp.sec.data(), seed.data());
  return kp;
}

Signature sign(const SecretKey& key, std::span<const uint8_t> msg) {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), key.data());
  return sig;
}

bool verify(const PublicKey& key, std::span<const uint8_t> msg,
            const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(),
                                     key.data()) == 0;
}

std::string to_hex(std::span<const uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

std::optional<std::vector<uint8_t>> from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string compact;
  for (char c : hex) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  if (compact.size() % 2 != 0) return std::nullopt;
  std::vector<uint8_t> out;
  out.reserve(compact.size() / 2);
  for (size_t i = 0; i < compact.size(); i += 2) {
    int hi = nibble(compact[i]);
    int lo = nibble(compact[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace cove::crypto
