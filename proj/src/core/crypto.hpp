// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cove::crypto {

using Digest = std::array<uint8_t, 32>;
using Seed = std::array<uint8_t, 32>;
using PublicKey = std::array<uint8_t, 32>;
using SecretKey = std::array<uint8_t, 64>;
using Signature = std::array<uint8_t, 64>;

Digest sha256(std::span<const uint8_t> data);

/// HMAC-SHA256(key, data); the layered-credential KDF.
Digest hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data);

/// Deterministic signing keypair expanded from a 32-byte seed (Ed25519).
struct KeyPair {
  PublicKey pub;
  SecretKey sec;
};

KeyPair keypair_from_seed(const Seed& seed);
Signature sign(const SecretKey& key, std::span<const uint8_t> msg);
bool verify(const PublicKey& key, std::span<const uint8_t> msg,
            const Signature& sig);

std::string to_hex(std::span<const uint8_t> bytes);
std::optional<std::vector<uint8_t>> from_hex(const std::string& hex);

}  // namespace cove::crypto
