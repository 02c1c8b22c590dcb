// Copyright 2026 The jpegfp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JPEGFP_CIPHER_H_
#define JPEGFP_CIPHER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jpegfp/entropy_scanner.h"

namespace jpegfp {

// 128-bit key plus an optional 64-bit tweak that prefixes every counter
// block.
class SecretKey {
 public:
  static constexpr size_t kKeyBytes = 16;

  // Throws kBadKeyLength unless `key` is exactly 16 bytes.
  SecretKey(std::span<const uint8_t> key, uint64_t tweak = 0);

  // `key_hex` must be 32 hex digits; `tweak_hex` is empty or 16 hex digits.
  // Throws kBadKeyLength otherwise.
  static SecretKey FromHex(std::string_view key_hex,
                           std::string_view tweak_hex = {});

  const std::array<uint8_t, kKeyBytes>& key() const { return key_; }
  uint64_t tweak() const { return tweak_; }

 private:
  std::array<uint8_t, kKeyBytes> key_{};
  uint64_t tweak_ = 0;
};

// Packed bit sequence, MSB of byte 0 first.
class BitSequence {
 public:
  BitSequence() = default;
  BitSequence(std::vector<uint8_t> bytes, size_t size);

  static BitSequence FromString(std::string_view bits);

  size_t size() const { return size_; }
  bool operator[](size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
  }
  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<uint8_t> bytes_;
  size_t size_ = 0;
};

// AES-128 applied to the 16-byte counter block tweak(8, big endian) ||
// index(8, big endian). Keystream block `index` covers bits
// [128 * index, 128 * index + 128).
std::array<uint8_t, 16> KeystreamBlock(const SecretKey& key, uint64_t index);

// First `nbits` bits of the keystream, consumed MSB first from each byte.
BitSequence GenerateKeystream(const SecretKey& key, size_t nbits);

struct PlanEntry {
  size_t offset = 0;  // relative to the span start
  uint8_t mask = 0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct EncryptionPlan {
  Target target = Target::kBoth;
  std::vector<PlanEntry> entries;  // strictly increasing offsets
  size_t total_bits = 0;
};

EncryptionPlan BuildPlan(std::span<const ByteClass> classes, Target target);

// XORs the masked bits of each plan entry with the next keystream bits, the
// most significant masked bit first. Throws kKeystreamExhausted if the
// keystream is shorter than plan.total_bits; `span` is untouched then.
void ApplyPlan(std::span<uint8_t> span, const EncryptionPlan& plan,
               const BitSequence& keystream);

// Encrypts every eligible additional bit of the entropy-coded data. The
// output has the input's exact length and structure. Decryption is the same
// transform; both names exist for readability at call sites.
std::vector<uint8_t> EncryptFile(std::span<const uint8_t> jpeg,
                                 const SecretKey& key, Target target);
std::vector<uint8_t> DecryptFile(std::span<const uint8_t> jpeg,
                                 const SecretKey& key, Target target);

}  // namespace jpegfp

#endif  // JPEGFP_CIPHER_H_
