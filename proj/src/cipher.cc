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

#include "jpegfp/cipher.h"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <memory>
#include <stdexcept>

#include "jpegfp/document.h"
#include "jpegfp/error.h"

namespace jpegfp {

namespace {

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<uint8_t> DecodeHex(std::string_view hex, size_t bytes,
                               const char* what) {
  if (hex.size() != 2 * bytes) {
    throw Error(ErrorCode::kBadKeyLength,
                std::string(what) + " must be " + std::to_string(2 * bytes) +
                    " hex digits, got " + std::to_string(hex.size()));
  }
  std::vector<uint8_t> out(bytes);
  for (size_t i = 0; i < bytes; ++i) {
    const int hi = HexDigit(hex[2 * i]);
    const int lo = HexDigit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kBadKeyLength,
                  std::string(what) + " contains a non-hex character");
    }
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

void StoreBigEndian64(uint64_t v, uint8_t* out) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<uint8_t>(v & 0xff);
    v >>= 8;
  }
}

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};

// AES-128-ECB over `blocks` consecutive counter blocks starting at `first`.
std::vector<uint8_t> EncryptCounterBlocks(const SecretKey& key, uint64_t first,
                                          size_t blocks) {
  std::vector<uint8_t> counters(16 * blocks);
  for (size_t b = 0; b < blocks; ++b) {
    StoreBigEndian64(key.tweak(), &counters[16 * b]);
    StoreBigEndian64(first + b, &counters[16 * b + 8]);
  }
  std::vector<uint8_t> out(counters.size());
  if (blocks == 0) return out;

  std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
  int written = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr,
                         key.key().data(), nullptr) != 1 ||
      EVP_CIPHER_CTX_set_padding(ctx.get(), 0) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data(), &written, counters.data(),
                        static_cast<int>(counters.size())) != 1 ||
      static_cast<size_t>(written) != out.size()) {
    throw std::runtime_error("AES keystream generation failed");
  }
  return out;
}

void ApplyPlanFrom(std::span<uint8_t> span, const EncryptionPlan& plan,
                   const BitSequence& keystream, size_t start_bit) {
  if (keystream.size() < start_bit + plan.total_bits) {
    throw Error(ErrorCode::kKeystreamExhausted,
                "plan needs " + std::to_string(plan.total_bits) +
                    " keystream bits, " +
                    std::to_string(keystream.size() - std::min(start_bit, keystream.size())) +
                    " available");
  }
  size_t k = start_bit;
  for (const PlanEntry& e : plan.entries) {
    uint8_t flip = 0;
    for (int bit = 7; bit >= 0; --bit) {
      const auto m = static_cast<uint8_t>(1u << bit);
      if ((e.mask & m) && keystream[k++]) flip |= m;
    }
    span[e.offset] ^= flip;
  }
}

std::vector<uint8_t> TransformFile(std::span<const uint8_t> jpeg,
                                   const SecretKey& key, Target target) {
  const BitstreamDocument doc = ParseDocument(jpeg);
  const std::vector<LabeledSpan> spans = LabelDocument(doc);

  std::vector<EncryptionPlan> plans;
  size_t total_bits = 0;
  for (const LabeledSpan& s : spans) {
    plans.push_back(BuildPlan(ClassifyEntropyBytes(s.labels, target), target));
    total_bits += plans.back().total_bits;
  }
  const BitSequence keystream = GenerateKeystream(key, total_bits);

  std::vector<uint8_t> out(jpeg.begin(), jpeg.end());
  size_t consumed = 0;
  for (size_t i = 0; i < spans.size(); ++i) {
    const BitLabelMap& map = spans[i].labels;
    ApplyPlanFrom(std::span<uint8_t>(out).subspan(map.span_offset(), map.size()),
                  plans[i], keystream, consumed);
    consumed += plans[i].total_bits;
  }
  return out;
}

}  // namespace

SecretKey::SecretKey(std::span<const uint8_t> key, uint64_t tweak)
    : tweak_(tweak) {
  if (key.size() != kKeyBytes) {
    throw Error(ErrorCode::kBadKeyLength,
                "key must be 128 bits, got " + std::to_string(8 * key.size()));
  }
  std::copy(key.begin(), key.end(), key_.begin());
}

SecretKey SecretKey::FromHex(std::string_view key_hex,
                             std::string_view tweak_hex) {
  const auto key = DecodeHex(key_hex, kKeyBytes, "key");
  uint64_t tweak = 0;
  if (!tweak_hex.empty()) {
    for (uint8_t b : DecodeHex(tweak_hex, 8, "tweak")) tweak = (tweak << 8) | b;
  }
  return SecretKey(key, tweak);
}

BitSequence::BitSequence(std::vector<uint8_t> bytes, size_t size)
    : bytes_(std::move(bytes)), size_(size) {
  if (bytes_.size() * 8 < size_) {
    throw std::invalid_argument("BitSequence size exceeds its storage");
  }
}

BitSequence BitSequence::FromString(std::string_view bits) {
  std::vector<uint8_t> bytes((bits.size() + 7) / 8);
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      bytes[i >> 3] |= static_cast<uint8_t>(0x80 >> (i & 7));
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitSequence expects only '0' and '1'");
    }
  }
  return BitSequence(std::move(bytes), bits.size());
}

std::array<uint8_t, 16> KeystreamBlock(const SecretKey& key, uint64_t index) {
  const auto bytes = EncryptCounterBlocks(key, index, 1);
  std::array<uint8_t, 16> out;
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

BitSequence GenerateKeystream(const SecretKey& key, size_t nbits) {
  const size_t blocks = (nbits + 127) / 128;
  std::vector<uint8_t> bytes = EncryptCounterBlocks(key, 0, blocks);
  bytes.resize((nbits + 7) / 8);
  if (nbits % 8 != 0) {
    bytes.back() &= static_cast<uint8_t>(0xFF << (8 - nbits % 8));
  }
  return BitSequence(std::move(bytes), nbits);
}

EncryptionPlan BuildPlan(std::span<const ByteClass> classes, Target target) {
  EncryptionPlan plan;
  plan.target = target;
  for (const ByteClass& c : classes) {
    if (!c.encryptable()) continue;
    plan.entries.push_back({c.offset, c.mask});
    plan.total_bits += std::popcount(c.mask);
  }
  return plan;
}

void ApplyPlan(std::span<uint8_t> span, const EncryptionPlan& plan,
               const BitSequence& keystream) {
  ApplyPlanFrom(span, plan, keystream, 0);
}

std::vector<uint8_t> EncryptFile(std::span<const uint8_t> jpeg,
                                 const SecretKey& key, Target target) {
  return TransformFile(jpeg, key, target);
}

std::vector<uint8_t> DecryptFile(std::span<const uint8_t> jpeg,
                                 const SecretKey& key, Target target) {
  return TransformFile(jpeg, key, target);
}

}  // namespace jpegfp
