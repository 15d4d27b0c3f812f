// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace wdmtwin {

/// Incremental FNV-1a (64 bit). Used for grid fingerprints and the
/// config/model hashes embedded in output file headers.
class Fnv1a {
 public:
  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001B3ull;
    }
  }

  void update(std::string_view s) { update(s.data(), s.size()); }

  void update(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    update(&bits, sizeof(bits));
  }

  void update(std::uint64_t v) { update(&v, sizeof(v)); }
  void update(std::int64_t v) { update(&v, sizeof(v)); }

  void update(std::span<const double> vs) {
    for (double v : vs) update(v);
  }

  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xCBF29CE484222325ull;
};

std::string hash_to_hex(std::uint64_t h);
std::uint64_t hash_of_string(std::string_view s);

}  // namespace wdmtwin
