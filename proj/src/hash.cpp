// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/hash.hpp"

#include <cstdio>

namespace wdmtwin {

std::string hash_to_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::uint64_t hash_of_string(std::string_view s) {
  Fnv1a h;
  h.update(s);
  return h.digest();
}

}  // namespace wdmtwin
