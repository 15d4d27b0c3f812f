// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace wdmtwin {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "wdmtwin";

}  // namespace wdmtwin
