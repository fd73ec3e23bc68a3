#pragma once

namespace logsp {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "logsp/1";
}  // namespace logsp
