#pragma once

namespace bineg {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchemaVersion = "bineg-report-1";

} // namespace bineg
