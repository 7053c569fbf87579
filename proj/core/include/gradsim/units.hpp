// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace gradsim::units {

// Canonical internal units are bytes and seconds. Boundary conversions use
// decimal prefixes: model sizes (97 MB, 170 MB, ...) and NIC line rates are
// vendor-reported decimal figures.
inline constexpr double kBytesPerMb = 1e6;
inline constexpr double kBytesPerSecPerGbps = 1.25e8;  // 1 Gbit/s = 1e9/8 bytes/s
inline constexpr double kSecPerMs = 1e-3;

constexpr double mb_to_bytes(double mb) { return mb * kBytesPerMb; }
constexpr double bytes_to_mb(double bytes) { return bytes / kBytesPerMb; }
constexpr double gbps_to_bytes_per_s(double gbps) { return gbps * kBytesPerSecPerGbps; }
constexpr double bytes_per_s_to_gbps(double bps) { return bps / kBytesPerSecPerGbps; }
constexpr double ms_to_s(double ms) { return ms * kSecPerMs; }
constexpr double s_to_ms(double s) { return s / kSecPerMs; }

}  // namespace gradsim::units
