#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "wgnls/field.hpp"

namespace wgnls {

/// Binary field snapshot: magic "WGNLS1", u16 version, u32 n_x, u32 n_y,
/// f64 box_length, f64 t, then interleaved re/im f64 in storage order.
/// Everything little-endian.
inline constexpr std::uint16_t kSnapshotVersion = 1;

struct Snapshot {
  Field3 field;
  double t = 0.0;
};

void write_snapshot(const std::string& path, const Field3& field, double t);
/// Throws Error(Io, "bad snapshot header") on wrong magic/version or a
/// truncated file.
Snapshot read_snapshot(const std::string& path);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Writes to path.tmp and renames over path.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace wgnls
