#pragma once

// On-disk formats.
//
// Binary snapshot: a 64-byte little-endian header followed by m^3 IEEE-754
// doubles in storage order (k fastest).
//
//   offset  size  field
//        0     6  magic "PFC3D\0"
//        6     2  zero
//        8     4  u32 format version (1)
//       12     4  u32 m
//       16     8  f64 L
//       24     8  f64 time
//       32     8  u64 step
//       40     4  u32 value encoding (1 = f64 little-endian)
//       44    20  zero

#include <cstdint>
#include <filesystem>
#include <string>

#include "pfc3d/grid.hpp"

namespace pfc3d {

inline constexpr char kSnapshotMagic[6] = {'P', 'F', 'C', '3', 'D', '\0'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::uint32_t kEncodingF64LE = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 64;

struct SnapshotMeta {
  double time = 0.0;
  std::uint64_t step = 0;
};

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::uint32_t m = 0;
  double L = 0.0;
  double time = 0.0;
  std::uint64_t step = 0;
  std::uint32_t encoding = kEncodingF64LE;
};

/// Encodes a header into exactly 64 bytes.
std::string encode_snapshot_header(const SnapshotHeader& h);
/// Throws IoError on bad magic, version or encoding.
SnapshotHeader decode_snapshot_header(const std::string& bytes);

void write_snapshot(const std::filesystem::path& path, const CellField& f, const SnapshotMeta& meta);

struct Snapshot {
  CellField field;
  SnapshotMeta meta;
};

/// Throws IoError on magic/version mismatch or a truncated payload.
Snapshot read_snapshot(const std::filesystem::path& path);

/// Legacy ASCII structured-points export (cell centers as points, %.17g).
void export_structured_points(const std::filesystem::path& path, const CellField& f,
                              const std::string& scalar_name = "phi");

/// Exclusive lock on an output directory; the lock file is removed on
/// destruction. Throws IoError if the directory is already locked.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

  const std::filesystem::path& path() const { return lock_; }

 private:
  std::filesystem::path lock_;
};

}  // namespace pfc3d
