#include "pfc3d/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "pfc3d/error.hpp"

namespace pfc3d {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::string& buf, std::size_t offset, T value) {
  std::memcpy(buf.data() + offset, &value, sizeof(T));
}

template <class T>
T get(const std::string& buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::string encode_snapshot_header(const SnapshotHeader& h) {
  std::string buf(kSnapshotHeaderBytes, '\0');
  std::memcpy(buf.data(), kSnapshotMagic, sizeof(kSnapshotMagic));
  put<std::uint32_t>(buf, 8, h.version);
  put<std::uint32_t>(buf, 12, h.m);
  put<double>(buf, 16, h.L);
  put<double>(buf, 24, h.time);
  put<std::uint64_t>(buf, 32, h.step);
  put<std::uint32_t>(buf, 40, h.encoding);
  return buf;
}

SnapshotHeader decode_snapshot_header(const std::string& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) throw IoError("snapshot: truncated header");
  if (std::memcmp(bytes.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0) {
    throw IoError("snapshot: bad magic");
  }
  SnapshotHeader h;
  h.version = get<std::uint32_t>(bytes, 8);
  h.m = get<std::uint32_t>(bytes, 12);
  h.L = get<double>(bytes, 16);
  h.time = get<double>(bytes, 24);
  h.step = get<std::uint64_t>(bytes, 32);
  h.encoding = get<std::uint32_t>(bytes, 40);
  if (h.version != kSnapshotVersion) {
    throw IoError("snapshot: unsupported format version " + std::to_string(h.version));
  }
  if (h.encoding != kEncodingF64LE) {
    throw IoError("snapshot: unsupported value encoding " + std::to_string(h.encoding));
  }
  return h;
}

void write_snapshot(const std::filesystem::path& path, const CellField& f, const SnapshotMeta& meta) {
  SnapshotHeader h;
  h.m = static_cast<std::uint32_t>(f.spec().m());
  h.L = f.spec().L();
  h.time = meta.time;
  h.step = meta.step;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("snapshot: cannot open " + path.string() + " for writing");
  const std::string header = encode_snapshot_header(h);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!out) throw IoError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open " + path.string());
  std::string header(kSnapshotHeaderBytes, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header.size()));
  if (in.gcount() != static_cast<std::streamsize>(kSnapshotHeaderBytes)) {
    throw IoError("snapshot: truncated header in " + path.string());
  }
  const SnapshotHeader h = decode_snapshot_header(header);
  const GridSpec spec(static_cast<int>(h.m), h.L);
  std::vector<double> values(spec.cells());
  const auto want = static_cast<std::streamsize>(values.size() * sizeof(double));
  in.read(reinterpret_cast<char*>(values.data()), want);
  if (in.gcount() != want) throw IoError("snapshot: truncated payload in " + path.string());
  return {CellField(spec, std::move(values)), {h.time, h.step}};
}

void export_structured_points(const std::filesystem::path& path, const CellField& f,
                              const std::string& scalar_name) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw IoError("structured points: cannot open " + path.string());
  const GridSpec& g = f.spec();
  const int m = g.m();
  std::fprintf(fp, "# vtk DataFile Version 3.0\n");
  std::fprintf(fp, "pfc3d density field\n");
  std::fprintf(fp, "ASCII\n");
  std::fprintf(fp, "DATASET STRUCTURED_POINTS\n");
  std::fprintf(fp, "DIMENSIONS %d %d %d\n", m, m, m);
  std::fprintf(fp, "ORIGIN %.17g %.17g %.17g\n", g.center(1), g.center(1), g.center(1));
  std::fprintf(fp, "SPACING %.17g %.17g %.17g\n", g.h(), g.h(), g.h());
  std::fprintf(fp, "POINT_DATA %zu\n", g.cells());
  std::fprintf(fp, "SCALARS %s double 1\n", scalar_name.c_str());
  std::fprintf(fp, "LOOKUP_TABLE default\n");
  // Structured points run x fastest.
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) std::fprintf(fp, "%.17g\n", f.at0(i, j, k));
  const bool ok = std::ferror(fp) == 0;
  std::fclose(fp);
  if (!ok) throw IoError("structured points: write failed for " + path.string());
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : lock_(dir / ".pfc3d.lock") {
  std::filesystem::create_directories(dir);
  const int fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw IoError("output directory " + dir.string() + " is locked by another run (" +
                  lock_.string() + ")");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(lock_, ec);
}

}  // namespace pfc3d
