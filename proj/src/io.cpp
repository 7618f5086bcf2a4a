#include "wgnls/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wgnls/error.hpp"

namespace wgnls {

namespace {

constexpr char kMagic[6] = {'W', 'G', 'N', 'L', 'S', '1'};

template <class T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(p[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

constexpr std::size_t kHeaderSize = 6 + 2 + 4 + 4 + 8 + 8;

}  // namespace

void write_snapshot(const std::string& path, const Field3& field, double t) {
  field.check_shape();
  std::string buf;
  buf.reserve(kHeaderSize + field.values.size() * 16);
  buf.append(kMagic, sizeof(kMagic));
  put_le<std::uint16_t>(buf, kSnapshotVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(field.grid.n_x));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(field.grid.n_y));
  put_le<double>(buf, field.grid.box_length);
  put_le<double>(buf, t);
  for (const auto& v : field.values) {
    put_le<double>(buf, v.real());
    put_le<double>(buf, v.imag());
  }
  write_file_atomic(path, buf);
}

Snapshot read_snapshot(const std::string& path) {
  const std::string raw = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < kHeaderSize || std::memcmp(raw.data(), kMagic, sizeof(kMagic)) != 0 ||
      get_le<std::uint16_t>(p + 6) != kSnapshotVersion) {
    throw Error(ErrorKind::Io, "bad snapshot header");
  }
  Grid3 g;
  g.n_x = static_cast<int>(get_le<std::uint32_t>(p + 8));
  g.n_y = static_cast<int>(get_le<std::uint32_t>(p + 12));
  g.box_length = get_le<double>(p + 16);
  try {
    g.validate();
  } catch (const Error&) {
    throw Error(ErrorKind::Io, "bad snapshot header");
  }
  Snapshot s;
  s.t = get_le<double>(p + 24);
  s.field = Field3(g);
  if (raw.size() != kHeaderSize + g.size() * 16) throw Error(ErrorKind::Io, "bad snapshot header");
  const unsigned char* q = p + kHeaderSize;
  for (auto& v : s.field.values) {
    v = cplx(get_le<double>(q), get_le<double>(q + 8));
    q += 16;
  }
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::Io, "short write to " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorKind::Io, "cannot rename into " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wgnls
