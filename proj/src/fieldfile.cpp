#include "gl/fieldfile.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace gl {

namespace {

// Assumes a little-endian host (x86-64 / aarch64).
template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field file: truncated input");
  return v;
}

constexpr char kMagic[4] = {'G', 'L', 'F', '1'};

}  // namespace

void write_field_file(const std::string& path, const FieldFile& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("field file: cannot open for writing: " + path);
  os.write(kMagic, 4);
  write_pod(os, f.version);
  write_pod(os, f.mesh_level);
  write_pod(os, static_cast<std::uint64_t>(f.field.size()));
  const std::string meta = f.metadata.dump();
  write_pod(os, static_cast<std::uint32_t>(meta.size()));
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  os.write(reinterpret_cast<const char*>(f.field.re.data()),
           static_cast<std::streamsize>(sizeof(double) * f.field.size()));
  os.write(reinterpret_cast<const char*>(f.field.im.data()),
           static_cast<std::streamsize>(sizeof(double) * f.field.size()));
  if (!os) throw std::runtime_error("field file: write failed: " + path);
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field file: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("field file: bad magic: " + path);
  FieldFile f;
  f.version = read_pod<std::uint32_t>(is);
  if (f.version != 1) throw std::runtime_error("field file: unsupported version");
  f.mesh_level = read_pod<std::uint32_t>(is);
  const auto n = static_cast<Eigen::Index>(read_pod<std::uint64_t>(is));
  const auto meta_len = read_pod<std::uint32_t>(is);
  std::string meta(meta_len, '\0');
  is.read(meta.data(), meta_len);
  if (!is) throw std::runtime_error("field file: truncated metadata");
  f.metadata = nlohmann::json::parse(meta);
  f.field.re.resize(n);
  f.field.im.resize(n);
  is.read(reinterpret_cast<char*>(f.field.re.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  is.read(reinterpret_cast<char*>(f.field.im.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (!is) throw std::runtime_error("field file: truncated payload");
  if (f.metadata.contains("space") && f.metadata["space"].is_string())
    f.field.space_id = f.metadata["space"].get<std::string>();
  return f;
}

}  // namespace gl
