#include "logsp/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace logsp {

namespace {

static_assert(sizeof(double) == 8);

template <class T>
void put_le(std::string& buf, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&value);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(p[i], p[sizeof(T) - 1 - i]);
  }
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <class T>
T get_le(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&value);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  return value;
}

}  // namespace

void write_field(const std::string& path, const Field2D& u) {
  std::string buf;
  buf.reserve(16 + u.v.size() * 8);
  buf.append("LSPF", 4);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(u.grid.n));
  put_le<double>(buf, u.grid.half_width);
  for (double x : u.v) put_le<double>(buf, x);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_field: cannot open " + path);
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw std::runtime_error("write_field: write failed for " + path);
}

Field2D read_field(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || buf.compare(0, 4, "LSPF") != 0)
    throw std::runtime_error("read_field: not an LSPF file: " + path);
  const auto n = get_le<std::uint32_t>(buf.data() + 4);
  const double L = get_le<double>(buf.data() + 8);
  if (n < 8 || !(L > 0.0)) throw std::runtime_error("read_field: bad header in " + path);
  const std::size_t expect = 16 + static_cast<std::size_t>(n) * n * 8;
  if (buf.size() != expect)
    throw std::runtime_error("read_field: truncated file: " + path);
  Field2D u(Grid2D::make(L, static_cast<int>(n)));
  for (std::size_t k = 0; k < u.v.size(); ++k)
    u.v[k] = get_le<double>(buf.data() + 16 + 8 * k);
  if (!u.all_finite()) throw std::runtime_error("read_field: non-finite values in " + path);
  return u;
}

void write_field_csv(const std::string& path, const Field2D& u) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
  f << "x,y,value\n";
  f.precision(17);
  const Grid2D& g = u.grid;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      f << g.x(i) << ',' << g.y(j) << ',' << u.at(i, j) << '\n';
}

}  // namespace logsp
