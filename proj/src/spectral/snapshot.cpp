#include "bsq/spectral/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "bsq/spectral/operators.hpp"

namespace bsq::spectral {
namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& f,
                    double time, const std::string& name) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  nlohmann::json header{{"n", f.grid().n()}, {"time", time}, {"name", name}};
  os << header.dump() << '\n';
  for (double v : to_physical(f)) put_le(os, v);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing snapshot header");
  const auto header = nlohmann::json::parse(line);
  Snapshot s;
  s.n = header.at("n").get<int>();
  s.time = header.at("time").get<double>();
  s.name = header.at("name").get<std::string>();
  const std::size_t count = static_cast<std::size_t>(s.n) * s.n;
  std::vector<unsigned char> raw(count * 8);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(is.gcount()) != raw.size())
    throw std::runtime_error("truncated snapshot: " + path.string());
  if (is.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("trailing bytes after snapshot payload: " + path.string());
  s.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.samples[i] = get_le(raw.data() + 8 * i);
  return s;
}

}  // namespace bsq::spectral
