#include "sagin/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace sagin {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw CheckpointError("checkpoint is truncated");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  read_exact(in, b, 4);
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  read_exact(in, b, 8);
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_checkpoint(const Mlp& net, std::ostream& out) {
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(net.sizes().size()));
  for (int s : net.sizes()) put_u32(out, static_cast<std::uint32_t>(s));
  for (double p : net.params()) put_f64(out, p);
}

void save_checkpoint(const Mlp& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  save_checkpoint(net, out);
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Mlp load_checkpoint(std::istream& in) {
  unsigned char magic[8];
  read_exact(in, magic, 8);
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) throw CheckpointError("bad checkpoint magic");
  if (get_u32(in) != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
  const std::uint32_t layers = get_u32(in);
  if (layers < 2 || layers > 64) throw CheckpointError("implausible checkpoint layer count");
  std::vector<int> sizes;
  for (std::uint32_t k = 0; k < layers; ++k) {
    const std::uint32_t s = get_u32(in);
    if (s == 0 || s > (1u << 20)) throw CheckpointError("implausible checkpoint layer size");
    sizes.push_back(static_cast<int>(s));
  }
  Mlp net(sizes);
  for (auto& p : net.params()) p = get_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) throw CheckpointError("trailing bytes after checkpoint");
  return net;
}

Mlp load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace sagin
