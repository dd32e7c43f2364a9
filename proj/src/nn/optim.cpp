#include "graphaug/nn/optim.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace graphaug::nn {

Readout parse_readout(const std::string& s) {
  if (s == "sum") return Readout::Sum;
  if (s == "mean") return Readout::Mean;
  if (s == "max") return Readout::Max;
  fail(ErrorKind::InvalidArgument, "bad readout mode '" + s + "' (want sum|mean|max)");
}

std::string readout_name(Readout r) {
  switch (r) {
    case Readout::Sum: return "sum";
    case Readout::Mean: return "mean";
    case Readout::Max: return "max";
  }
  return "?";
}

namespace {

constexpr char kMagic[9] = "GAUGCKPT";
constexpr std::uint32_t kVersion = 1;

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::ifstream& in, const std::string& path) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  check(in.good(), ErrorKind::Parse, "checkpoint: truncated file " + path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f32_le(std::ofstream& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32_le(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  check(in.good(), ErrorKind::Parse, "checkpoint: truncated file " + path);
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

}  // namespace

void save_checkpoint_raw(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.good(), ErrorKind::Io, "checkpoint: cannot open " + path + " for writing");
  out.write(kMagic, 8);
  write_u64(out, kVersion);
  write_u64(out, ckpt.metadata_json.size());
  out.write(ckpt.metadata_json.data(), static_cast<std::streamsize>(ckpt.metadata_json.size()));
  write_u64(out, ckpt.params.size());
  for (const auto& [name, value] : ckpt.params) {
    write_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(out, static_cast<std::uint64_t>(value.rows()));
    write_u64(out, static_cast<std::uint64_t>(value.cols()));
    for (Eigen::Index r = 0; r < value.rows(); ++r)
      for (Eigen::Index c = 0; c < value.cols(); ++c) write_f32_le(out, value(r, c));
  }
  check(out.good(), ErrorKind::Io, "checkpoint: write failure on " + path);
}

Checkpoint load_checkpoint_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorKind::Io, "checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  check(in.good() && std::memcmp(magic, kMagic, 8) == 0, ErrorKind::Parse,
        "checkpoint: bad magic in " + path);
  const std::uint64_t version = read_u64(in, path);
  check(version == kVersion, ErrorKind::Parse,
        "checkpoint: unsupported version " + std::to_string(version) + " in " + path);
  Checkpoint ckpt;
  const std::uint64_t meta_len = read_u64(in, path);
  ckpt.metadata_json.resize(meta_len);
  in.read(ckpt.metadata_json.data(), static_cast<std::streamsize>(meta_len));
  check(in.good(), ErrorKind::Parse, "checkpoint: truncated metadata in " + path);
  const std::uint64_t n_params = read_u64(in, path);
  for (std::uint64_t p = 0; p < n_params; ++p) {
    const std::uint64_t name_len = read_u64(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    check(in.good(), ErrorKind::Parse, "checkpoint: truncated name in " + path);
    const auto rows = static_cast<Eigen::Index>(read_u64(in, path));
    const auto cols = static_cast<Eigen::Index>(read_u64(in, path));
    Eigen::MatrixXf value(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) value(r, c) = read_f32_le(in, path);
    ckpt.params.emplace_back(std::move(name), std::move(value));
  }
  return ckpt;
}

}  // namespace graphaug::nn
