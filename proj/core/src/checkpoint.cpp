#include "charflow/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace charflow {

static_assert(std::endian::native == std::endian::little,
              "CHFL serialization assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'C', 'H', 'F', 'L'};

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64s(std::ostream& os, const double* data, std::size_t n) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw IoError("CHFL: truncated file");
  return v;
}

void read_f64s(std::istream& is, double* data, std::size_t n) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw IoError("CHFL: truncated parameter block");
}

using RowMajorMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

const LoadedNet* Checkpoint::find(const std::string& name) const {
  for (const auto& n : nets) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

void save_checkpoint(const std::string& path, const std::vector<NamedNet>& nets,
                     const std::string& config_text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("CHFL: cannot open for writing: " + path);
  os.write(kMagic, 4);
  write_u32(os, kCheckpointVersion);
  write_u32(os, static_cast<std::uint32_t>(nets.size()));
  for (const auto& [name, net] : nets) {
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    const auto& dims = net->layer_dims();
    write_u32(os, static_cast<std::uint32_t>(dims.size()));
    for (int d : dims) write_u32(os, static_cast<std::uint32_t>(d));
    for (int l = 0; l < net->layer_count(); ++l) {
      const RowMajorMat w = net->weight(l);
      write_f64s(os, w.data(), static_cast<std::size_t>(w.size()));
    }
    for (int l = 0; l < net->layer_count(); ++l) {
      write_f64s(os, net->bias(l).data(), static_cast<std::size_t>(net->bias(l).size()));
    }
  }
  write_u32(os, static_cast<std::uint32_t>(config_text.size()));
  os.write(config_text.data(), static_cast<std::streamsize>(config_text.size()));
  if (!os) throw IoError("CHFL: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("CHFL: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("CHFL: bad magic in " + path);
  }
  const std::uint32_t version = read_u32(is);
  if (version != kCheckpointVersion) {
    throw IoError("CHFL: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = read_u32(is);
  Checkpoint ckpt;
  ckpt.nets.resize(count);
  for (auto& net : ckpt.nets) {
    const std::uint32_t name_len = read_u32(is);
    net.name.resize(name_len);
    is.read(net.name.data(), name_len);
    const std::uint32_t dim_count = read_u32(is);
    if (dim_count < 2) throw IoError("CHFL: net has fewer than two layer dims");
    net.layer_dims.resize(dim_count);
    for (auto& d : net.layer_dims) d = static_cast<int>(read_u32(is));
    const std::size_t layers = dim_count - 1;
    net.weights.resize(layers);
    net.biases.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      RowMajorMat w(net.layer_dims[l + 1], net.layer_dims[l]);
      read_f64s(is, w.data(), static_cast<std::size_t>(w.size()));
      net.weights[l] = w;
    }
    for (std::size_t l = 0; l < layers; ++l) {
      net.biases[l].resize(net.layer_dims[l + 1]);
      read_f64s(is, net.biases[l].data(), static_cast<std::size_t>(net.biases[l].size()));
    }
  }
  const std::uint32_t config_len = read_u32(is);
  ckpt.config_text.resize(config_len);
  is.read(ckpt.config_text.data(), config_len);
  if (!is && config_len > 0) throw IoError("CHFL: truncated config block");
  return ckpt;
}

void copy_params(const LoadedNet& src, SineMlp& dst) {
  if (src.layer_dims != dst.layer_dims()) {
    throw ShapeError("CHFL: checkpoint net '" + src.name + "' does not match target layer dims");
  }
  for (int l = 0; l < dst.layer_count(); ++l) {
    dst.weight(l) = src.weights[static_cast<std::size_t>(l)];
    dst.bias(l) = src.biases[static_cast<std::size_t>(l)];
  }
}

}  // namespace charflow
