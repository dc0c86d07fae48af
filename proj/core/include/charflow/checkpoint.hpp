#pragma once

#include "charflow/sine_mlp.hpp"

#include <string>
#include <vector>

namespace charflow {

/// CHFL parameter checkpoint.
///
/// Layout (all integers u32, all reals f64, little-endian):
///   magic "CHFL" | version | net_count
///   per net: name_len | name bytes | dim_count | dims...
///            | per-layer weights, row-major | per-layer biases
///   config_len | config text (TrainConfig / RunConfig snapshot, may be empty)
///
/// Round-trips are bit-exact.
struct NamedNet {
  std::string name;
  const SineMlp* net;
};

struct LoadedNet {
  std::string name;
  std::vector<int> layer_dims;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
};

struct Checkpoint {
  std::vector<LoadedNet> nets;
  std::string config_text;

  const LoadedNet* find(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const std::vector<NamedNet>& nets,
                     const std::string& config_text);

Checkpoint load_checkpoint(const std::string& path);

/// Copies loaded parameters into a net constructed elsewhere (omega0 and
/// activation come from configuration, not from the file).
void copy_params(const LoadedNet& src, SineMlp& dst);

}  // namespace charflow
