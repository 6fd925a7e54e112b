#pragma once

#include <filesystem>
#include <optional>

#include "hagmn/adam.hpp"
#include "hagmn/model.hpp"

namespace hagmn {

/// Versioned weight container ("hagmn-ckpt/1"): model configuration, RNG
/// seed, every named weight matrix with shape metadata, and optionally the
/// optimizer moments. Matrix payloads are hex-encoded IEEE-754 bits, so
/// writes are lossless and byte-for-byte reproducible for identical state.
struct Checkpoint {
  ModelParams params;
  std::optional<AdamConfig> adam_config;
  std::map<std::string, std::pair<DenseMatrix, DenseMatrix>> adam_moments;
  std::size_t adam_step_count = 0;
  int epoch = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hagmn
