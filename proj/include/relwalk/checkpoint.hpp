#pragma once

#include <string>

#include "relwalk/model.hpp"

namespace relwalk {

/// Versioned binary container: config echo, vocabulary, then every named
/// tensor with raw little-endian doubles. Round trips are bit-exact.
void save_checkpoint(const std::string& path, ModelParams& params);
ModelParams load_checkpoint(const std::string& path);

}  // namespace relwalk
