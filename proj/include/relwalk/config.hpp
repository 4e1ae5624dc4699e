#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relwalk {

// Model and optimization settings. Defaults mirror the shipped l4 preset.
struct TrainConfig {
  std::size_t word_dim = 200;
  std::size_t type_dim = 20;
  std::size_t position_dim = 25;
  std::size_t lstm_dim = 100;  // concatenated size; each direction gets half
  std::size_t pair_dim = 100;
  std::size_t walk_length = 4;
  double beta = 0.77;
  bool attention = true;
  std::size_t position_clip = 60;

  double learning_rate = 0.002;
  std::size_t batch_size = 10;
  double input_dropout = 0.11;
  double output_dropout = 0.32;
  double l2 = 5.7e-5;
  double gradient_clip = 24.4;
  std::size_t patience = 5;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 1;
  bool freeze_pretrained = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Flat `key = value` text, one line per field, stable order.
  std::string serialize() const;

  /// Inverse of serialize; also accepts `#` comments and blank lines.
  /// Unknown keys are rejected.
  static TrainConfig parse(const std::string& text);

  /// Every config key, in serialization order.
  static std::vector<std::string> keys();
};

}  // namespace relwalk
