#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relwalk/rng.hpp"

namespace relwalk {

// Dense row-major array of doubles with an optional gradient slot of the
// same length. The single value type used by every layer of the model.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  std::optional<std::vector<double>> grad;

  Tensor() = default;
  Tensor(std::vector<std::size_t> shape_, std::vector<double> values_);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor scalar(double v);
  static Tensor row_vector(std::vector<double> v);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> v);
  static Tensor uniform(std::vector<std::size_t> shape, double lo, double hi, Rng& rng);

  std::size_t numel() const { return values.size(); }
  std::size_t ndim() const { return shape.size(); }
  bool is_scalar() const { return numel() == 1 && shape.size() <= 1; }

  std::size_t rows() const;
  std::size_t cols() const;

  double& at(std::size_t i) { return values[i]; }
  double at(std::size_t i) const { return values[i]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

  /// Allocate (zeroed) the gradient slot if absent.
  std::vector<double>& ensure_grad();
  void zero_grad();

  bool all_finite() const;
};

/// "[7x5]" style shape rendering for error messages.
std::string shape_string(const Tensor& t);
std::string shape_string(const std::vector<std::size_t>& shape);

}  // namespace relwalk
