#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace slp {

// Dense 64-bit float array, row-major. Rank 1 (vectors) and rank 2
// (matrices) are the only shapes the parser uses.
struct Tensor {
  std::vector<size_t> shape;
  std::vector<double> v;

  Tensor() = default;
  Tensor(std::vector<size_t> s, std::vector<double> data);

  static Tensor zeros(const std::vector<size_t>& shape);
  static Tensor vec(std::initializer_list<double> data);
  static Tensor vec(std::vector<double> data);

  size_t size() const { return v.size(); }
  size_t rank() const { return shape.size(); }
  bool is_vector() const { return rank() == 1; }
  bool is_scalar() const { return v.size() == 1; }

  size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  size_t cols() const { return rank() < 2 ? 1 : shape[1]; }

  double& at(size_t i) { return v[i]; }
  double at(size_t i) const { return v[i]; }
  double& at(size_t i, size_t j) { return v[i * cols() + j]; }
  double at(size_t i, size_t j) const { return v[i * cols() + j]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  bool all_finite() const;
  void fill(double x);

  std::string shape_str() const;  // "(3,4)"
};

}  // namespace slp
