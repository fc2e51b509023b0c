#include "slp/tensor.h"

#include <cmath>
#include <sstream>

#include "slp/error.h"

namespace slp {

namespace {
size_t product(const std::vector<size_t>& shape) {
  size_t n = 1;
  for (size_t e : shape) n *= e;
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<size_t> s, std::vector<double> data)
    : shape(std::move(s)), v(std::move(data)) {
  if (product(shape) != v.size())
    throw ShapeError("Tensor: " + shape_str() + " does not hold " +
                     std::to_string(v.size()) + " values");
}

Tensor Tensor::zeros(const std::vector<size_t>& shape) {
  Tensor t;
  t.shape = shape;
  t.v.assign(product(shape), 0.0);
  return t;
}

Tensor Tensor::vec(std::initializer_list<double> data) {
  return Tensor({data.size()}, std::vector<double>(data));
}

Tensor Tensor::vec(std::vector<double> data) {
  std::vector<size_t> shape{data.size()};
  return Tensor(std::move(shape), std::move(data));
}

bool Tensor::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void Tensor::fill(double x) {
  for (double& e : v) e = x;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ')';
  return os.str();
}

}  // namespace slp
