#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "slp/rng.h"
#include "slp/tensor.h"

namespace slp {

// Named trainable tensor with a gradient buffer of the same shape.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Owns every Parameter of a model. Registration order is stable, names are
// unique, and pointers stay valid for the collection's lifetime.
class ParameterCollection {
 public:
  Parameter* add(const std::string& name, const std::vector<size_t>& shape);

  // Glorot-style uniform init: bound = sqrt(6 / (rows + cols)).
  Parameter* add_glorot(const std::string& name,
                        const std::vector<size_t>& shape, Rng& rng);

  // Uniform init in [-bound, bound].
  Parameter* add_uniform(const std::string& name,
                         const std::vector<size_t>& shape, double bound,
                         Rng& rng);

  Parameter* find(const std::string& name) const;

  const std::vector<Parameter*>& all() const { return order_; }
  size_t value_count() const;

  void zero_grads();

  // Deep copies of every value tensor, in registration order.
  std::vector<Tensor> snapshot_values() const;
  void restore_values(const std::vector<Tensor>& snap);

 private:
  std::vector<std::unique_ptr<Parameter>> owned_;
  std::vector<Parameter*> order_;
  std::unordered_map<std::string, Parameter*> by_name_;
};

// Plain per-sentence SGD with a harmonically decaying rate.
struct SgdState {
  double eta0 = 0.1;   // base learning rate
  double decay = 0.1;  // per-epoch decay rho
  unsigned epoch = 0;

  double rate() const { return eta0 / (1.0 + decay * epoch); }
};

// p <- p - eta * grad for every parameter; gradients cleared afterwards.
// Throws on a non-finite gradient, naming the parameter.
void sgd_step(ParameterCollection& params, const SgdState& state);

}  // namespace slp
