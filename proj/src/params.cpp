#include "slp/params.h"

#include <cmath>

#include "slp/error.h"

namespace slp {

Parameter* ParameterCollection::add(const std::string& name,
                                    const std::vector<size_t>& shape) {
  if (by_name_.count(name))
    throw ContractError("ParameterCollection: duplicate parameter name '" +
                        name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Tensor::zeros(shape);
  p->grad = Tensor::zeros(shape);
  Parameter* raw = p.get();
  owned_.push_back(std::move(p));
  order_.push_back(raw);
  by_name_[name] = raw;
  return raw;
}

Parameter* ParameterCollection::add_glorot(const std::string& name,
                                           const std::vector<size_t>& shape,
                                           Rng& rng) {
  Parameter* p = add(name, shape);
  double fan = static_cast<double>(p->value.rows() + p->value.cols());
  double bound = std::sqrt(6.0 / fan);
  for (double& x : p->value.v) x = rng.uniform(-bound, bound);
  return p;
}

Parameter* ParameterCollection::add_uniform(const std::string& name,
                                            const std::vector<size_t>& shape,
                                            double bound, Rng& rng) {
  Parameter* p = add(name, shape);
  for (double& x : p->value.v) x = rng.uniform(-bound, bound);
  return p;
}

Parameter* ParameterCollection::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

size_t ParameterCollection::value_count() const {
  size_t n = 0;
  for (const Parameter* p : order_) n += p->value.size();
  return n;
}

void ParameterCollection::zero_grads() {
  for (Parameter* p : order_) p->grad.fill(0.0);
}

std::vector<Tensor> ParameterCollection::snapshot_values() const {
  std::vector<Tensor> snap;
  snap.reserve(order_.size());
  for (const Parameter* p : order_) snap.push_back(p->value);
  return snap;
}

void ParameterCollection::restore_values(const std::vector<Tensor>& snap) {
  if (snap.size() != order_.size())
    throw ContractError("restore_values: snapshot has " +
                        std::to_string(snap.size()) + " tensors, model has " +
                        std::to_string(order_.size()));
  for (size_t i = 0; i < snap.size(); ++i) {
    if (!snap[i].same_shape(order_[i]->value))
      throw ShapeError("restore_values: shape mismatch for '" +
                       order_[i]->name + "'");
    order_[i]->value = snap[i];
  }
}

void sgd_step(ParameterCollection& params, const SgdState& state) {
  const double eta = state.rate();
  if (!(eta > 0.0)) throw ContractError("sgd_step: learning rate must be > 0");
  for (Parameter* p : params.all()) {
    const std::vector<double>& g = p->grad.v;
    std::vector<double>& v = p->value.v;
    for (size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i]))
        throw std::runtime_error("sgd_step: non-finite gradient in parameter '" +
                                 p->name + "'");
      v[i] -= eta * g[i];
    }
    p->grad.fill(0.0);
  }
}

}  // namespace slp
