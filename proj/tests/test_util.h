#pragma once

#include <cmath>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "slp/graph.h"
#include "slp/params.h"
#include "slp/rng.h"

namespace slp::test {

inline double rel_err(double a, double b) {
  double m = std::max(std::abs(a), std::abs(b));
  if (m < 1e-8) return 0.0;  // both effectively zero
  return std::abs(a - b) / m;
}

struct GradCheck {
  double max_rel_err = 0.0;
  size_t checked = 0;
  std::string worst;
};

// Central-difference gradient oracle: rebuilds the loss as a pure function
// of the parameters and compares d(loss)/d(entry) against the analytic
// gradient produced by backward(). Independent of the backward rules.
inline GradCheck check_gradients(ParameterCollection& pc,
                                 const std::function<Expr(ComputationGraph&)>& build,
                                 size_t max_per_param = SIZE_MAX,
                                 double step = 1e-4,
                                 uint64_t sample_seed = 7) {
  pc.zero_grads();
  std::vector<Tensor> analytic;
  {
    ComputationGraph g;
    Expr loss = build(g);
    g.backward(loss);
    for (Parameter* p : pc.all()) analytic.push_back(p->grad);
    pc.zero_grads();
  }
  auto eval = [&]() {
    ComputationGraph g;
    Expr loss = build(g);
    return g.value(loss).v[0];
  };
  GradCheck r;
  Rng rng(sample_seed);
  const auto& params = pc.all();
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    const size_t n = p->value.size();
    std::vector<size_t> entries;
    if (n <= max_per_param) {
      for (size_t i = 0; i < n; ++i) entries.push_back(i);
    } else {
      for (size_t k = 0; k < max_per_param; ++k)
        entries.push_back(static_cast<size_t>(rng.below(n)));
    }
    for (size_t idx : entries) {
      const double saved = p->value.v[idx];
      p->value.v[idx] = saved + step;
      const double fp = eval();
      p->value.v[idx] = saved - step;
      const double fm = eval();
      p->value.v[idx] = saved;
      const double fd = (fp - fm) / (2.0 * step);
      const double err = rel_err(analytic[pi].v[idx], fd);
      ++r.checked;
      if (err > r.max_rel_err) {
        r.max_rel_err = err;
        r.worst = p->name + "[" + std::to_string(idx) + "]";
      }
    }
  }
  return r;
}

inline bool bitwise_equal(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) return false;
  return std::memcmp(a.v.data(), b.v.data(), a.v.size() * sizeof(double)) == 0;
}

inline Tensor random_tensor(const std::vector<size_t>& shape, Rng& rng,
                            double bound = 1.0) {
  Tensor t = Tensor::zeros(shape);
  for (double& x : t.v) x = rng.uniform(-bound, bound);
  return t;
}

}  // namespace slp::test
