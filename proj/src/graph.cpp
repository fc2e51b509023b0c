#include "slp/graph.h"

#include <algorithm>
#include <cmath>

#include "slp/error.h"

namespace slp {

namespace {

void require_same_graph(Expr a, Expr b, const char* op) {
  if (a.g != b.g)
    throw ContractError(std::string(op) + ": operands from different graphs");
}

bool any_nonzero(const Tensor& t) {
  for (double x : t.v)
    if (x != 0.0) return true;
  return false;
}

}  // namespace

uint32_t ComputationGraph::push(Node n) {
  if (check_finite_ && !n.value.all_finite())
    throw std::runtime_error("graph: non-finite value produced by node " +
                             std::to_string(nodes_.size()));
  nodes_.push_back(std::move(n));
  return static_cast<uint32_t>(nodes_.size() - 1);
}

Expr ComputationGraph::input(Tensor t) {
  Node n;
  n.op = Op::kInput;
  n.value = std::move(t);
  return {this, push(std::move(n))};
}

Expr ComputationGraph::param(Parameter* p) {
  Node n;
  n.op = Op::kParam;
  n.value = p->value;
  n.p = p;
  return {this, push(std::move(n))};
}

Expr ComputationGraph::lookup(Parameter* table, uint32_t row) {
  if (table->value.rank() != 2)
    throw ShapeError("lookup: table '" + table->name + "' is not rank 2");
  if (row >= table->value.rows())
    throw ContractError("lookup: row " + std::to_string(row) +
                        " out of range for '" + table->name + "' with " +
                        std::to_string(table->value.rows()) + " rows");
  Node n;
  n.op = Op::kLookup;
  n.p = table;
  n.row = row;
  const size_t d = table->value.cols();
  n.value = Tensor::zeros({d});
  for (size_t j = 0; j < d; ++j) n.value.v[j] = table->value.at(row, j);
  return {this, push(std::move(n))};
}

Expr affine(Expr W, Expr x, Expr b) {
  require_same_graph(W, x, "affine");
  require_same_graph(W, b, "affine");
  ComputationGraph& g = *W.g;
  const Tensor& Wv = g.value(W);
  const Tensor& xv = g.value(x);
  const Tensor& bv = g.value(b);
  if (Wv.rank() != 2 || xv.rank() != 1 || bv.rank() != 1 ||
      Wv.cols() != xv.size() || Wv.rows() != bv.size())
    throw ShapeError("affine: incompatible shapes W" + Wv.shape_str() + " x" +
                     xv.shape_str() + " b" + bv.shape_str());
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kAffine;
  n.in = {W.i, x.i, b.i};
  const size_t m = Wv.rows(), k = Wv.cols();
  n.value = Tensor::zeros({m});
  for (size_t i = 0; i < m; ++i) {
    double acc = bv.v[i];
    const double* wrow = &Wv.v[i * k];
    for (size_t j = 0; j < k; ++j) acc += wrow[j] * xv.v[j];
    n.value.v[i] = acc;
  }
  return {&g, g.push(std::move(n))};
}

Expr matvec(Expr W, Expr x) {
  require_same_graph(W, x, "matvec");
  ComputationGraph& g = *W.g;
  const Tensor& Wv = g.value(W);
  const Tensor& xv = g.value(x);
  if (Wv.rank() != 2 || xv.rank() != 1 || Wv.cols() != xv.size())
    throw ShapeError("matvec: incompatible shapes W" + Wv.shape_str() + " x" +
                     xv.shape_str());
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kMatVec;
  n.in = {W.i, x.i};
  const size_t m = Wv.rows(), k = Wv.cols();
  n.value = Tensor::zeros({m});
  for (size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* wrow = &Wv.v[i * k];
    for (size_t j = 0; j < k; ++j) acc += wrow[j] * xv.v[j];
    n.value.v[i] = acc;
  }
  return {&g, g.push(std::move(n))};
}

Expr add(Expr a, Expr b) {
  require_same_graph(a, b, "add");
  ComputationGraph& g = *a.g;
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  if (!av.same_shape(bv))
    throw ShapeError("add: shape mismatch " + av.shape_str() + " vs " +
                     bv.shape_str());
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kAdd;
  n.in = {a.i, b.i};
  n.value = av;
  for (size_t i = 0; i < bv.size(); ++i) n.value.v[i] += bv.v[i];
  return {&g, g.push(std::move(n))};
}

Expr concat(const std::vector<Expr>& xs) {
  if (xs.empty()) throw ContractError("concat: empty input list");
  ComputationGraph& g = *xs[0].g;
  size_t total = 0;
  for (Expr e : xs) {
    require_same_graph(xs[0], e, "concat");
    const Tensor& t = g.value(e);
    if (t.rank() != 1)
      throw ShapeError("concat: input of shape " + t.shape_str() +
                       " is not rank 1");
    total += t.size();
  }
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kConcat;
  n.value = Tensor::zeros({total});
  size_t off = 0;
  for (Expr e : xs) {
    n.in.push_back(e.i);
    const Tensor& t = g.value(e);
    std::copy(t.v.begin(), t.v.end(), n.value.v.begin() + off);
    off += t.size();
  }
  return {&g, g.push(std::move(n))};
}

Expr nonlinearity(Nonlin kind, Expr x) {
  ComputationGraph& g = *x.g;
  ComputationGraph::Node n;
  switch (kind) {
    case Nonlin::kTanh: n.op = ComputationGraph::Op::kTanh; break;
    case Nonlin::kLogistic: n.op = ComputationGraph::Op::kLogistic; break;
    case Nonlin::kRelu: n.op = ComputationGraph::Op::kRelu; break;
    default: throw ContractError("nonlinearity: invalid kind");
  }
  n.in = {x.i};
  n.value = g.value(x);
  for (double& v : n.value.v) {
    switch (kind) {
      case Nonlin::kTanh: v = std::tanh(v); break;
      case Nonlin::kLogistic: v = 1.0 / (1.0 + std::exp(-v)); break;
      case Nonlin::kRelu: v = v > 0.0 ? v : 0.0; break;
    }
  }
  return {&g, g.push(std::move(n))};
}

Expr hadamard(Expr a, Expr b) {
  require_same_graph(a, b, "hadamard");
  ComputationGraph& g = *a.g;
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  if (!av.same_shape(bv))
    throw ShapeError("hadamard: shape mismatch " + av.shape_str() + " vs " +
                     bv.shape_str());
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kHadamard;
  n.in = {a.i, b.i};
  n.value = av;
  for (size_t i = 0; i < bv.size(); ++i) n.value.v[i] *= bv.v[i];
  return {&g, g.push(std::move(n))};
}

Expr one_minus(Expr x) {
  ComputationGraph& g = *x.g;
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kOneMinus;
  n.in = {x.i};
  n.value = g.value(x);
  for (double& v : n.value.v) v = 1.0 - v;
  return {&g, g.push(std::move(n))};
}

Expr sum(Expr x) {
  ComputationGraph& g = *x.g;
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kSum;
  n.in = {x.i};
  double acc = 0.0;
  for (double v : g.value(x).v) acc += v;
  n.value = Tensor::vec({acc});
  return {&g, g.push(std::move(n))};
}

std::vector<double> masked_softmax_values(const Tensor& scores,
                                          const std::vector<uint32_t>& legal) {
  if (legal.empty())
    throw ContractError("masked softmax: empty legal set");
  std::vector<double> probs(scores.size(), 0.0);
  double mx = scores.v[legal[0]];
  for (uint32_t j : legal) {
    if (j >= scores.size())
      throw ContractError("masked softmax: legal index " + std::to_string(j) +
                          " out of range");
    mx = std::max(mx, scores.v[j]);
  }
  double z = 0.0;
  for (uint32_t j : legal) {
    probs[j] = std::exp(scores.v[j] - mx);
    z += probs[j];
  }
  for (uint32_t j : legal) probs[j] /= z;
  return probs;
}

Expr masked_neg_log_softmax(Expr scores, const std::vector<uint32_t>& legal,
                            uint32_t gold) {
  ComputationGraph& g = *scores.g;
  const Tensor& sv = g.value(scores);
  if (sv.rank() != 1)
    throw ShapeError("masked_neg_log_softmax: scores of shape " +
                     sv.shape_str() + " are not rank 1");
  if (std::find(legal.begin(), legal.end(), gold) == legal.end())
    throw ContractError("masked_neg_log_softmax: gold index " +
                        std::to_string(gold) + " is not legal");
  ComputationGraph::Node n;
  n.op = ComputationGraph::Op::kMaskedNls;
  n.in = {scores.i};
  n.legal = legal;
  n.gold = gold;
  n.aux = masked_softmax_values(sv, legal);
  // -log p = log Z - (s_gold - max), with Z the shifted normalizer
  double mx = sv.v[legal[0]];
  for (uint32_t j : legal) mx = std::max(mx, sv.v[j]);
  double z = 0.0;
  for (uint32_t j : legal) z += std::exp(sv.v[j] - mx);
  n.value = Tensor::vec({std::log(z) - (sv.v[gold] - mx)});
  return {&g, g.push(std::move(n))};
}

void ComputationGraph::backward(Expr loss) {
  if (backward_done_)
    throw ContractError("backward: called twice without reset");
  if (loss.g != this)
    throw ContractError("backward: loss node belongs to another graph");
  if (!nodes_[loss.i].value.is_scalar())
    throw ContractError("backward: loss node of shape " +
                        nodes_[loss.i].value.shape_str() + " is not scalar");
  backward_done_ = true;

  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  nodes_[loss.i].grad.v[0] = 1.0;

  for (uint32_t idx = loss.i + 1; idx-- > 0;) {
    Node& n = nodes_[idx];
    if (!any_nonzero(n.grad)) continue;
    const Tensor& go = n.grad;
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParam:
        for (size_t i = 0; i < go.size(); ++i) n.p->grad.v[i] += go.v[i];
        break;
      case Op::kLookup: {
        const size_t d = n.p->value.cols();
        for (size_t j = 0; j < d; ++j) n.p->grad.at(n.row, j) += go.v[j];
        break;
      }
      case Op::kAffine: {
        Node& W = nodes_[n.in[0]];
        Node& x = nodes_[n.in[1]];
        Node& b = nodes_[n.in[2]];
        const size_t m = W.value.rows(), k = W.value.cols();
        for (size_t i = 0; i < m; ++i) {
          const double gi = go.v[i];
          if (gi == 0.0) continue;
          const double* wrow = &W.value.v[i * k];
          double* gwrow = &W.grad.v[i * k];
          for (size_t j = 0; j < k; ++j) {
            gwrow[j] += gi * x.value.v[j];
            x.grad.v[j] += gi * wrow[j];
          }
          b.grad.v[i] += gi;
        }
        break;
      }
      case Op::kMatVec: {
        Node& W = nodes_[n.in[0]];
        Node& x = nodes_[n.in[1]];
        const size_t m = W.value.rows(), k = W.value.cols();
        for (size_t i = 0; i < m; ++i) {
          const double gi = go.v[i];
          if (gi == 0.0) continue;
          const double* wrow = &W.value.v[i * k];
          double* gwrow = &W.grad.v[i * k];
          for (size_t j = 0; j < k; ++j) {
            gwrow[j] += gi * x.value.v[j];
            x.grad.v[j] += gi * wrow[j];
          }
        }
        break;
      }
      case Op::kAdd:
        for (size_t i = 0; i < go.size(); ++i) {
          nodes_[n.in[0]].grad.v[i] += go.v[i];
          nodes_[n.in[1]].grad.v[i] += go.v[i];
        }
        break;
      case Op::kConcat: {
        size_t off = 0;
        for (uint32_t src : n.in) {
          Node& s = nodes_[src];
          for (size_t i = 0; i < s.value.size(); ++i)
            s.grad.v[i] += go.v[off + i];
          off += s.value.size();
        }
        break;
      }
      case Op::kTanh: {
        Node& x = nodes_[n.in[0]];
        for (size_t i = 0; i < go.size(); ++i)
          x.grad.v[i] += go.v[i] * (1.0 - n.value.v[i] * n.value.v[i]);
        break;
      }
      case Op::kLogistic: {
        Node& x = nodes_[n.in[0]];
        for (size_t i = 0; i < go.size(); ++i)
          x.grad.v[i] += go.v[i] * n.value.v[i] * (1.0 - n.value.v[i]);
        break;
      }
      case Op::kRelu: {
        Node& x = nodes_[n.in[0]];
        for (size_t i = 0; i < go.size(); ++i)
          if (x.value.v[i] > 0.0) x.grad.v[i] += go.v[i];
        break;
      }
      case Op::kHadamard: {
        Node& a = nodes_[n.in[0]];
        Node& b = nodes_[n.in[1]];
        for (size_t i = 0; i < go.size(); ++i) {
          a.grad.v[i] += go.v[i] * b.value.v[i];
          b.grad.v[i] += go.v[i] * a.value.v[i];
        }
        break;
      }
      case Op::kOneMinus: {
        Node& x = nodes_[n.in[0]];
        for (size_t i = 0; i < go.size(); ++i) x.grad.v[i] -= go.v[i];
        break;
      }
      case Op::kSum: {
        Node& x = nodes_[n.in[0]];
        for (size_t i = 0; i < x.grad.size(); ++i) x.grad.v[i] += go.v[0];
        break;
      }
      case Op::kMaskedNls: {
        Node& s = nodes_[n.in[0]];
        const double g0 = go.v[0];
        for (uint32_t j : n.legal)
          s.grad.v[j] += g0 * (n.aux[j] - (j == n.gold ? 1.0 : 0.0));
        break;
      }
    }
  }
}

void ComputationGraph::reset_backward() {
  for (Node& n : nodes_) n.grad = Tensor();
  backward_done_ = false;
}

}  // namespace slp
