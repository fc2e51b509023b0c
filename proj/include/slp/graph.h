#pragma once

#include <cstdint>
#include <vector>

#include "slp/params.h"
#include "slp/tensor.h"

namespace slp {

class ComputationGraph;

// Lightweight handle to a node in a ComputationGraph.
struct Expr {
  ComputationGraph* g = nullptr;
  uint32_t i = 0;
  bool valid() const { return g != nullptr; }
};

enum class Nonlin : uint8_t { kTanh, kLogistic, kRelu };

// Reverse-mode tape over dense f64 tensors. Values are computed eagerly at
// node construction; backward() walks the tape once in reverse and
// accumulates into Parameter::grad. Graphs are built per sentence and
// discarded.
class ComputationGraph {
 public:
  ComputationGraph() = default;
  ComputationGraph(const ComputationGraph&) = delete;
  ComputationGraph& operator=(const ComputationGraph&) = delete;

  // Constant leaf; receives no gradient.
  Expr input(Tensor t);
  // Parameter leaf; backward adds into p->grad.
  Expr param(Parameter* p);
  // Row `row` of a rank-2 parameter table; backward adds into that row only.
  Expr lookup(Parameter* table, uint32_t row);

  const Tensor& value(Expr e) const { return nodes_[e.i].value; }
  // Gradient of the loss w.r.t. a node; only meaningful after backward().
  const Tensor& gradient(Expr e) const { return nodes_[e.i].grad; }
  size_t node_count() const { return nodes_.size(); }

  // Accumulates d(loss)/d(parameter) into every parameter used by the
  // graph. `loss` must be scalar; calling twice without reset is an error.
  void backward(Expr loss);
  // Clears gradient state so backward may run again on the same tape.
  void reset_backward();

  // Debug switch: validate that every freshly computed value is finite.
  void set_check_finite(bool on) { check_finite_ = on; }

 private:
  friend Expr affine(Expr W, Expr x, Expr b);
  friend Expr matvec(Expr W, Expr x);
  friend Expr add(Expr a, Expr b);
  friend Expr concat(const std::vector<Expr>& xs);
  friend Expr nonlinearity(Nonlin kind, Expr x);
  friend Expr hadamard(Expr a, Expr b);
  friend Expr one_minus(Expr x);
  friend Expr sum(Expr x);
  friend Expr masked_neg_log_softmax(Expr scores,
                                     const std::vector<uint32_t>& legal,
                                     uint32_t gold);

  enum class Op : uint8_t {
    kInput,
    kParam,
    kLookup,
    kAffine,     // W x + b
    kMatVec,     // W x
    kAdd,        // a + b (elementwise)
    kConcat,     // rank-1 inputs, in order
    kTanh,
    kLogistic,
    kRelu,
    kHadamard,   // a ⊙ b
    kOneMinus,   // 1 - x
    kSum,        // sum of components -> scalar
    kMaskedNls,  // -log softmax(scores | legal)[gold] -> scalar
  };

  struct Node {
    Op op;
    std::vector<uint32_t> in;
    Tensor value;
    Tensor grad;               // allocated lazily by backward
    Parameter* p = nullptr;    // kParam / kLookup
    uint32_t row = 0;          // kLookup
    std::vector<uint32_t> legal;  // kMaskedNls
    uint32_t gold = 0;            // kMaskedNls
    std::vector<double> aux;      // kMaskedNls: softmax probs over scores
  };

  uint32_t push(Node n);
  Node& node(uint32_t i) { return nodes_[i]; }

  std::vector<Node> nodes_;
  bool backward_done_ = false;
  bool check_finite_ = false;
};

// --- graph operations -------------------------------------------------

// W [m x n] · x [n] + b [m]. Gradients flow into all three operands.
Expr affine(Expr W, Expr x, Expr b);
Expr matvec(Expr W, Expr x);
Expr add(Expr a, Expr b);
// Concatenation of rank-1 nodes; backward splits by segment.
Expr concat(const std::vector<Expr>& xs);
// Component-wise tanh / logistic / relu (relu subgradient at 0 is 0).
Expr nonlinearity(Nonlin kind, Expr x);
Expr hadamard(Expr a, Expr b);
Expr one_minus(Expr x);
Expr sum(Expr x);
// -log( exp(scores[gold]) / sum_{j in legal} exp(scores[j]) ), computed with
// max-subtraction. Gradient flows only to legal entries.
Expr masked_neg_log_softmax(Expr scores, const std::vector<uint32_t>& legal,
                            uint32_t gold);

inline Expr tanh_n(Expr x) { return nonlinearity(Nonlin::kTanh, x); }
inline Expr logistic_n(Expr x) { return nonlinearity(Nonlin::kLogistic, x); }
inline Expr relu_n(Expr x) { return nonlinearity(Nonlin::kRelu, x); }

// Softmax over the legal entries of a score vector (forward only, no graph
// node). Returns a full-size vector: illegal entries are exactly 0.
std::vector<double> masked_softmax_values(const Tensor& scores,
                                          const std::vector<uint32_t>& legal);

}  // namespace slp
