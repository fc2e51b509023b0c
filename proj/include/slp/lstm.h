#pragma once

#include <string>
#include <vector>

#include "slp/graph.h"
#include "slp/params.h"

namespace slp {

// One LSTM layer with coupled input/forget gates and peephole connections:
//   i = sigma(W_ix x + W_ih h' + W_ic (.) c' + b_i)
//   f = 1 - i
//   c = f (.) c' + i (.) tanh(W_cx x + W_ch h' + b_c)
//   o = sigma(W_ox x + W_oh h' + W_oc (.) c + b_o)
//   h = o (.) tanh(c)
// Peepholes are diagonal (component-wise vectors) by default; full matrices
// are available behind `full_peephole`.
struct LstmLayerParams {
  size_t n_in = 0;
  size_t n_h = 0;
  bool full_peephole = false;
  Parameter* W_ix = nullptr;
  Parameter* W_ih = nullptr;
  Parameter* w_ic = nullptr;
  Parameter* b_i = nullptr;
  Parameter* W_cx = nullptr;
  Parameter* W_ch = nullptr;
  Parameter* b_c = nullptr;
  Parameter* W_ox = nullptr;
  Parameter* W_oh = nullptr;
  Parameter* w_oc = nullptr;
  Parameter* b_o = nullptr;

  static LstmLayerParams create(ParameterCollection& pc,
                                const std::string& prefix, size_t n_in,
                                size_t n_h, Rng& rng,
                                bool full_peephole = false);
};

struct LstmState {
  Expr h;
  Expr c;
};

// Gate activations, exposed for inspection.
struct LstmGates {
  Expr i;
  Expr f;
  Expr o;
};

// Single recurrence step. `x` must have size n_in; prev states size n_h.
LstmState lstm_step(const LstmLayerParams& params, Expr x,
                    const LstmState& prev, LstmGates* gates = nullptr);

// Zero initial state built from constant inputs.
LstmState zero_state(ComputationGraph& g, size_t n_h);

// Parameters for a multi-layer stack LSTM, including the learned guard
// ("empty stack") state per layer.
struct StackLstmParams {
  std::vector<LstmLayerParams> layers;
  std::vector<Parameter*> guard_h;
  std::vector<Parameter*> guard_c;

  size_t n_layers() const { return layers.size(); }
  size_t hidden_dim() const { return layers.empty() ? 0 : layers[0].n_h; }

  static StackLstmParams create(ParameterCollection& pc,
                                const std::string& prefix, size_t n_in,
                                size_t n_h, size_t n_layers, Rng& rng,
                                bool full_peephole = false);
};

// LSTM over a stack discipline: push computes a new state from the state at
// the top cursor, pop moves the cursor back to the predecessor snapshot.
// History is append-only within a sentence, so a pop restores a previously
// computed state bitwise. Confined to one parse in flight.
class StackLstm {
 public:
  StackLstm(ComputationGraph& g, const StackLstmParams& params);

  void push(Expr x);
  // Moves the cursor to the predecessor; no recomputation. Popping the
  // guard is a contract violation.
  void pop();
  // Top-layer h at the cursor (the guard's h for an empty stack).
  Expr embedding() const;
  size_t depth() const { return snapshots_[top_].depth; }

 private:
  struct Snapshot {
    std::vector<LstmState> states;  // one per layer
    uint32_t parent = 0;
    uint32_t depth = 0;
  };

  ComputationGraph* g_;
  const StackLstmParams* params_;
  std::vector<Snapshot> snapshots_;
  uint32_t top_ = 0;
};

// Bidirectional character encoder: a forward and a backward single-layer
// LSTM over character embeddings, with disjoint parameters.
struct CharBiLstm {
  LstmLayerParams fwd;
  LstmLayerParams bwd;
  Parameter* char_table = nullptr;  // [n_chars x emb_dim]

  size_t out_dim() const { return fwd.n_h + bwd.n_h; }

  static CharBiLstm create(ParameterCollection& pc, const std::string& prefix,
                           size_t n_chars, size_t emb_dim, size_t n_h_each,
                           Rng& rng);
};

struct BiLstmCode {
  Expr fwd;  // final h reading left to right
  Expr bwd;  // final h reading right to left, separate parameters
};

// Encodes a nonempty character-id sequence; empty input is a contract
// violation (callers guarantee nonempty word forms).
BiLstmCode bilstm_encode(ComputationGraph& g, const CharBiLstm& enc,
                         const std::vector<uint32_t>& char_ids);

}  // namespace slp
