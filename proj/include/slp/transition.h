#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slp/graph.h"
#include "slp/lstm.h"
#include "slp/sentence.h"
#include "slp/vocab.h"

namespace slp {

// Arc-standard transitions plus SWAP. With u the stack top and v the second
// item:
//   REDUCE_RIGHT(r): arc u -> v (u is the head), pop both, push u's item
//                    carrying g_r(u, v)
//   REDUCE_LEFT(r):  arc v -> u (v is the head), pop both, push v's item
//                    carrying g_r(v, u)
//   SHIFT:           move the buffer front onto the stack
//   SWAP:            remove v and place it at the buffer front
// Note the naming: REDUCE_RIGHT makes the top (the rightmost-pushed word)
// the head, which is inverted relative to the usual arc-standard LEFT/RIGHT
// convention.
enum class ActionKind : uint8_t { kShift, kSwap, kReduceLeft, kReduceRight };

struct TransitionAction {
  ActionKind kind = ActionKind::kShift;
  uint32_t rel = 0;  // relation id, reduce kinds only

  bool operator==(const TransitionAction& o) const {
    return kind == o.kind &&
           (kind == ActionKind::kShift || kind == ActionKind::kSwap ||
            rel == o.rel);
  }
};

// Dense action ids: SHIFT=0, SWAP=1, then RL(r)=2+2r, RR(r)=3+2r.
constexpr uint32_t kShiftId = 0;
constexpr uint32_t kSwapId = 1;
uint32_t action_id(const TransitionAction& a);
TransitionAction action_from_id(uint32_t id);
size_t num_actions(size_t num_relations);
std::string action_name(const TransitionAction& a, const Vocabulary& vocab);

// Symbolic parser state: token positions only, no embeddings. Positions are
// 1..n with n+1 for the virtual root, which starts at the end of the buffer.
// buffer.back() is the front (next item to shift).
struct SymbolicState {
  std::vector<uint32_t> stack;
  std::vector<uint32_t> buffer;
  uint32_t root_pos = 0;
  std::vector<int> heads;       // 0-based token index -> head (0 = root)
  std::vector<uint32_t> rels;   // relation ids, parallel to heads
  std::vector<TransitionAction> history;

  static SymbolicState initial(size_t n);

  bool terminal() const { return buffer.empty() && stack.size() == 1; }
  bool is_legal(const TransitionAction& a) const;
  // All legal actions, in ascending action-id order. Calling on a terminal
  // state is a contract violation.
  std::vector<TransitionAction> legal_actions(size_t num_relations) const;
  std::vector<uint32_t> legal_action_ids(size_t num_relations) const;
  // Applies a legal action; illegal actions are a contract violation.
  void apply(const TransitionAction& a);

  DependencyTree tree(const Vocabulary& vocab) const;
};

// Rank of each token in the in-order traversal of the tree (children visited
// in original-position order around each head); rank vectors are 1..n with
// the identity for projective trees. Invalid input raises OracleError.
std::vector<int> projective_order(const DependencyTree& t);

// Static oracle with eager swapping: a reduce fires once the dependent has
// collected all its gold dependents, SWAP fires when the projective order of
// the top two items is inverted. Replaying the result from the initial state
// reproduces `gold` exactly. Throws OracleError when the tree cannot be
// linearized (malformed input or unknown relation label).
std::vector<TransitionAction> oracle(const DependencyTree& gold,
                                     const Vocabulary& vocab);

// Subtree composition parameters. The 20-dimensional embedding table is
// indexed by action id and doubles as the input embedding for the action
// history LSTM.
struct ComposerParams {
  Parameter* U = nullptr;             // [x_dim x (2 x_dim + action_dim)]
  Parameter* e = nullptr;             // [x_dim]
  Parameter* action_table = nullptr;  // [num_actions x action_dim]

  static ComposerParams create(ParameterCollection& pc, size_t x_dim,
                               size_t action_dim, size_t n_actions, Rng& rng);
};

// g_r(h, d) = tanh(U . concat(h, d, E[action]) + e)
Expr compose(ComputationGraph& g, const ComposerParams& cp, Expr head_vec,
             Expr dep_vec, uint32_t action_id);

// One stack/buffer item: original position, current vector, and whether the
// vector is a composed tree fragment.
struct ParserItem {
  uint32_t position = 0;
  Expr vec;
  bool is_fragment = false;
};

// Full parser configuration: the symbolic state plus item vectors and the
// three stack LSTMs, whose depths mirror the symbolic stacks.
class Configuration {
 public:
  Configuration(ComputationGraph& g, const StackLstmParams& stack_params,
                const StackLstmParams& buffer_params,
                const StackLstmParams& action_params,
                const ComposerParams& composer, Expr root_vec,
                const std::vector<Expr>& token_vecs);

  bool terminal() const { return sym_.terminal(); }
  std::vector<TransitionAction> legal_actions(size_t num_relations) const;
  std::vector<uint32_t> legal_action_ids(size_t num_relations) const;
  void apply(const TransitionAction& a);

  Expr stack_state() const { return s_lstm_.embedding(); }
  Expr buffer_state() const { return b_lstm_.embedding(); }
  Expr action_state() const { return a_lstm_.embedding(); }

  const SymbolicState& symbolic() const { return sym_; }
  const std::vector<ParserItem>& stack_items() const { return stack_; }
  const std::vector<ParserItem>& buffer_items() const { return buffer_; }
  size_t stack_lstm_depth() const { return s_lstm_.depth(); }
  size_t buffer_lstm_depth() const { return b_lstm_.depth(); }
  size_t action_lstm_depth() const { return a_lstm_.depth(); }

  DependencyTree tree(const Vocabulary& vocab) const {
    return sym_.tree(vocab);
  }

 private:
  ComputationGraph* g_;
  const ComposerParams* composer_;
  SymbolicState sym_;
  std::vector<ParserItem> stack_;   // back() = top
  std::vector<ParserItem> buffer_;  // back() = front
  StackLstm s_lstm_;
  StackLstm b_lstm_;
  StackLstm a_lstm_;
};

}  // namespace slp
