#include "slp/transition.h"

#include <algorithm>

#include "slp/error.h"

namespace slp {

uint32_t action_id(const TransitionAction& a) {
  switch (a.kind) {
    case ActionKind::kShift: return kShiftId;
    case ActionKind::kSwap: return kSwapId;
    case ActionKind::kReduceLeft: return 2 + 2 * a.rel;
    case ActionKind::kReduceRight: return 3 + 2 * a.rel;
  }
  throw ContractError("action_id: invalid action kind");
}

TransitionAction action_from_id(uint32_t id) {
  if (id == kShiftId) return {ActionKind::kShift, 0};
  if (id == kSwapId) return {ActionKind::kSwap, 0};
  uint32_t rel = (id - 2) / 2;
  return {(id - 2) % 2 == 0 ? ActionKind::kReduceLeft
                            : ActionKind::kReduceRight,
          rel};
}

size_t num_actions(size_t num_relations) { return 2 + 2 * num_relations; }

std::string action_name(const TransitionAction& a, const Vocabulary& vocab) {
  switch (a.kind) {
    case ActionKind::kShift: return "SHIFT";
    case ActionKind::kSwap: return "SWAP";
    case ActionKind::kReduceLeft:
      return "REDUCE_LEFT(" + vocab.relation(a.rel) + ")";
    case ActionKind::kReduceRight:
      return "REDUCE_RIGHT(" + vocab.relation(a.rel) + ")";
  }
  return "?";
}

SymbolicState SymbolicState::initial(size_t n) {
  SymbolicState s;
  s.root_pos = static_cast<uint32_t>(n + 1);
  s.buffer.reserve(n + 1);
  s.buffer.push_back(s.root_pos);  // root sits at the end of the buffer
  for (size_t i = n; i >= 1; --i) s.buffer.push_back(static_cast<uint32_t>(i));
  s.heads.assign(n, -1);
  s.rels.assign(n, 0);
  return s;
}

bool SymbolicState::is_legal(const TransitionAction& a) const {
  const size_t depth = stack.size();
  switch (a.kind) {
    case ActionKind::kShift:
      return !buffer.empty();
    case ActionKind::kReduceLeft:
      // dependent is the top; the root may never be a dependent
      return depth >= 2 && stack[depth - 1] != root_pos;
    case ActionKind::kReduceRight:
      return depth >= 2 && stack[depth - 2] != root_pos;
    case ActionKind::kSwap:
      return depth >= 2 && stack[depth - 2] < stack[depth - 1] &&
             stack[depth - 2] != root_pos && stack[depth - 1] != root_pos;
  }
  return false;
}

std::vector<TransitionAction> SymbolicState::legal_actions(
    size_t num_relations) const {
  if (terminal())
    throw ContractError("legal_actions: configuration is terminal");
  std::vector<TransitionAction> out;
  TransitionAction shift{ActionKind::kShift, 0};
  TransitionAction swap{ActionKind::kSwap, 0};
  if (is_legal(shift)) out.push_back(shift);
  if (is_legal(swap)) out.push_back(swap);
  for (uint32_t r = 0; r < num_relations; ++r) {
    TransitionAction rl{ActionKind::kReduceLeft, r};
    TransitionAction rr{ActionKind::kReduceRight, r};
    if (is_legal(rl)) out.push_back(rl);
    if (is_legal(rr)) out.push_back(rr);
  }
  return out;
}

std::vector<uint32_t> SymbolicState::legal_action_ids(
    size_t num_relations) const {
  std::vector<uint32_t> ids;
  for (const TransitionAction& a : legal_actions(num_relations))
    ids.push_back(action_id(a));
  std::sort(ids.begin(), ids.end());
  return ids;
}

void SymbolicState::apply(const TransitionAction& a) {
  if (!is_legal(a))
    throw ContractError("apply: illegal action (kind " +
                        std::to_string(static_cast<int>(a.kind)) + ")");
  switch (a.kind) {
    case ActionKind::kShift:
      stack.push_back(buffer.back());
      buffer.pop_back();
      break;
    case ActionKind::kSwap: {
      uint32_t u = stack.back();
      stack.pop_back();
      uint32_t v = stack.back();
      stack.pop_back();
      stack.push_back(u);
      buffer.push_back(v);
      break;
    }
    case ActionKind::kReduceRight: {
      uint32_t u = stack.back();
      stack.pop_back();
      uint32_t v = stack.back();
      stack.pop_back();
      heads[v - 1] = u == root_pos ? 0 : static_cast<int>(u);
      rels[v - 1] = a.rel;
      stack.push_back(u);
      break;
    }
    case ActionKind::kReduceLeft: {
      uint32_t u = stack.back();
      stack.pop_back();
      uint32_t v = stack.back();
      stack.pop_back();
      heads[u - 1] = v == root_pos ? 0 : static_cast<int>(v);
      rels[u - 1] = a.rel;
      stack.push_back(v);
      break;
    }
  }
  history.push_back(a);
}

DependencyTree SymbolicState::tree(const Vocabulary& vocab) const {
  DependencyTree t;
  t.heads = heads;
  for (size_t i = 0; i < rels.size(); ++i)
    t.labels.push_back(heads[i] < 0 ? "_" : vocab.relation(rels[i]));
  return t;
}

std::vector<int> projective_order(const DependencyTree& t) {
  if (!is_valid_tree(t))
    throw OracleError("projective_order: input is not a valid tree");
  const int n = static_cast<int>(t.size());
  const int root = n + 1;
  // children[h] in ascending position order; head 0 is mapped to root.
  std::vector<std::vector<int>> children(n + 2);
  for (int i = 1; i <= n; ++i) {
    int h = t.heads[i - 1] == 0 ? root : t.heads[i - 1];
    children[h].push_back(i);
  }
  std::vector<int> rank(n, 0);
  int next = 0;
  // In-order traversal, iterative to survive deep chains.
  struct Frame {
    int node;
    size_t child = 0;
    bool visited = false;
  };
  std::vector<Frame> work{{root}};
  while (!work.empty()) {
    Frame& f = work.back();
    const std::vector<int>& kids = children[f.node];
    if (!f.visited && (f.child == kids.size() || kids[f.child] > f.node)) {
      f.visited = true;
      if (f.node != root) rank[f.node - 1] = ++next;
    }
    if (f.child < kids.size()) {
      int c = kids[f.child++];
      work.push_back({c});
    } else {
      work.pop_back();
    }
  }
  return rank;
}

std::vector<TransitionAction> oracle(const DependencyTree& gold,
                                     const Vocabulary& vocab) {
  const size_t n = gold.size();
  if (!is_valid_tree(gold))
    throw OracleError("oracle: gold tree is malformed");
  std::vector<int> rank = projective_order(gold);
  const uint32_t root_pos = static_cast<uint32_t>(n + 1);

  // head/relation of every token, with the root mapped to its position
  std::vector<uint32_t> head(n + 2, 0), rel(n + 2, 0);
  std::vector<int> want_deps(n + 2, 0), have_deps(n + 2, 0);
  for (size_t i = 1; i <= n; ++i) {
    uint32_t h =
        gold.heads[i - 1] == 0 ? root_pos : static_cast<uint32_t>(gold.heads[i - 1]);
    head[i] = h;
    ++want_deps[h];
    uint32_t r = vocab.relation_id(gold.labels[i - 1]);
    if (r == Vocabulary::kNoRelation)
      throw OracleError("oracle: unknown relation label '" +
                        gold.labels[i - 1] + "'");
    rel[i] = r;
  }
  auto proj = [&](uint32_t pos) {
    return pos == root_pos ? static_cast<int>(n + 1) : rank[pos - 1];
  };

  SymbolicState state = SymbolicState::initial(n);
  std::vector<TransitionAction> actions;
  const size_t max_len = 2 * (n + 1) + n * (n + 1);  // safety net
  while (!state.terminal()) {
    if (actions.size() > max_len)
      throw OracleError("oracle: no terminating sequence found");
    TransitionAction next{ActionKind::kShift, 0};
    bool picked = false;
    if (state.stack.size() >= 2) {
      uint32_t u = state.stack[state.stack.size() - 1];
      uint32_t v = state.stack[state.stack.size() - 2];
      if (v != root_pos && head[v] == u && have_deps[v] == want_deps[v]) {
        next = {ActionKind::kReduceRight, rel[v]};
        picked = true;
      } else if (u != root_pos && head[u] == v &&
                 have_deps[u] == want_deps[u]) {
        next = {ActionKind::kReduceLeft, rel[u]};
        picked = true;
      } else if (proj(v) > proj(u)) {
        next = {ActionKind::kSwap, 0};
        picked = true;
      }
    }
    if (!picked) {
      if (state.buffer.empty())
        throw OracleError("oracle: stuck with an empty buffer");
      next = {ActionKind::kShift, 0};
    }
    if (!state.is_legal(next))
      throw OracleError("oracle: derived an illegal action");
    if (next.kind == ActionKind::kReduceLeft ||
        next.kind == ActionKind::kReduceRight) {
      uint32_t dep = next.kind == ActionKind::kReduceRight
                         ? state.stack[state.stack.size() - 2]
                         : state.stack[state.stack.size() - 1];
      ++have_deps[head[dep]];
    }
    state.apply(next);
    actions.push_back(next);
  }
  return actions;
}

ComposerParams ComposerParams::create(ParameterCollection& pc, size_t x_dim,
                                      size_t action_dim, size_t n_actions,
                                      Rng& rng) {
  ComposerParams cp;
  cp.U = pc.add_glorot("compose.U", {x_dim, 2 * x_dim + action_dim}, rng);
  cp.e = pc.add("compose.e", {x_dim});
  cp.action_table =
      pc.add_uniform("actions.E", {n_actions, action_dim}, 0.1, rng);
  return cp;
}

Expr compose(ComputationGraph& g, const ComposerParams& cp, Expr head_vec,
             Expr dep_vec, uint32_t act_id) {
  Expr rel_emb = g.lookup(cp.action_table, act_id);
  return tanh_n(affine(g.param(cp.U), concat({head_vec, dep_vec, rel_emb}),
                       g.param(cp.e)));
}

Configuration::Configuration(ComputationGraph& g,
                             const StackLstmParams& stack_params,
                             const StackLstmParams& buffer_params,
                             const StackLstmParams& action_params,
                             const ComposerParams& composer, Expr root_vec,
                             const std::vector<Expr>& token_vecs)
    : g_(&g),
      composer_(&composer),
      sym_(SymbolicState::initial(token_vecs.size())),
      s_lstm_(g, stack_params),
      b_lstm_(g, buffer_params),
      a_lstm_(g, action_params) {
  // Load the buffer back to front so its top is the first word.
  buffer_.push_back({sym_.root_pos, root_vec, false});
  b_lstm_.push(root_vec);
  for (size_t i = token_vecs.size(); i >= 1; --i) {
    buffer_.push_back({static_cast<uint32_t>(i), token_vecs[i - 1], false});
    b_lstm_.push(token_vecs[i - 1]);
  }
}

std::vector<TransitionAction> Configuration::legal_actions(
    size_t num_relations) const {
  return sym_.legal_actions(num_relations);
}

std::vector<uint32_t> Configuration::legal_action_ids(
    size_t num_relations) const {
  return sym_.legal_action_ids(num_relations);
}

void Configuration::apply(const TransitionAction& a) {
  sym_.apply(a);  // validates legality and records history/arcs
  switch (a.kind) {
    case ActionKind::kShift: {
      ParserItem item = buffer_.back();
      buffer_.pop_back();
      b_lstm_.pop();
      stack_.push_back(item);
      s_lstm_.push(item.vec);
      break;
    }
    case ActionKind::kSwap: {
      ParserItem u = stack_.back();
      stack_.pop_back();
      ParserItem v = stack_.back();
      stack_.pop_back();
      s_lstm_.pop();
      s_lstm_.pop();
      stack_.push_back(u);
      s_lstm_.push(u.vec);
      buffer_.push_back(v);
      b_lstm_.push(v.vec);
      break;
    }
    case ActionKind::kReduceRight:
    case ActionKind::kReduceLeft: {
      ParserItem u = stack_.back();
      stack_.pop_back();
      ParserItem v = stack_.back();
      stack_.pop_back();
      s_lstm_.pop();
      s_lstm_.pop();
      const bool right = a.kind == ActionKind::kReduceRight;
      ParserItem& headi = right ? u : v;
      ParserItem& depi = right ? v : u;
      Expr composed =
          compose(*g_, *composer_, headi.vec, depi.vec, action_id(a));
      stack_.push_back({headi.position, composed, true});
      s_lstm_.push(composed);
      break;
    }
  }
  a_lstm_.push(g_->lookup(composer_->action_table, action_id(a)));
}

}  // namespace slp
