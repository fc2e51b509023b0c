#include "slp/lstm.h"

#include "slp/error.h"

namespace slp {

LstmLayerParams LstmLayerParams::create(ParameterCollection& pc,
                                        const std::string& prefix, size_t n_in,
                                        size_t n_h, Rng& rng,
                                        bool full_peephole) {
  LstmLayerParams p;
  p.n_in = n_in;
  p.n_h = n_h;
  p.full_peephole = full_peephole;
  p.W_ix = pc.add_glorot(prefix + ".W_ix", {n_h, n_in}, rng);
  p.W_ih = pc.add_glorot(prefix + ".W_ih", {n_h, n_h}, rng);
  p.w_ic = full_peephole ? pc.add_glorot(prefix + ".W_ic", {n_h, n_h}, rng)
                         : pc.add_uniform(prefix + ".w_ic", {n_h}, 0.1, rng);
  p.b_i = pc.add(prefix + ".b_i", {n_h});
  p.W_cx = pc.add_glorot(prefix + ".W_cx", {n_h, n_in}, rng);
  p.W_ch = pc.add_glorot(prefix + ".W_ch", {n_h, n_h}, rng);
  p.b_c = pc.add(prefix + ".b_c", {n_h});
  p.W_ox = pc.add_glorot(prefix + ".W_ox", {n_h, n_in}, rng);
  p.W_oh = pc.add_glorot(prefix + ".W_oh", {n_h, n_h}, rng);
  p.w_oc = full_peephole ? pc.add_glorot(prefix + ".W_oc", {n_h, n_h}, rng)
                         : pc.add_uniform(prefix + ".w_oc", {n_h}, 0.1, rng);
  p.b_o = pc.add(prefix + ".b_o", {n_h});
  return p;
}

namespace {

Expr peephole(ComputationGraph& g, const LstmLayerParams& p, Parameter* w,
              Expr c) {
  return p.full_peephole ? matvec(g.param(w), c) : hadamard(g.param(w), c);
}

}  // namespace

LstmState lstm_step(const LstmLayerParams& p, Expr x, const LstmState& prev,
                    LstmGates* gates) {
  ComputationGraph& g = *x.g;
  if (g.value(x).size() != p.n_in)
    throw ShapeError("lstm_step: input of shape " + g.value(x).shape_str() +
                     " does not match n_in=" + std::to_string(p.n_in));
  Expr i = logistic_n(add(add(affine(g.param(p.W_ix), x, g.param(p.b_i)),
                              matvec(g.param(p.W_ih), prev.h)),
                          peephole(g, p, p.w_ic, prev.c)));
  Expr f = one_minus(i);  // coupled gates: i + f = 1 by construction
  Expr cand = tanh_n(add(affine(g.param(p.W_cx), x, g.param(p.b_c)),
                         matvec(g.param(p.W_ch), prev.h)));
  Expr c = add(hadamard(f, prev.c), hadamard(i, cand));
  Expr o = logistic_n(add(add(affine(g.param(p.W_ox), x, g.param(p.b_o)),
                              matvec(g.param(p.W_oh), prev.h)),
                          peephole(g, p, p.w_oc, c)));
  Expr h = hadamard(o, tanh_n(c));
  if (gates != nullptr) *gates = {i, f, o};
  return {h, c};
}

LstmState zero_state(ComputationGraph& g, size_t n_h) {
  return {g.input(Tensor::zeros({n_h})), g.input(Tensor::zeros({n_h}))};
}

StackLstmParams StackLstmParams::create(ParameterCollection& pc,
                                        const std::string& prefix, size_t n_in,
                                        size_t n_h, size_t n_layers, Rng& rng,
                                        bool full_peephole) {
  StackLstmParams p;
  for (size_t l = 0; l < n_layers; ++l) {
    size_t in = l == 0 ? n_in : n_h;
    p.layers.push_back(LstmLayerParams::create(
        pc, prefix + ".l" + std::to_string(l), in, n_h, rng, full_peephole));
    p.guard_h.push_back(pc.add_uniform(
        prefix + ".guard_h" + std::to_string(l), {n_h}, 0.1, rng));
    p.guard_c.push_back(pc.add_uniform(
        prefix + ".guard_c" + std::to_string(l), {n_h}, 0.1, rng));
  }
  return p;
}

StackLstm::StackLstm(ComputationGraph& g, const StackLstmParams& params)
    : g_(&g), params_(&params) {
  Snapshot guard;
  for (size_t l = 0; l < params.n_layers(); ++l)
    guard.states.push_back(
        {g.param(params.guard_h[l]), g.param(params.guard_c[l])});
  guard.parent = 0;
  guard.depth = 0;
  snapshots_.push_back(std::move(guard));
}

void StackLstm::push(Expr x) {
  const Snapshot& prev = snapshots_[top_];
  Snapshot next;
  Expr in = x;
  for (size_t l = 0; l < params_->n_layers(); ++l) {
    LstmState s = lstm_step(params_->layers[l], in, prev.states[l]);
    in = s.h;  // higher layers read the lower layer's h
    next.states.push_back(s);
  }
  next.parent = top_;
  next.depth = prev.depth + 1;
  snapshots_.push_back(std::move(next));
  top_ = static_cast<uint32_t>(snapshots_.size() - 1);
}

void StackLstm::pop() {
  if (top_ == 0) throw ContractError("StackLstm: pop at guard");
  top_ = snapshots_[top_].parent;
}

Expr StackLstm::embedding() const {
  return snapshots_[top_].states.back().h;
}

CharBiLstm CharBiLstm::create(ParameterCollection& pc,
                              const std::string& prefix, size_t n_chars,
                              size_t emb_dim, size_t n_h_each, Rng& rng) {
  CharBiLstm enc;
  enc.fwd = LstmLayerParams::create(pc, prefix + ".fwd", emb_dim, n_h_each, rng);
  enc.bwd = LstmLayerParams::create(pc, prefix + ".bwd", emb_dim, n_h_each, rng);
  enc.char_table = pc.add_uniform(prefix + ".chars", {n_chars, emb_dim}, 0.1, rng);
  return enc;
}

BiLstmCode bilstm_encode(ComputationGraph& g, const CharBiLstm& enc,
                         const std::vector<uint32_t>& char_ids) {
  if (char_ids.empty())
    throw ContractError("bilstm_encode: empty character sequence");
  LstmState f = zero_state(g, enc.fwd.n_h);
  for (uint32_t id : char_ids)
    f = lstm_step(enc.fwd, g.lookup(enc.char_table, id), f);
  LstmState b = zero_state(g, enc.bwd.n_h);
  for (size_t i = char_ids.size(); i-- > 0;)
    b = lstm_step(enc.bwd, g.lookup(enc.char_table, char_ids[i]), b);
  return {f.h, b.h};
}

}  // namespace slp
