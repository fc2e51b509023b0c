#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slp/error.h"
#include "slp/lstm.h"
#include "test_util.h"

using namespace slp;
using namespace slp::test;

namespace {

// Independent scalar-loop oracle for the recurrences, reading parameter
// values directly with plain double arithmetic (diagonal peepholes).
void scalar_lstm_step(const LstmLayerParams& p, const std::vector<double>& x,
                      std::vector<double>& h, std::vector<double>& c) {
  const size_t H = p.n_h, I = p.n_in;
  std::vector<double> gate_i(H), c_new(H), gate_o(H);
  for (size_t k = 0; k < H; ++k) {
    double a = p.b_i->value.v[k];
    for (size_t j = 0; j < I; ++j) a += p.W_ix->value.at(k, j) * x[j];
    for (size_t j = 0; j < H; ++j) a += p.W_ih->value.at(k, j) * h[j];
    a += p.w_ic->value.v[k] * c[k];
    gate_i[k] = 1.0 / (1.0 + std::exp(-a));
  }
  for (size_t k = 0; k < H; ++k) {
    double a = p.b_c->value.v[k];
    for (size_t j = 0; j < I; ++j) a += p.W_cx->value.at(k, j) * x[j];
    for (size_t j = 0; j < H; ++j) a += p.W_ch->value.at(k, j) * h[j];
    c_new[k] = (1.0 - gate_i[k]) * c[k] + gate_i[k] * std::tanh(a);
  }
  for (size_t k = 0; k < H; ++k) {
    double a = p.b_o->value.v[k];
    for (size_t j = 0; j < I; ++j) a += p.W_ox->value.at(k, j) * x[j];
    for (size_t j = 0; j < H; ++j) a += p.W_oh->value.at(k, j) * h[j];
    a += p.w_oc->value.v[k] * c_new[k];
    gate_o[k] = 1.0 / (1.0 + std::exp(-a));
  }
  for (size_t k = 0; k < H; ++k) {
    c[k] = c_new[k];
    h[k] = gate_o[k] * std::tanh(c_new[k]);
  }
}

void randomize(ParameterCollection& pc, Rng& rng, double bound = 0.5) {
  for (Parameter* p : pc.all())
    for (double& v : p->value.v) v = rng.uniform(-bound, bound);
}

}  // namespace

TEST_CASE("lstm_step with all-zero parameters and zero state") {
  ParameterCollection pc;
  Rng rng(1);
  LstmLayerParams p = LstmLayerParams::create(pc, "l", 3, 4, rng);
  for (Parameter* par : pc.all()) par->value.fill(0.0);
  ComputationGraph g;
  LstmGates gates;
  LstmState s = lstm_step(p, g.input(Tensor::zeros({3})), zero_state(g, 4),
                          &gates);
  for (size_t k = 0; k < 4; ++k) {
    CHECK(g.value(gates.i).v[k] == 0.5);
    CHECK(g.value(gates.o).v[k] == 0.5);
    CHECK(g.value(s.c).v[k] == 0.0);
    CHECK(g.value(s.h).v[k] == 0.0);
  }
}

TEST_CASE("gate coupling: i + f = 1 exactly") {
  for (uint64_t draw = 0; draw < 20; ++draw) {
    ParameterCollection pc;
    Rng rng(100 + draw);
    LstmLayerParams p = LstmLayerParams::create(pc, "l", 5, 6, rng);
    randomize(pc, rng, 2.0);
    ComputationGraph g;
    LstmState prev{g.input(random_tensor({6}, rng)),
                   g.input(random_tensor({6}, rng))};
    LstmGates gates;
    lstm_step(p, g.input(random_tensor({5}, rng)), prev, &gates);
    for (size_t k = 0; k < 6; ++k)
      CHECK(g.value(gates.i).v[k] + g.value(gates.f).v[k] == 1.0);
  }
}

TEST_CASE("lstm_step 3-step sequence matches the scalar oracle") {
  ParameterCollection pc;
  Rng rng(17);
  LstmLayerParams p = LstmLayerParams::create(pc, "l", 3, 4, rng);
  randomize(pc, rng);
  ComputationGraph g;
  LstmState s = zero_state(g, 4);
  std::vector<double> oh(4, 0.0), oc(4, 0.0);
  for (int t = 0; t < 3; ++t) {
    Tensor x = random_tensor({3}, rng);
    s = lstm_step(p, g.input(x), s);
    scalar_lstm_step(p, x.v, oh, oc);
    for (size_t k = 0; k < 4; ++k) {
      CHECK(g.value(s.h).v[k] == doctest::Approx(oh[k]).epsilon(1e-12));
      CHECK(g.value(s.c).v[k] == doctest::Approx(oc[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("lstm_step input size is validated") {
  ParameterCollection pc;
  Rng rng(3);
  LstmLayerParams p = LstmLayerParams::create(pc, "l", 3, 4, rng);
  ComputationGraph g;
  CHECK_THROWS_AS(lstm_step(p, g.input(Tensor::zeros({5})), zero_state(g, 4)),
                  ShapeError);
}

TEST_CASE("lstm_step gradients: all weight matrices and biases") {
  ParameterCollection pc;
  Rng rng(23);
  LstmLayerParams p = LstmLayerParams::create(pc, "l", 3, 4, rng);
  randomize(pc, rng);
  Tensor x1 = random_tensor({3}, rng), x2 = random_tensor({3}, rng);
  auto build = [&](ComputationGraph& g) {
    LstmState s = zero_state(g, 4);
    s = lstm_step(p, g.input(x1), s);
    s = lstm_step(p, g.input(x2), s);
    return sum(s.h);
  };
  GradCheck r = check_gradients(pc, build);
  CHECK(pc.all().size() == 11);  // 8 weights + 3 biases
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
}

TEST_CASE("full-matrix peepholes remain differentiable") {
  ParameterCollection pc;
  Rng rng(29);
  LstmLayerParams p =
      LstmLayerParams::create(pc, "l", 2, 3, rng, /*full_peephole=*/true);
  randomize(pc, rng);
  CHECK(p.w_ic->value.rank() == 2);
  Tensor x = random_tensor({2}, rng);
  auto build = [&](ComputationGraph& g) {
    return sum(lstm_step(p, g.input(x), zero_state(g, 3)).h);
  };
  GradCheck r = check_gradients(pc, build);
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
}

TEST_CASE("stack push/pop restores previous states bitwise") {
  ParameterCollection pc;
  Rng rng(31);
  StackLstmParams params = StackLstmParams::create(pc, "s", 3, 4, 2, rng);
  ComputationGraph g;
  StackLstm s(g, params);

  Tensor guard_h = g.value(s.embedding());
  CHECK(bitwise_equal(guard_h, params.guard_h.back()->value));
  CHECK(s.depth() == 0);
  CHECK_THROWS_AS(s.pop(), ContractError);

  Tensor xa = random_tensor({3}, rng), xb = random_tensor({3}, rng);
  s.push(g.input(xa));
  Tensor after_a = g.value(s.embedding());
  CHECK(s.depth() == 1);
  CHECK_FALSE(bitwise_equal(after_a, guard_h));  // differs from the guard

  s.push(g.input(xb));
  CHECK(s.depth() == 2);
  s.pop();
  CHECK(bitwise_equal(g.value(s.embedding()), after_a));
  s.pop();
  CHECK(bitwise_equal(g.value(s.embedding()), guard_h));

  // push/pop/push with identical input reproduces the state bitwise
  s.push(g.input(xa));
  Tensor first = g.value(s.embedding());
  s.pop();
  s.push(g.input(xa));
  CHECK(bitwise_equal(first, g.value(s.embedding())));
}

TEST_CASE("stack depth is pushes minus pops") {
  ParameterCollection pc;
  Rng rng(37);
  StackLstmParams params = StackLstmParams::create(pc, "s", 2, 3, 1, rng);
  ComputationGraph g;
  StackLstm s(g, params);
  size_t k = 0, j = 0;
  for (int step = 0; step < 50; ++step) {
    if (s.depth() > 0 && rng.uniform() < 0.4) {
      s.pop();
      ++j;
    } else {
      s.push(g.input(random_tensor({2}, rng)));
      ++k;
    }
    CHECK(s.depth() == k - j);
  }
}

TEST_CASE("randomized push/pop persistence") {
  ParameterCollection pc;
  Rng rng(41);
  StackLstmParams params = StackLstmParams::create(pc, "s", 2, 3, 2, rng);
  ComputationGraph g;
  StackLstm s(g, params);
  std::vector<Tensor> shadow;  // embedding before each live push
  shadow.push_back(g.value(s.embedding()));
  for (int step = 0; step < 200; ++step) {
    if (s.depth() > 0 && rng.uniform() < 0.45) {
      s.pop();
      shadow.pop_back();
      CHECK(bitwise_equal(g.value(s.embedding()), shadow.back()));
    } else {
      s.push(g.input(random_tensor({2}, rng)));
      shadow.push_back(g.value(s.embedding()));
    }
  }
}

TEST_CASE("two-layer stack matches a scalar oracle over 3 pushes") {
  ParameterCollection pc;
  Rng rng(43);
  StackLstmParams params = StackLstmParams::create(pc, "s", 3, 4, 2, rng);
  randomize(pc, rng);
  ComputationGraph g;
  StackLstm s(g, params);

  // oracle state per layer, seeded from the guard parameters
  std::vector<std::vector<double>> oh(2), oc(2);
  for (size_t l = 0; l < 2; ++l) {
    oh[l] = params.guard_h[l]->value.v;
    oc[l] = params.guard_c[l]->value.v;
  }
  for (int t = 0; t < 3; ++t) {
    Tensor x = random_tensor({3}, rng);
    s.push(g.input(x));
    // layer-2 input is the h computed by layer 1
    scalar_lstm_step(params.layers[0], x.v, oh[0], oc[0]);
    scalar_lstm_step(params.layers[1], oh[0], oh[1], oc[1]);
    for (size_t k = 0; k < 4; ++k)
      CHECK(g.value(s.embedding()).v[k] ==
            doctest::Approx(oh[1][k]).epsilon(1e-12));
  }
}

TEST_CASE("bilstm_encode basics") {
  ParameterCollection pc;
  Rng rng(47);
  CharBiLstm enc = CharBiLstm::create(pc, "c", 10, 3, 4, rng);

  ComputationGraph g;
  CHECK_THROWS_AS(bilstm_encode(g, enc, {}), ContractError);

  // single character: disjoint parameter sets give different outputs
  BiLstmCode one = bilstm_encode(g, enc, {2});
  CHECK_FALSE(bitwise_equal(g.value(one.fwd), g.value(one.bwd)));

  // palindrome: the char sequence equals its reverse, yet fwd != bwd
  BiLstmCode pal = bilstm_encode(g, enc, {1, 2, 1});
  CHECK_FALSE(bitwise_equal(g.value(pal.fwd), g.value(pal.bwd)));

  // distinct words produce distinct code pairs
  BiLstmCode other = bilstm_encode(g, enc, {1, 2, 2});
  CHECK_FALSE(bitwise_equal(g.value(pal.fwd), g.value(other.fwd)));
  CHECK_FALSE(bitwise_equal(g.value(pal.bwd), g.value(other.bwd)));
}

TEST_CASE("bwd code equals a forward fold of the reversed sequence") {
  ParameterCollection pc;
  Rng rng(53);
  CharBiLstm enc = CharBiLstm::create(pc, "c", 10, 3, 4, rng);
  std::vector<uint32_t> ids{3, 1, 4, 1, 5};
  ComputationGraph g;
  BiLstmCode code = bilstm_encode(g, enc, ids);
  LstmState st = zero_state(g, 4);
  for (size_t i = ids.size(); i-- > 0;)
    st = lstm_step(enc.bwd, g.lookup(enc.char_table, ids[i]), st);
  CHECK(bitwise_equal(g.value(code.bwd), g.value(st.h)));
}
