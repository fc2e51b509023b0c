#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slp/error.h"
#include "slp/graph.h"
#include "test_util.h"

using namespace slp;
using namespace slp::test;

TEST_CASE("affine identity and zero maps") {
  ComputationGraph g;
  ParameterCollection pc;
  Parameter* W = pc.add("W", {2, 2});
  W->value.at(0, 0) = 1.0;
  W->value.at(1, 1) = 1.0;
  Parameter* b = pc.add("b", {2});
  Expr y = affine(g.param(W), g.input(Tensor::vec({0.5, -1.0})), g.param(b));
  CHECK(g.value(y).v == std::vector<double>{0.5, -1.0});

  Parameter* W0 = pc.add("W0", {2, 3});
  Parameter* b34 = pc.add("b34", {2});
  b34->value.v = {3.0, 4.0};
  Expr z = affine(g.param(W0), g.input(Tensor::vec({9.0, -2.0, 7.0})),
                  g.param(b34));
  CHECK(g.value(z).v == std::vector<double>{3.0, 4.0});
}

TEST_CASE("affine value and gradients match a scalar oracle") {
  Rng rng(42);
  ParameterCollection pc;
  Parameter* W = pc.add("W", {2, 3});
  Parameter* b = pc.add("b", {2});
  Parameter* x = pc.add("x", {3});
  for (double& v : W->value.v) v = rng.uniform(-1, 1);
  for (double& v : b->value.v) v = rng.uniform(-1, 1);
  for (double& v : x->value.v) v = rng.uniform(-1, 1);

  ComputationGraph g;
  Expr y = affine(g.param(W), g.param(x), g.param(b));
  // oracle: hand-expanded sums
  for (size_t i = 0; i < 2; ++i) {
    double want = b->value.v[i];
    for (size_t j = 0; j < 3; ++j) want += W->value.at(i, j) * x->value.v[j];
    CHECK(g.value(y).v[i] == doctest::Approx(want).epsilon(1e-12));
  }
  // loss = sum(y): dL/dW_ij = x_j, dL/dx_j = sum_i W_ij, dL/db_i = 1
  g.backward(sum(y));
  for (size_t i = 0; i < 2; ++i) {
    CHECK(b->grad.v[i] == doctest::Approx(1.0));
    for (size_t j = 0; j < 3; ++j)
      CHECK(W->grad.at(i, j) == doctest::Approx(x->value.v[j]));
  }
  for (size_t j = 0; j < 3; ++j) {
    double want = W->value.at(0, j) + W->value.at(1, j);
    CHECK(x->grad.v[j] == doctest::Approx(want));
  }
}

TEST_CASE("affine shape mismatch names the operands") {
  ComputationGraph g;
  ParameterCollection pc;
  Parameter* W = pc.add("W", {2, 3});
  Parameter* b = pc.add("b", {2});
  Expr x = g.input(Tensor::vec({1.0, 2.0}));  // wrong length
  CHECK_THROWS_WITH_AS(affine(g.param(W), x, g.param(b)),
                       doctest::Contains("affine"), ShapeError);
}

TEST_CASE("concat values, identity, and gradient split") {
  ComputationGraph g;
  Expr a = g.input(Tensor::vec({1.0, 2.0}));
  Expr b = g.input(Tensor::vec({3.0}));
  CHECK(g.value(concat({a, b})).v == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(g.value(concat({a})).v == g.value(a).v);
  CHECK_THROWS_AS(concat({}), ContractError);

  ParameterCollection pc;
  Parameter* pa = pc.add("a", {1});
  Parameter* pb = pc.add("b", {1});
  ComputationGraph g2;
  g2.backward(sum(concat({g2.param(pa), g2.param(pb)})));
  CHECK(pa->grad.v[0] == 1.0);
  CHECK(pb->grad.v[0] == 1.0);
}

TEST_CASE("nonlinearity point values") {
  ComputationGraph g;
  Expr z = g.input(Tensor::vec({0.0}));
  CHECK(g.value(tanh_n(z)).v[0] == 0.0);
  CHECK(g.value(logistic_n(z)).v[0] == 0.5);
  CHECK(g.value(relu_n(g.input(Tensor::vec({-1.0})))).v[0] == 0.0);
  Expr r = relu_n(g.input(Tensor::vec({-2.0, 3.0})));
  CHECK(g.value(r).v == std::vector<double>{0.0, 3.0});
}

TEST_CASE("nonlinearity gradients vs finite differences") {
  for (Nonlin kind : {Nonlin::kTanh, Nonlin::kLogistic, Nonlin::kRelu}) {
    Rng rng(7 + static_cast<int>(kind));
    ParameterCollection pc;
    Parameter* x = pc.add("x", {10});
    for (double& v : x->value.v) v = rng.uniform(-2, 2);
    auto build = [&](ComputationGraph& g) {
      return sum(nonlinearity(kind, g.param(x)));
    };
    GradCheck r = check_gradients(pc, build);
    CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
    CHECK(r.checked == 10);
  }
}

TEST_CASE("hadamard identity, zero, and scalar oracle") {
  Rng rng(11);
  ComputationGraph g;
  Tensor av = random_tensor({4}, rng);
  Expr a = g.input(av);
  Expr ones = g.input(Tensor({4}, {1, 1, 1, 1}));
  Expr zeros = g.input(Tensor::zeros({4}));
  CHECK(g.value(hadamard(a, ones)).v == av.v);
  CHECK(g.value(hadamard(a, zeros)).v == std::vector<double>(4, 0.0));

  ParameterCollection pc;
  Parameter* pa = pc.add("a", {4});
  Parameter* pb = pc.add("b", {4});
  pa->value = random_tensor({4}, rng);
  pb->value = random_tensor({4}, rng);
  ComputationGraph g2;
  Expr prod = hadamard(g2.param(pa), g2.param(pb));
  for (size_t i = 0; i < 4; ++i)
    CHECK(g2.value(prod).v[i] ==
          doctest::Approx(pa->value.v[i] * pb->value.v[i]).epsilon(1e-15));
  g2.backward(sum(prod));
  for (size_t i = 0; i < 4; ++i) {
    CHECK(pa->grad.v[i] == doctest::Approx(pb->value.v[i]));
    CHECK(pb->grad.v[i] == doctest::Approx(pa->value.v[i]));
  }
  CHECK_THROWS_AS(hadamard(g2.param(pa), g2.input(Tensor::zeros({3}))),
                  ShapeError);
}

TEST_CASE("masked_neg_log_softmax values") {
  ComputationGraph g;
  Expr u = g.input(Tensor::vec({0.0, 0.0, 0.0}));
  Expr loss = masked_neg_log_softmax(u, {0, 1, 2}, 0);
  CHECK(g.value(loss).v[0] == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // the illegal entry with a huge score is ignored entirely
  Expr s = g.input(Tensor::vec({0.0, 0.0, 9.0}));
  Expr loss2 = masked_neg_log_softmax(s, {0, 1}, 1);
  CHECK(g.value(loss2).v[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(masked_neg_log_softmax(s, {0, 1}, 2), ContractError);
}

TEST_CASE("masked_neg_log_softmax vs brute-force softmax oracle") {
  Rng rng(13);
  ParameterCollection pc;
  Parameter* s = pc.add("s", {6});
  s->value = random_tensor({6}, rng, 3.0);
  std::vector<uint32_t> legal{1, 3, 4};
  // brute force: direct exponentials, no max subtraction
  double z = 0.0;
  for (uint32_t j : legal) z += std::exp(s->value.v[j]);
  double want = -std::log(std::exp(s->value.v[3]) / z);
  ComputationGraph g;
  Expr loss = masked_neg_log_softmax(g.param(s), legal, 3);
  CHECK(g.value(loss).v[0] == doctest::Approx(want).epsilon(1e-12));

  auto build = [&](ComputationGraph& gg) {
    return masked_neg_log_softmax(gg.param(s), legal, 3);
  };
  GradCheck r = check_gradients(pc, build);
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);

  // gradient flows only to legal entries
  pc.zero_grads();
  ComputationGraph g2;
  g2.backward(masked_neg_log_softmax(g2.param(s), legal, 3));
  CHECK(s->grad.v[0] == 0.0);
  CHECK(s->grad.v[2] == 0.0);
  CHECK(s->grad.v[5] == 0.0);
  CHECK(s->grad.v[1] != 0.0);
}

TEST_CASE("masked softmax distribution sums to 1, illegal exactly 0") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor scores = random_tensor({8}, rng, 10.0);
    std::vector<uint32_t> legal;
    for (uint32_t j = 0; j < 8; ++j)
      if (rng.uniform() < 0.5) legal.push_back(j);
    if (legal.empty()) legal.push_back(static_cast<uint32_t>(rng.below(8)));
    std::vector<double> p = masked_softmax_values(scores, legal);
    double total = 0.0;
    for (uint32_t j : legal) total += p[j];
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (uint32_t j = 0; j < 8; ++j) {
      bool is_legal = std::find(legal.begin(), legal.end(), j) != legal.end();
      if (!is_legal) CHECK(p[j] == 0.0);
    }
  }
}

TEST_CASE("backward basics") {
  ParameterCollection pc;
  Parameter* W = pc.add("W", {3, 3});
  for (size_t i = 0; i < 3; ++i) W->value.at(i, i) = 1.0;
  Parameter* b = pc.add("b", {3});

  // loss = sum(W x + b), W = I  => d/db = 1-vector
  ComputationGraph g;
  Expr y = affine(g.param(W), g.input(Tensor::vec({1.0, 2.0, 3.0})),
                  g.param(b));
  Expr loss = sum(y);
  g.backward(loss);
  CHECK(b->grad.v == std::vector<double>{1.0, 1.0, 1.0});

  CHECK_THROWS_AS(g.backward(loss), ContractError);  // no reset
  g.reset_backward();
  pc.zero_grads();
  g.backward(loss);
  CHECK(b->grad.v == std::vector<double>{1.0, 1.0, 1.0});

  // non-scalar loss is rejected
  ComputationGraph g2;
  Expr vec_node = g2.input(Tensor::vec({1.0, 2.0}));
  CHECK_THROWS_AS(g2.backward(vec_node), ContractError);
}

TEST_CASE("backward composite tanh(affine) vs finite differences") {
  Rng rng(23);
  ParameterCollection pc;
  Parameter* W = pc.add("W", {4, 5});
  Parameter* b = pc.add("b", {4});
  Parameter* x = pc.add("x", {5});
  W->value = random_tensor({4, 5}, rng);
  b->value = random_tensor({4}, rng);
  x->value = random_tensor({5}, rng);
  auto build = [&](ComputationGraph& g) {
    return sum(tanh_n(affine(g.param(W), g.param(x), g.param(b))));
  };
  GradCheck r = check_gradients(pc, build);
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
}

TEST_CASE("constant loss leaves all gradients zero") {
  ParameterCollection pc;
  Parameter* x = pc.add("x", {3});
  x->value = Tensor::vec({1.0, -2.0, 3.0});
  ComputationGraph g;
  Expr loss = sum(hadamard(g.param(x), g.input(Tensor::zeros({3}))));
  g.backward(loss);
  CHECK(x->grad.v == std::vector<double>(3, 0.0));
}

TEST_CASE("fan-out accumulates every consumer's contribution") {
  Rng rng(29);
  ParameterCollection pc;
  Parameter* x = pc.add("x", {4});
  Parameter* w = pc.add("w", {4});
  x->value = random_tensor({4}, rng);
  w->value = random_tensor({4}, rng);
  // z feeds both consumers: loss = sum(z + w (.) z), z = tanh(x)
  auto build = [&](ComputationGraph& g) {
    Expr z = tanh_n(g.param(x));
    return sum(add(z, hadamard(g.param(w), z)));
  };
  GradCheck r = check_gradients(pc, build);
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
}

TEST_CASE("gradient suite: every op at 10 seeded random points") {
  Rng rng(31);
  ParameterCollection pc;
  Parameter* W = pc.add("W", {3, 4});
  Parameter* b = pc.add("b", {3});
  Parameter* x = pc.add("x", {4});
  Parameter* y = pc.add("y", {3});
  for (int point = 0; point < 10; ++point) {
    W->value = random_tensor({3, 4}, rng);
    b->value = random_tensor({3}, rng);
    x->value = random_tensor({4}, rng);
    y->value = random_tensor({3}, rng);
    auto build = [&](ComputationGraph& g) {
      Expr h = affine(g.param(W), g.param(x), g.param(b));
      Expr m = hadamard(tanh_n(h), logistic_n(g.param(y)));
      Expr c = concat({m, relu_n(one_minus(m))});
      Expr scores = c;  // 6 entries
      return masked_neg_log_softmax(scores, {0, 2, 3, 5}, 2);
    };
    GradCheck r = check_gradients(pc, build);
    CHECK_MESSAGE(r.max_rel_err < 1e-4, r.worst);
  }
}

TEST_CASE("operations are deterministic bit for bit") {
  Rng rng(37);
  ParameterCollection pc;
  Parameter* W = pc.add("W", {5, 5});
  Parameter* b = pc.add("b", {5});
  W->value = random_tensor({5, 5}, rng);
  b->value = random_tensor({5}, rng);
  Tensor xv = random_tensor({5}, rng);
  auto run = [&]() {
    ComputationGraph g;
    Expr y = tanh_n(affine(g.param(W), g.input(xv), g.param(b)));
    return g.value(masked_neg_log_softmax(y, {0, 1, 4}, 1));
  };
  Tensor first = run();
  for (int i = 0; i < 5; ++i) CHECK(bitwise_equal(first, run()));
}

TEST_CASE("sgd_step update, decay schedule, and error paths") {
  ParameterCollection pc;
  Parameter* p = pc.add("p", {1});
  p->value.v[0] = 1.0;
  p->grad.v[0] = 2.0;
  sgd_step(pc, {0.1, 0.1, 0});
  CHECK(p->value.v[0] == doctest::Approx(0.8));
  CHECK(p->grad.v[0] == 0.0);  // cleared

  // zero gradient leaves the value unchanged
  sgd_step(pc, {0.1, 0.1, 0});
  CHECK(p->value.v[0] == doctest::Approx(0.8));

  // eta = eta0 / (1 + rho * epoch) across an epoch boundary
  SgdState s{0.1, 0.1, 0};
  CHECK(s.rate() == doctest::Approx(0.1));
  s.epoch = 1;
  CHECK(s.rate() == doctest::Approx(0.1 / 1.1));

  p->grad.v[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(sgd_step(pc, {0.1, 0.1, 0}), doctest::Contains("'p'"),
                       std::runtime_error);
}

TEST_CASE("debug finite check flags NaN production") {
  ComputationGraph g;
  g.set_check_finite(true);
  Expr inf = g.input(Tensor::vec({1e308}));
  CHECK_THROWS_AS(hadamard(inf, inf), std::runtime_error);
  ComputationGraph quiet;  // off by default
  Expr inf2 = quiet.input(Tensor::vec({1e308}));
  CHECK_NOTHROW(hadamard(inf2, inf2));
}
