#include "slp/parser.h"

#include <iostream>
#include <numeric>

#include "slp/error.h"

namespace slp {

ParserModel ParserModel::build(Vocabulary vocab,
                               const RepresentationConfig& rep_cfg,
                               const NetworkConfig& net, uint64_t seed) {
  ParserModel m;
  m.rep_cfg = rep_cfg;
  m.net = net;
  m.init_seed = seed;
  m.vocab = std::move(vocab);
  Rng rng(seed);

  m.rep = RepParams::create(m.params, rep_cfg, m.vocab, rng);
  m.stack_params =
      StackLstmParams::create(m.params, "stack_s", rep_cfg.output_dim,
                              net.hidden_dim, net.layers, rng,
                              net.full_peepholes);
  m.buffer_params =
      StackLstmParams::create(m.params, "stack_b", rep_cfg.output_dim,
                              net.hidden_dim, net.layers, rng,
                              net.full_peepholes);
  m.action_params =
      StackLstmParams::create(m.params, "stack_a", net.action_dim,
                              net.hidden_dim, net.layers, rng,
                              net.full_peepholes);
  m.composer = ComposerParams::create(m.params, rep_cfg.output_dim,
                                      net.action_dim, m.n_actions(), rng);
  m.state_W =
      m.params.add_glorot("state.W", {net.state_dim, 3 * net.hidden_dim}, rng);
  m.state_d = m.params.add("state.d", {net.state_dim});
  m.scorer_G =
      m.params.add_glorot("scorer.G", {m.n_actions(), net.state_dim}, rng);
  m.scorer_q = m.params.add("scorer.q", {m.n_actions()});
  return m;
}

Expr state_embedding(ComputationGraph& g, const ParserModel& m, Expr s_t,
                     Expr b_t, Expr a_t) {
  return relu_n(affine(g.param(m.state_W), concat({s_t, b_t, a_t}),
                       g.param(m.state_d)));
}

Expr action_scores(ComputationGraph& g, const ParserModel& m, Expr p_t) {
  return affine(g.param(m.scorer_G), p_t, g.param(m.scorer_q));
}

std::vector<double> score_actions(ComputationGraph& g, const ParserModel& m,
                                  Expr p_t,
                                  const std::vector<uint32_t>& legal) {
  if (legal.empty()) throw ContractError("score_actions: empty legal set");
  Expr scores = action_scores(g, m, p_t);
  return masked_softmax_values(g.value(scores), legal);
}

namespace {

// Token vector under the model's representation mode. In chars mode,
// oov_as_unk replaces out-of-vocabulary surface forms with the literal
// string "UNK" before encoding.
Expr token_vec(ComputationGraph& g, const ParserModel& m,
               const std::string& form, const std::string& pos,
               bool train_mode, Rng* rng, double unk_prob, CharRepCache* cache,
               bool oov_as_unk) {
  if (m.rep_cfg.mode == RepresentationConfig::Mode::kLookup)
    return embed_word_lookup(g, m.rep, m.rep_cfg, m.vocab, form, pos,
                             train_mode, rng, unk_prob);
  const bool oov = m.vocab.word_id(form) == Vocabulary::kUnkWord;
  const std::string& surface = (oov_as_unk && oov) ? "UNK" : form;
  return embed_word_chars(g, m.rep, m.rep_cfg, m.vocab, surface, pos, cache);
}

Configuration make_configuration(ComputationGraph& g, const ParserModel& m,
                                 const Sentence& sentence, bool train_mode,
                                 Rng* rng, double unk_prob,
                                 CharRepCache* cache, bool oov_as_unk) {
  std::vector<Expr> vecs;
  vecs.reserve(sentence.size());
  for (const Token& t : sentence)
    vecs.push_back(token_vec(g, m, t.form, t.pos, train_mode, rng, unk_prob,
                             cache, oov_as_unk));
  Expr root_vec = embed_root(g, m.rep, m.rep_cfg, m.vocab);
  return Configuration(g, m.stack_params, m.buffer_params, m.action_params,
                       m.composer, root_vec, vecs);
}

}  // namespace

ParseResult greedy_parse(const Sentence& sentence, const ParserModel& m,
                         CharRepCache* cache, bool oov_as_unk) {
  if (sentence.empty()) throw ContractError("greedy_parse: empty sentence");
  ComputationGraph g;
  Configuration c = make_configuration(g, m, sentence, /*train_mode=*/false,
                                       nullptr, 0.0, cache, oov_as_unk);
  ParseResult result;
  const size_t n_rel = m.vocab.num_relations();
  while (!c.terminal()) {
    std::vector<uint32_t> legal = c.legal_action_ids(n_rel);
    Expr p_t = state_embedding(g, m, c.stack_state(), c.buffer_state(),
                               c.action_state());
    std::vector<double> probs = score_actions(g, m, p_t, legal);
    uint32_t best = legal[0];
    for (uint32_t id : legal)
      if (probs[id] > probs[best]) best = id;  // ties keep the lowest id
    TransitionAction a = action_from_id(best);
    c.apply(a);
    result.actions.push_back(a);
  }
  result.tree = c.tree(m.vocab);
  return result;
}

Expr sentence_loss(ComputationGraph& g, const Sentence& sentence,
                   const DependencyTree& gold, const ParserModel& m,
                   bool train_mode, Rng* rng, double unk_prob) {
  std::vector<TransitionAction> gold_actions = oracle(gold, m.vocab);
  Configuration c = make_configuration(g, m, sentence, train_mode, rng,
                                       unk_prob, nullptr, false);
  const size_t n_rel = m.vocab.num_relations();
  Expr total;
  for (const TransitionAction& a : gold_actions) {
    std::vector<uint32_t> legal = c.legal_action_ids(n_rel);
    Expr p_t = state_embedding(g, m, c.stack_state(), c.buffer_state(),
                               c.action_state());
    Expr scores = action_scores(g, m, p_t);
    Expr step = masked_neg_log_softmax(scores, legal, action_id(a));
    total = total.valid() ? add(total, step) : step;
    c.apply(a);
  }
  if (!c.terminal())
    throw OracleError("sentence_loss: gold sequence left a non-terminal state");
  return total;
}

EvalReport evaluate_model(const ParserModel& m,
                          const std::vector<Sentence>& dev, PunctMode punct) {
  CharRepCache cache;
  std::vector<DependencyTree> trees;
  trees.reserve(dev.size());
  for (const Sentence& s : dev)
    trees.push_back(greedy_parse(s, m, &cache).tree);
  return attachment_scores(dev, trees, punct);
}

TrainResult train(const std::vector<Sentence>& corpus,
                  const std::vector<Sentence>& dev,
                  const RepresentationConfig& rep_cfg,
                  const NetworkConfig& net_cfg, const TrainConfig& cfg,
                  std::ostream* log) {
  if (corpus.empty()) throw ContractError("train: empty corpus");
  Vocabulary vocab = build_vocabulary(corpus);
  TrainResult result{ParserModel::build(std::move(vocab), rep_cfg, net_cfg,
                                        cfg.seed)};
  ParserModel& m = result.model;

  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  Rng unk_rng(cfg.seed ^ 0x2545f4914f6cdd1dull);

  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);

  SgdState sgd{cfg.eta0, cfg.decay, 0};
  std::vector<Tensor> best;
  unsigned evals_since_best = 0;

  for (unsigned epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    sgd.epoch = epoch;
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    size_t steps = 0;
    size_t skipped_this_epoch = 0;
    for (size_t idx : order) {
      const Sentence& s = corpus[idx];
      DependencyTree gold = gold_tree(s);
      if (!has_gold_tree(s) || !is_valid_tree(gold)) {
        ++skipped_this_epoch;
        continue;
      }
      try {
        ComputationGraph g;
        Expr loss = sentence_loss(g, s, gold, m, /*train_mode=*/true,
                                  cfg.unk_replace ? &unk_rng : nullptr,
                                  cfg.unk_prob);
        loss_sum += g.value(loss).v[0];
        ++steps;
        g.backward(loss);
        sgd_step(m.params, sgd);
      } catch (const OracleError& e) {
        ++skipped_this_epoch;
        if (log) *log << "warn=oracle_skip sentence=" << idx + 1
                      << " reason=\"" << e.what() << "\"\n";
      }
    }
    result.oracle_skipped += skipped_this_epoch;
    result.epochs = epoch + 1;

    bool eval_now = (epoch + 1) % cfg.dev_eval_every == 0 ||
                    epoch + 1 == cfg.max_epochs;
    double dev_uas = -1.0, dev_las = -1.0;
    if (eval_now && !dev.empty()) {
      EvalReport r = evaluate_model(m, dev, cfg.dev_punct);
      dev_uas = r.uas;
      dev_las = r.las;
      if (dev_uas > result.best_uas) {
        result.best_uas = dev_uas;
        result.best_las = dev_las;
        best = m.params.snapshot_values();
        evals_since_best = 0;
      } else {
        ++evals_since_best;
      }
    }
    if (log) {
      char line[256];
      std::snprintf(line, sizeof line,
                    "epoch=%u eta=%.6g loss=%.4f sentences=%zu skipped=%zu",
                    epoch + 1, sgd.rate(), loss_sum, steps,
                    skipped_this_epoch);
      *log << line;
      if (dev_uas >= 0.0) {
        std::snprintf(line, sizeof line,
                      " dev_uas=%.2f dev_las=%.2f best_uas=%.2f", dev_uas,
                      dev_las, result.best_uas);
        *log << line;
      }
      *log << '\n';
    }
    if (!dev.empty() && evals_since_best >= cfg.patience) break;
    if (result.best_uas >= 100.0) break;  // nothing left to improve
  }
  if (!best.empty()) m.params.restore_values(best);
  return result;
}

}  // namespace slp
