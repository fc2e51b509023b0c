#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slp/eval.h"
#include "slp/representations.h"
#include "slp/transition.h"

namespace slp {

struct NetworkConfig {
  size_t hidden_dim = 100;  // stack LSTM hidden size
  size_t layers = 2;        // stack LSTM layers
  size_t action_dim = 20;   // action/relation embedding size
  size_t state_dim = 100;   // dimension of the parser state p_t
  bool full_peepholes = false;
};

// All learned state of a parser: the vocabulary, every named parameter, and
// the representation/network configuration. Movable, not copyable;
// parameters may be read concurrently but updated only exclusively.
struct ParserModel {
  RepresentationConfig rep_cfg;
  NetworkConfig net;
  uint64_t init_seed = 0;
  Vocabulary vocab;
  ParameterCollection params;

  RepParams rep;
  StackLstmParams stack_params;
  StackLstmParams buffer_params;
  StackLstmParams action_params;
  ComposerParams composer;
  Parameter* state_W = nullptr;  // [state_dim x 3*hidden_dim]
  Parameter* state_d = nullptr;  // [state_dim]
  Parameter* scorer_G = nullptr;  // one row per action
  Parameter* scorer_q = nullptr;  // one bias per action

  size_t n_actions() const { return num_actions(vocab.num_relations()); }

  static ParserModel build(Vocabulary vocab, const RepresentationConfig& rep,
                           const NetworkConfig& net, uint64_t seed);
};

// p_t = relu(W . concat(s_t, b_t, a_t) + d)
Expr state_embedding(ComputationGraph& g, const ParserModel& m, Expr s_t,
                     Expr b_t, Expr a_t);

// Score node over the full action inventory: G p_t + q.
Expr action_scores(ComputationGraph& g, const ParserModel& m, Expr p_t);

// p(z | p_t) over `legal`; full-size vector, illegal entries exactly 0.
std::vector<double> score_actions(ComputationGraph& g, const ParserModel& m,
                                  Expr p_t, const std::vector<uint32_t>& legal);

struct ParseResult {
  DependencyTree tree;
  std::vector<TransitionAction> actions;
};

// Greedy decoding: repeatedly take the most probable legal action (ties
// broken by lowest action id) until the configuration is terminal.
ParseResult greedy_parse(const Sentence& sentence, const ParserModel& m,
                         CharRepCache* cache = nullptr,
                         bool oov_as_unk = false);

// Sum over the gold transition sequence of -log p(gold action | state).
// Oracle failures propagate as OracleError.
Expr sentence_loss(ComputationGraph& g, const Sentence& sentence,
                   const DependencyTree& gold, const ParserModel& m,
                   bool train_mode, Rng* rng, double unk_prob = 0.5);

struct TrainConfig {
  unsigned max_epochs = 30;
  unsigned patience = 5;        // dev evaluations without UAS improvement
  unsigned dev_eval_every = 1;  // epochs between dev evaluations
  uint64_t seed = 1;
  double eta0 = 0.1;
  double decay = 0.1;
  bool unk_replace = true;  // singleton -> UNK replacement while training
  double unk_prob = 0.5;
  PunctMode dev_punct = PunctMode::kInclude;
};

struct TrainResult {
  ParserModel model;
  unsigned epochs = 0;
  double best_uas = -1.0;
  double best_las = -1.0;
  size_t oracle_skipped = 0;
};

// Per-sentence SGD over shuffled epochs with dev-UAS early stopping; the
// best-dev model is the one returned. Sentences the oracle cannot linearize
// are skipped and counted. Fixed seed means a bit-identical result.
TrainResult train(const std::vector<Sentence>& corpus,
                  const std::vector<Sentence>& dev,
                  const RepresentationConfig& rep_cfg,
                  const NetworkConfig& net_cfg, const TrainConfig& cfg,
                  std::ostream* log = nullptr);

// Dev-set evaluation with greedy decoding (fresh char cache).
EvalReport evaluate_model(const ParserModel& m,
                          const std::vector<Sentence>& dev, PunctMode punct);

}  // namespace slp
