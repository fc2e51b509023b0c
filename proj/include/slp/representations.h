#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "slp/graph.h"
#include "slp/lstm.h"
#include "slp/rng.h"
#include "slp/vocab.h"

namespace slp {

// How token vectors x are produced: from a word lookup table or composed
// from the character sequence, each optionally concatenated with a POS
// embedding before the projection x = relu(V [.] + b).
struct RepresentationConfig {
  enum class Mode : uint8_t { kLookup, kChars };

  Mode mode = Mode::kChars;
  bool use_pos = false;
  size_t word_dim = 32;
  size_t char_emb_dim = 32;
  size_t char_rep_dim = 100;  // split equally across directions
  size_t pos_dim = 12;
  size_t output_dim = 100;  // dimension of x

  size_t projection_in() const {
    size_t base = mode == Mode::kLookup ? word_dim : char_rep_dim;
    return base + (use_pos ? pos_dim : 0);
  }
};

struct RepParams {
  Parameter* word_table = nullptr;  // E_w [num_words x word_dim]
  Parameter* pos_table = nullptr;   // E_t [num_pos x pos_dim], if use_pos
  Parameter* proj_V = nullptr;      // [output_dim x projection_in]
  Parameter* proj_b = nullptr;      // [output_dim]
  CharBiLstm char_encoder;          // chars mode only
  Parameter* root_rep = nullptr;    // stands in for [fwd;bwd] of the root

  static RepParams create(ParameterCollection& pc,
                          const RepresentationConfig& cfg,
                          const Vocabulary& vocab, Rng& rng);
};

// Memoized character-composed vectors keyed by (surface form, POS); only
// valid while the parameters stay fixed. Concurrent insertion of identical
// values is fine.
class CharRepCache {
 public:
  std::optional<Tensor> get(const std::string& key) const;
  void put(const std::string& key, const Tensor& value);
  static std::string key(const std::string& form, const std::string& pos);

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, Tensor> map_;
};

// x = relu(V . concat(E_w[word-or-UNK], E_t[pos]?) + b). In train mode a
// singleton word is replaced by UNK with probability unk_prob.
Expr embed_word_lookup(ComputationGraph& g, const RepParams& params,
                       const RepresentationConfig& cfg,
                       const Vocabulary& vocab, const std::string& form,
                       const std::string& pos, bool train_mode,
                       Rng* rng = nullptr, double unk_prob = 0.5);

// x = relu(V . concat(fwd, bwd, E_t[pos]?) + b) with the word read character
// by character in both directions. Unseen characters map to UNK_CHAR. With a
// cache the result re-enters the graph as a constant.
Expr embed_word_chars(ComputationGraph& g, const RepParams& params,
                      const RepresentationConfig& cfg, const Vocabulary& vocab,
                      const std::string& form, const std::string& pos,
                      CharRepCache* cache = nullptr);

// Representation of the virtual root token under either mode.
Expr embed_root(ComputationGraph& g, const RepParams& params,
                const RepresentationConfig& cfg, const Vocabulary& vocab);

}  // namespace slp
