#include "slp/representations.h"

#include "slp/error.h"

namespace slp {

RepParams RepParams::create(ParameterCollection& pc,
                            const RepresentationConfig& cfg,
                            const Vocabulary& vocab, Rng& rng) {
  RepParams p;
  if (cfg.mode == RepresentationConfig::Mode::kLookup) {
    p.word_table = pc.add_uniform("rep.E_w", {vocab.num_words(), cfg.word_dim},
                                  0.1, rng);
  } else {
    if (cfg.char_rep_dim % 2 != 0)
      throw ContractError("RepParams: char_rep_dim must be even");
    p.char_encoder =
        CharBiLstm::create(pc, "rep.char", vocab.num_chars(), cfg.char_emb_dim,
                           cfg.char_rep_dim / 2, rng);
    p.root_rep = pc.add_uniform("rep.root", {cfg.char_rep_dim}, 0.1, rng);
  }
  if (cfg.use_pos)
    p.pos_table =
        pc.add_uniform("rep.E_t", {vocab.num_pos(), cfg.pos_dim}, 0.1, rng);
  p.proj_V = pc.add_glorot("rep.V", {cfg.output_dim, cfg.projection_in()}, rng);
  p.proj_b = pc.add("rep.b", {cfg.output_dim});
  return p;
}

std::optional<Tensor> CharRepCache::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void CharRepCache::put(const std::string& key, const Tensor& value) {
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(key, value);
}

std::string CharRepCache::key(const std::string& form,
                              const std::string& pos) {
  return form + '\x1f' + pos;
}

namespace {

Expr project(ComputationGraph& g, const RepParams& params,
             const RepresentationConfig& cfg, Expr base,
             const std::string& pos, const Vocabulary& vocab) {
  Expr in = base;
  if (cfg.use_pos) {
    if (pos.empty())
      throw ContractError("token representation: POS required but absent");
    in = concat({base, g.lookup(params.pos_table, vocab.pos_id(pos))});
  }
  return relu_n(affine(g.param(params.proj_V), in, g.param(params.proj_b)));
}

}  // namespace

Expr embed_word_lookup(ComputationGraph& g, const RepParams& params,
                       const RepresentationConfig& cfg,
                       const Vocabulary& vocab, const std::string& form,
                       const std::string& pos, bool train_mode, Rng* rng,
                       double unk_prob) {
  if (cfg.mode != RepresentationConfig::Mode::kLookup)
    throw ContractError("embed_word_lookup: model is not in lookup mode");
  uint32_t wid = vocab.word_id(form);
  if (train_mode && rng != nullptr && wid != Vocabulary::kUnkWord &&
      vocab.word_frequency(wid) == 1 && rng->uniform() < unk_prob)
    wid = Vocabulary::kUnkWord;
  return project(g, params, cfg, g.lookup(params.word_table, wid), pos, vocab);
}

Expr embed_word_chars(ComputationGraph& g, const RepParams& params,
                      const RepresentationConfig& cfg, const Vocabulary& vocab,
                      const std::string& form, const std::string& pos,
                      CharRepCache* cache) {
  if (cfg.mode != RepresentationConfig::Mode::kChars)
    throw ContractError("embed_word_chars: model is not in chars mode");
  if (form.empty())
    throw ContractError("embed_word_chars: empty surface form");
  std::string key;
  if (cache != nullptr) {
    key = CharRepCache::key(form, pos);
    if (auto hit = cache->get(key)) return g.input(*hit);
  }
  BiLstmCode code = bilstm_encode(g, params.char_encoder, vocab.char_ids(form));
  Expr x = project(g, params, cfg, concat({code.fwd, code.bwd}), pos, vocab);
  if (cache != nullptr) cache->put(key, g.value(x));
  return x;
}

Expr embed_root(ComputationGraph& g, const RepParams& params,
                const RepresentationConfig& cfg, const Vocabulary& vocab) {
  Expr base = cfg.mode == RepresentationConfig::Mode::kLookup
                  ? g.lookup(params.word_table, Vocabulary::kRootWord)
                  : g.param(params.root_rep);
  const std::string& root_pos = vocab.pos(Vocabulary::kUnkPos);
  return project(g, params, cfg, base, root_pos, vocab);
}

}  // namespace slp
