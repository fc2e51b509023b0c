#include "slp/vocab.h"

#include "slp/error.h"
#include "slp/utf8.h"

namespace slp {

Vocabulary::Vocabulary() {
  add_word("<unk>");   // kUnkWord
  add_word("<root>");  // kRootWord
  // Reserved symbols never take part in singleton UNK replacement.
  word_freq_[kUnkWord] = word_freq_[kRootWord] = UINT64_MAX;
  add_char(0xfffd);  // kUnkChar: replacement character
  add_pos("<unk>");  // kUnkPos
}

uint32_t Vocabulary::add_word(const std::string& w) {
  auto it = word_ids_.find(w);
  if (it != word_ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(words_.size());
  words_.push_back(w);
  word_freq_.push_back(0);
  word_ids_[w] = id;
  return id;
}

uint32_t Vocabulary::add_char(uint32_t codepoint) {
  auto it = char_ids_.find(codepoint);
  if (it != char_ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(chars_.size());
  chars_.push_back(codepoint);
  char_ids_[codepoint] = id;
  return id;
}

uint32_t Vocabulary::add_pos(const std::string& p) {
  auto it = pos_ids_.find(p);
  if (it != pos_ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(pos_.size());
  pos_.push_back(p);
  pos_ids_[p] = id;
  return id;
}

uint32_t Vocabulary::add_relation(const std::string& r) {
  auto it = relation_ids_.find(r);
  if (it != relation_ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(relations_.size());
  relations_.push_back(r);
  relation_ids_[r] = id;
  return id;
}

uint32_t Vocabulary::word_id(const std::string& w) const {
  auto it = word_ids_.find(w);
  return it == word_ids_.end() ? kUnkWord : it->second;
}

uint32_t Vocabulary::char_id(uint32_t codepoint) const {
  auto it = char_ids_.find(codepoint);
  return it == char_ids_.end() ? kUnkChar : it->second;
}

uint32_t Vocabulary::pos_id(const std::string& p) const {
  auto it = pos_ids_.find(p);
  return it == pos_ids_.end() ? kUnkPos : it->second;
}

uint32_t Vocabulary::relation_id(const std::string& r) const {
  auto it = relation_ids_.find(r);
  return it == relation_ids_.end() ? kNoRelation : it->second;
}

std::vector<uint32_t> Vocabulary::char_ids(const std::string& form) const {
  std::vector<uint32_t> ids;
  for (uint32_t cp : decode_utf8(form)) ids.push_back(char_id(cp));
  return ids;
}

Vocabulary Vocabulary::from_tables(const std::vector<std::string>& words,
                                   const std::vector<uint64_t>& word_freqs,
                                   const std::vector<uint32_t>& chars,
                                   const std::vector<std::string>& pos,
                                   const std::vector<std::string>& relations) {
  Vocabulary v;
  if (words.size() < 2 || words.size() != word_freqs.size() || chars.empty() ||
      pos.empty() || words[kUnkWord] != v.words_[kUnkWord] ||
      words[kRootWord] != v.words_[kRootWord] ||
      chars[kUnkChar] != v.chars_[kUnkChar] || pos[kUnkPos] != v.pos_[kUnkPos])
    throw ModelIoError("vocabulary tables are missing reserved symbols");
  for (size_t i = 2; i < words.size(); ++i)
    if (v.add_word(words[i]) != i)
      throw ModelIoError("duplicate word entry '" + words[i] + "'");
  for (size_t i = 0; i < word_freqs.size(); ++i) v.word_freq_[i] = word_freqs[i];
  for (size_t i = 1; i < chars.size(); ++i)
    if (v.add_char(chars[i]) != i)
      throw ModelIoError("duplicate character entry");
  for (size_t i = 1; i < pos.size(); ++i)
    if (v.add_pos(pos[i]) != i)
      throw ModelIoError("duplicate POS entry '" + pos[i] + "'");
  for (size_t i = 0; i < relations.size(); ++i)
    if (v.add_relation(relations[i]) != i)
      throw ModelIoError("duplicate relation entry '" + relations[i] + "'");
  return v;
}

Vocabulary build_vocabulary(const std::vector<Sentence>& corpus) {
  if (corpus.empty()) throw ContractError("build_vocabulary: empty corpus");
  Vocabulary v;
  for (const Sentence& s : corpus) {
    for (const Token& t : s) {
      uint32_t wid = v.add_word(t.form);
      v.bump_word_frequency(wid);
      for (uint32_t cp : decode_utf8(t.form)) v.add_char(cp);
      v.add_pos(t.pos);
      if (t.head >= 0) v.add_relation(t.deprel);
    }
  }
  return v;
}

}  // namespace slp
