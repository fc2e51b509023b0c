#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "slp/sentence.h"

namespace slp {

// Word, character, POS, and relation inventories built from training data.
// Ids are dense from 0 with the reserved symbols always present; unknown
// keys look up to the reserved UNK id instead of failing.
class Vocabulary {
 public:
  static constexpr uint32_t kUnkWord = 0;
  static constexpr uint32_t kRootWord = 1;
  static constexpr uint32_t kUnkChar = 0;
  // Reserved tag id, used for the virtual root and unseen tags.
  static constexpr uint32_t kUnkPos = 0;

  Vocabulary();

  uint32_t add_word(const std::string& w);
  uint32_t add_char(uint32_t codepoint);
  uint32_t add_pos(const std::string& p);
  uint32_t add_relation(const std::string& r);

  uint32_t word_id(const std::string& w) const;
  uint32_t char_id(uint32_t codepoint) const;
  uint32_t pos_id(const std::string& p) const;
  // Relations have no UNK: unknown labels return kNoRelation.
  static constexpr uint32_t kNoRelation = UINT32_MAX;
  uint32_t relation_id(const std::string& r) const;

  const std::string& word(uint32_t id) const { return words_[id]; }
  const std::string& pos(uint32_t id) const { return pos_[id]; }
  const std::string& relation(uint32_t id) const { return relations_[id]; }
  uint32_t char_codepoint(uint32_t id) const { return chars_[id]; }

  uint64_t word_frequency(uint32_t id) const { return word_freq_[id]; }
  void bump_word_frequency(uint32_t id) {
    if (word_freq_[id] != UINT64_MAX) ++word_freq_[id];
  }

  size_t num_words() const { return words_.size(); }
  size_t num_chars() const { return chars_.size(); }
  size_t num_pos() const { return pos_.size(); }
  size_t num_relations() const { return relations_.size(); }

  // Char ids for a surface form (UNK for unseen codepoints).
  std::vector<uint32_t> char_ids(const std::string& form) const;

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<uint32_t>& chars() const { return chars_; }
  const std::vector<std::string>& pos_tags() const { return pos_; }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::vector<uint64_t>& word_frequencies() const { return word_freq_; }

  // Rebuilds a vocabulary from serialized tables (reserved symbols must sit
  // at their fixed slots); throws ModelIoError otherwise.
  static Vocabulary from_tables(const std::vector<std::string>& words,
                                const std::vector<uint64_t>& word_freqs,
                                const std::vector<uint32_t>& chars,
                                const std::vector<std::string>& pos,
                                const std::vector<std::string>& relations);

 private:
  std::vector<std::string> words_;
  std::vector<uint64_t> word_freq_;
  std::unordered_map<std::string, uint32_t> word_ids_;
  std::vector<uint32_t> chars_;
  std::unordered_map<uint32_t, uint32_t> char_ids_;
  std::vector<std::string> pos_;
  std::unordered_map<std::string, uint32_t> pos_ids_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, uint32_t> relation_ids_;
};

// Maps every observed word/char/POS/relation in first-occurrence order and
// records word frequencies (insertion order is deterministic).
Vocabulary build_vocabulary(const std::vector<Sentence>& corpus);

}  // namespace slp
