#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slp/sentence.h"

namespace slp {

// Two scoring conventions: include scores every token, exclude drops tokens
// whose form consists entirely of Unicode punctuation characters.
enum class PunctMode { kInclude, kExclude };

struct SentenceScore {
  size_t scored = 0;
  size_t excluded = 0;
  size_t correct_head = 0;
  size_t correct_labeled = 0;
};

struct EvalReport {
  double uas = 0.0;  // percent, correct head
  double las = 0.0;  // percent, correct head and label
  size_t total = 0;
  size_t scored = 0;
  size_t excluded = 0;
  size_t correct_head = 0;
  size_t correct_labeled = 0;
  std::vector<SentenceScore> per_sentence;
};

// True when every codepoint of the form is in Unicode category P*.
bool is_all_punct(const std::string& form);

EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<DependencyTree>& predicted,
                             PunctMode mode);

// Scores one system file against a gold file already read into memory;
// misaligned inputs are a contract violation.
EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& system,
                             PunctMode mode);

std::string format_report(const EvalReport& r);      // human-readable
std::string report_key_values(const EvalReport& r);  // key=value block

}  // namespace slp
