#include "slp/eval.h"

#include <algorithm>
#include <cstdio>

#include "slp/error.h"
#include "slp/utf8.h"

namespace slp {

namespace {

struct CpRange {
  uint32_t lo, hi;
};

constexpr CpRange kPunctRanges[] = {
#include "punct_ranges.inc"
};

bool is_punct_codepoint(uint32_t cp) {
  auto it = std::upper_bound(
      std::begin(kPunctRanges), std::end(kPunctRanges), cp,
      [](uint32_t v, const CpRange& r) { return v < r.lo; });
  if (it == std::begin(kPunctRanges)) return false;
  --it;
  return cp <= it->hi;
}

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

bool is_all_punct(const std::string& form) {
  std::vector<uint32_t> cps = decode_utf8(form);
  if (cps.empty()) return false;
  for (uint32_t cp : cps)
    if (!is_punct_codepoint(cp)) return false;
  return true;
}

EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<DependencyTree>& predicted,
                             PunctMode mode) {
  if (gold.size() != predicted.size())
    throw ContractError("attachment_scores: " + std::to_string(gold.size()) +
                        " gold sentences vs " +
                        std::to_string(predicted.size()) + " predictions");
  EvalReport r;
  for (size_t si = 0; si < gold.size(); ++si) {
    const Sentence& s = gold[si];
    const DependencyTree& t = predicted[si];
    if (t.size() != s.size())
      throw ContractError("attachment_scores: sentence " +
                          std::to_string(si + 1) + " has " +
                          std::to_string(s.size()) + " tokens but " +
                          std::to_string(t.size()) + " predictions");
    SentenceScore sc;
    for (size_t i = 0; i < s.size(); ++i) {
      ++r.total;
      if (mode == PunctMode::kExclude && is_all_punct(s[i].form)) {
        ++sc.excluded;
        continue;
      }
      ++sc.scored;
      if (t.heads[i] == s[i].head) {
        ++sc.correct_head;
        if (t.labels[i] == s[i].deprel) ++sc.correct_labeled;
      }
    }
    r.scored += sc.scored;
    r.excluded += sc.excluded;
    r.correct_head += sc.correct_head;
    r.correct_labeled += sc.correct_labeled;
    r.per_sentence.push_back(sc);
  }
  // Counts stay exact integers; the division happens once, here.
  if (r.scored > 0) {
    r.uas = 100.0 * static_cast<double>(r.correct_head) /
            static_cast<double>(r.scored);
    r.las = 100.0 * static_cast<double>(r.correct_labeled) /
            static_cast<double>(r.scored);
  }
  return r;
}

EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& system,
                             PunctMode mode) {
  if (gold.size() != system.size())
    throw ContractError("attachment_scores: gold has " +
                        std::to_string(gold.size()) + " sentences, system " +
                        std::to_string(system.size()));
  std::vector<DependencyTree> trees;
  trees.reserve(system.size());
  for (size_t si = 0; si < system.size(); ++si) {
    if (system[si].size() != gold[si].size())
      throw ContractError("attachment_scores: sentence " +
                          std::to_string(si + 1) + " length mismatch");
    for (size_t i = 0; i < system[si].size(); ++i)
      if (system[si][i].form != gold[si][i].form)
        throw ContractError("attachment_scores: sentence " +
                            std::to_string(si + 1) + " token " +
                            std::to_string(i + 1) + " form mismatch ('" +
                            gold[si][i].form + "' vs '" + system[si][i].form +
                            "')");
    trees.push_back(gold_tree(system[si]));
  }
  return attachment_scores(gold, trees, mode);
}

std::string format_report(const EvalReport& r) {
  std::string out;
  out += "UAS: " + pct(r.uas) + "  LAS: " + pct(r.las) + "\n";
  out += "tokens: " + std::to_string(r.total) + " scored: " +
         std::to_string(r.scored) + " excluded: " + std::to_string(r.excluded) +
         "\n";
  return out;
}

std::string report_key_values(const EvalReport& r) {
  std::string out;
  out += "uas=" + pct(r.uas) + "\n";
  out += "las=" + pct(r.las) + "\n";
  out += "total=" + std::to_string(r.total) + "\n";
  out += "scored=" + std::to_string(r.scored) + "\n";
  out += "excluded=" + std::to_string(r.excluded) + "\n";
  out += "correct_head=" + std::to_string(r.correct_head) + "\n";
  out += "correct_labeled=" + std::to_string(r.correct_labeled) + "\n";
  return out;
}

}  // namespace slp
