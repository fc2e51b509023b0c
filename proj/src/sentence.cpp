#include "slp/sentence.h"

namespace slp {

DependencyTree gold_tree(const Sentence& s) {
  DependencyTree t;
  t.heads.reserve(s.size());
  t.labels.reserve(s.size());
  for (const Token& tok : s) {
    t.heads.push_back(tok.head);
    t.labels.push_back(tok.deprel);
  }
  return t;
}

bool has_gold_tree(const Sentence& s) {
  for (const Token& tok : s)
    if (tok.head < 0) return false;
  return !s.empty();
}

bool is_valid_tree(const DependencyTree& t) {
  const int n = static_cast<int>(t.size());
  if (n == 0) return false;
  for (int h : t.heads)
    if (h < 0 || h > n) return false;
  // Follow head links; every token must reach the root without revisiting.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0) {
      cur = t.heads[cur - 1];
      if (++steps > n) return false;  // cycle
    }
  }
  return true;
}

}  // namespace slp
