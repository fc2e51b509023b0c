#pragma once

#include <string>
#include <vector>

namespace slp {

// One treebank token. The raw CoNLL-X columns are kept verbatim so files can
// be written back unchanged apart from the predicted head/deprel.
struct Token {
  std::string form;
  std::string lemma = "_";
  std::string cpostag = "_";
  std::string postag = "_";
  std::string feats = "_";
  int head = -1;  // gold head: 0 = root, 1-based otherwise, -1 = missing
  std::string deprel = "_";
  std::string phead = "_";
  std::string pdeprel = "_";

  std::string pos;  // the tag column selected at read time
};

using Sentence = std::vector<Token>;

// Heads and labels for tokens 1..n, stored 0-based: heads[i] is the head of
// token i+1 (0 denotes the virtual root).
struct DependencyTree {
  std::vector<int> heads;
  std::vector<std::string> labels;

  size_t size() const { return heads.size(); }
};

// Gold tree carried by a sentence; tokens without a gold head yield -1.
DependencyTree gold_tree(const Sentence& s);

bool has_gold_tree(const Sentence& s);

// Exactly one directed path from every token to the root: heads in range
// and no cycles.
bool is_valid_tree(const DependencyTree& t);

}  // namespace slp
