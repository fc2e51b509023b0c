#include "slp/conllx.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include "slp/error.h"

namespace slp {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

int parse_int(const std::string& s, const char* what, size_t line_no) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConllError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + s + "'");
  }
}

void finish_sentence(Sentence& cur, std::vector<Sentence>& out,
                     size_t line_no) {
  if (cur.empty()) return;
  const int n = static_cast<int>(cur.size());
  for (const Token& t : cur) {
    if (t.head > n)
      throw ConllError("line " + std::to_string(line_no) +
                       ": head index " + std::to_string(t.head) +
                       " out of range for sentence of length " +
                       std::to_string(n));
  }
  out.push_back(std::move(cur));
  cur.clear();
}

}  // namespace

std::vector<Sentence> read_conllx(std::istream& in, PosColumn pos_col) {
  std::vector<Sentence> out;
  Sentence cur;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(cur, out, line_no);
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 10)
      throw ConllError("line " + std::to_string(line_no) + ": expected 10 " +
                       "tab-separated columns, got " +
                       std::to_string(cols.size()));
    if (cols[0].find('-') != std::string::npos ||
        cols[0].find('.') != std::string::npos)
      throw ConllError("line " + std::to_string(line_no) +
                       ": multiword/empty-node id '" + cols[0] +
                       "' is not supported");
    int id = parse_int(cols[0], "token id", line_no);
    if (id != static_cast<int>(cur.size()) + 1)
      throw ConllError("line " + std::to_string(line_no) +
                       ": non-sequential token id " + std::to_string(id));
    Token t;
    t.form = cols[1];
    t.lemma = cols[2];
    t.cpostag = cols[3];
    t.postag = cols[4];
    t.feats = cols[5];
    t.head = cols[6] == "_" ? -1 : parse_int(cols[6], "head", line_no);
    if (t.head < -1)
      throw ConllError("line " + std::to_string(line_no) +
                       ": negative head index");
    t.deprel = cols[7];
    t.phead = cols[8];
    t.pdeprel = cols[9];
    t.pos = pos_col == PosColumn::kPostag ? t.postag : t.cpostag;
    cur.push_back(std::move(t));
  }
  finish_sentence(cur, out, line_no + 1);
  return out;
}

std::vector<Sentence> read_conllx_file(const std::string& path,
                                       PosColumn pos_col) {
  if (path == "-") return read_conllx(std::cin, pos_col);
  std::ifstream in(path);
  if (!in) throw ConllError("cannot open '" + path + "' for reading");
  return read_conllx(in, pos_col);
}

void write_conllx(const std::vector<Sentence>& sentences,
                  const std::vector<DependencyTree>& trees,
                  std::ostream& out) {
  if (sentences.size() != trees.size())
    throw ContractError("write_conllx: " + std::to_string(sentences.size()) +
                        " sentences but " + std::to_string(trees.size()) +
                        " trees");
  for (size_t si = 0; si < sentences.size(); ++si) {
    const Sentence& s = sentences[si];
    const DependencyTree& t = trees[si];
    if (t.size() != s.size())
      throw ContractError("write_conllx: tree size " +
                          std::to_string(t.size()) +
                          " does not match sentence size " +
                          std::to_string(s.size()));
    for (size_t i = 0; i < s.size(); ++i) {
      const Token& tok = s[i];
      out << (i + 1) << '\t' << tok.form << '\t' << tok.lemma << '\t'
          << tok.cpostag << '\t' << tok.postag << '\t' << tok.feats << '\t'
          << t.heads[i] << '\t' << t.labels[i] << '\t' << tok.phead << '\t'
          << tok.pdeprel << '\n';
    }
    out << '\n';
  }
}

void write_conllx_file(const std::vector<Sentence>& sentences,
                       const std::vector<DependencyTree>& trees,
                       const std::string& path) {
  if (path == "-") {
    write_conllx(sentences, trees, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConllError("cannot open '" + path + "' for writing");
  write_conllx(sentences, trees, out);
}

}  // namespace slp
