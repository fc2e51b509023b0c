#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slp/sentence.h"

namespace slp {

enum class PosColumn { kPostag, kCpostag };

// Reads CoNLL-X: ten tab-separated columns, blank-line sentence boundaries,
// '#' comment lines skipped. Malformed input raises ConllError with the
// line number. Multiword-token rows (ranged ids) are rejected.
std::vector<Sentence> read_conllx(std::istream& in,
                                  PosColumn pos_col = PosColumn::kPostag);

// Opens a file, or stdin for "-".
std::vector<Sentence> read_conllx_file(const std::string& path,
                                       PosColumn pos_col = PosColumn::kPostag);

// Writes CoNLL-X with the predicted heads/labels substituted; every other
// column is emitted verbatim.
void write_conllx(const std::vector<Sentence>& sentences,
                  const std::vector<DependencyTree>& trees, std::ostream& out);

void write_conllx_file(const std::vector<Sentence>& sentences,
                       const std::vector<DependencyTree>& trees,
                       const std::string& path);

}  // namespace slp
