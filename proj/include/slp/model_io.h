#pragma once

#include <string>

#include "slp/parser.h"

namespace slp {

// Versioned binary model container; byte layout is documented in
// docs/model-format.md. Round trips are bitwise: load(save(m)) parses any
// input identically to m.
void save_model(const ParserModel& m, const TrainConfig& train_echo,
                const std::string& path);

struct LoadedModel {
  ParserModel model;
  TrainConfig train_echo;
};

// Throws ModelIoError on bad magic, version mismatch, truncation, or a
// shape mismatch, naming the offending record.
LoadedModel load_model(const std::string& path);

}  // namespace slp
