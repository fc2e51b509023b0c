#include "slp/model_io.h"

#include <cstring>
#include <fstream>

#include "slp/error.h"

namespace slp {

namespace {

constexpr char kMagic[8] = {'S', 'L', 'P', 'M', 'O', 'D', 'E', 'L'};
constexpr uint32_t kVersion = 1;

// All integers little-endian fixed width; doubles as IEEE-754 bit patterns.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* p, size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
    bytes(b, 4);
  }
  void u64(uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    bytes(b, 8);
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path)
      : in_(in), path_(std::move(path)) {}

  void bytes(void* p, size_t n, const char* record) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n)
      throw ModelIoError("'" + path_ + "': unexpected end of file reading " +
                         record);
  }
  uint8_t u8(const char* record) {
    uint8_t v;
    bytes(&v, 1, record);
    return v;
  }
  uint32_t u32(const char* record) {
    unsigned char b[4];
    bytes(b, 4, record);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
  }
  uint64_t u64(const char* record) {
    unsigned char b[8];
    bytes(b, 8, record);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64(const char* record) {
    uint64_t bits = u64(record);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str(const char* record) {
    uint32_t n = u32(record);
    std::string s(n, '\0');
    if (n) bytes(s.data(), n, record);
    return s;
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

void save_model(const ParserModel& m, const TrainConfig& cfg,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot open '" + path + "' for writing");
  Writer w(out);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);

  w.u8(m.rep_cfg.mode == RepresentationConfig::Mode::kLookup ? 0 : 1);
  w.u8(m.rep_cfg.use_pos ? 1 : 0);
  w.u64(m.rep_cfg.word_dim);
  w.u64(m.rep_cfg.char_emb_dim);
  w.u64(m.rep_cfg.char_rep_dim);
  w.u64(m.rep_cfg.pos_dim);
  w.u64(m.rep_cfg.output_dim);

  w.u64(m.net.hidden_dim);
  w.u64(m.net.layers);
  w.u64(m.net.action_dim);
  w.u64(m.net.state_dim);
  w.u8(m.net.full_peepholes ? 1 : 0);
  w.u64(m.init_seed);

  w.u32(cfg.max_epochs);
  w.u32(cfg.patience);
  w.u32(cfg.dev_eval_every);
  w.u64(cfg.seed);
  w.f64(cfg.eta0);
  w.f64(cfg.decay);
  w.f64(cfg.unk_prob);
  w.u8(cfg.unk_replace ? 1 : 0);
  w.u8(cfg.dev_punct == PunctMode::kInclude ? 0 : 1);

  const Vocabulary& v = m.vocab;
  w.u64(v.num_words());
  for (size_t i = 0; i < v.num_words(); ++i) {
    w.str(v.word(static_cast<uint32_t>(i)));
    w.u64(v.word_frequencies()[i]);
  }
  w.u64(v.num_chars());
  for (uint32_t cp : v.chars()) w.u32(cp);
  w.u64(v.num_pos());
  for (const std::string& p : v.pos_tags()) w.str(p);
  w.u64(v.num_relations());
  for (const std::string& r : v.relations()) w.str(r);

  w.u64(m.params.all().size());
  for (const Parameter* p : m.params.all()) {
    w.str(p->name);
    w.u32(static_cast<uint32_t>(p->value.rank()));
    for (size_t e : p->value.shape) w.u64(e);
    for (double x : p->value.v) w.f64(x);
  }
  if (!out) throw ModelIoError("error writing '" + path + "'");
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open '" + path + "' for reading");
  Reader r(in, path);

  char magic[8];
  r.bytes(magic, sizeof magic, "magic");
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ModelIoError("'" + path + "': not a parser model file (bad magic)");
  uint32_t version = r.u32("version");
  if (version != kVersion)
    throw ModelIoError("'" + path + "': unsupported model format version " +
                       std::to_string(version));

  RepresentationConfig rep;
  rep.mode = r.u8("rep.mode") == 0 ? RepresentationConfig::Mode::kLookup
                                   : RepresentationConfig::Mode::kChars;
  rep.use_pos = r.u8("rep.use_pos") != 0;
  rep.word_dim = r.u64("rep.word_dim");
  rep.char_emb_dim = r.u64("rep.char_emb_dim");
  rep.char_rep_dim = r.u64("rep.char_rep_dim");
  rep.pos_dim = r.u64("rep.pos_dim");
  rep.output_dim = r.u64("rep.output_dim");

  NetworkConfig net;
  net.hidden_dim = r.u64("net.hidden_dim");
  net.layers = r.u64("net.layers");
  net.action_dim = r.u64("net.action_dim");
  net.state_dim = r.u64("net.state_dim");
  net.full_peepholes = r.u8("net.full_peepholes") != 0;
  uint64_t init_seed = r.u64("init_seed");

  TrainConfig cfg;
  cfg.max_epochs = r.u32("train.max_epochs");
  cfg.patience = r.u32("train.patience");
  cfg.dev_eval_every = r.u32("train.dev_eval_every");
  cfg.seed = r.u64("train.seed");
  cfg.eta0 = r.f64("train.eta0");
  cfg.decay = r.f64("train.decay");
  cfg.unk_prob = r.f64("train.unk_prob");
  cfg.unk_replace = r.u8("train.unk_replace") != 0;
  cfg.dev_punct =
      r.u8("train.dev_punct") == 0 ? PunctMode::kInclude : PunctMode::kExclude;

  uint64_t n_words = r.u64("vocab.word_count");
  std::vector<std::string> words;
  std::vector<uint64_t> freqs;
  for (uint64_t i = 0; i < n_words; ++i) {
    words.push_back(r.str("vocab.word"));
    freqs.push_back(r.u64("vocab.word_freq"));
  }
  uint64_t n_chars = r.u64("vocab.char_count");
  std::vector<uint32_t> chars;
  for (uint64_t i = 0; i < n_chars; ++i) chars.push_back(r.u32("vocab.char"));
  uint64_t n_pos = r.u64("vocab.pos_count");
  std::vector<std::string> pos;
  for (uint64_t i = 0; i < n_pos; ++i) pos.push_back(r.str("vocab.pos"));
  uint64_t n_rel = r.u64("vocab.relation_count");
  std::vector<std::string> rels;
  for (uint64_t i = 0; i < n_rel; ++i) rels.push_back(r.str("vocab.relation"));

  Vocabulary vocab = Vocabulary::from_tables(words, freqs, chars, pos, rels);
  LoadedModel loaded{ParserModel::build(std::move(vocab), rep, net, init_seed),
                     cfg};
  ParserModel& m = loaded.model;

  uint64_t n_params = r.u64("param_count");
  if (n_params != m.params.all().size())
    throw ModelIoError("'" + path + "': file has " + std::to_string(n_params) +
                       " parameters, model expects " +
                       std::to_string(m.params.all().size()));
  for (uint64_t i = 0; i < n_params; ++i) {
    std::string name = r.str("param.name");
    Parameter* p = m.params.find(name);
    if (p == nullptr)
      throw ModelIoError("'" + path + "': unknown parameter record '" + name +
                         "'");
    uint32_t rank = r.u32("param.rank");
    std::vector<size_t> shape;
    for (uint32_t d = 0; d < rank; ++d)
      shape.push_back(static_cast<size_t>(r.u64("param.extent")));
    if (shape != p->value.shape)
      throw ModelIoError("'" + path + "': parameter '" + name +
                         "' has stored shape incompatible with expected " +
                         p->value.shape_str());
    for (double& x : p->value.v) x = r.f64("param.values");
  }
  return loaded;
}

}  // namespace slp
