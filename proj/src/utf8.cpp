#include "slp/utf8.h"

namespace slp {

std::vector<uint32_t> decode_utf8(const std::string& s) {
  std::vector<uint32_t> out;
  size_t i = 0;
  const size_t n = s.size();
  while (i < n) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    size_t len;
    uint32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 >> 5) == 0x6) {
      len = 2;
      cp = b0 & 0x1f;
    } else if ((b0 >> 4) == 0xe) {
      len = 3;
      cp = b0 & 0x0f;
    } else if ((b0 >> 3) == 0x1e) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(b0);  // stray continuation byte
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(b0);
      ++i;
      continue;
    }
    bool ok = true;
    uint32_t acc = cp;
    for (size_t k = 1; k < len; ++k) {
      unsigned char bk = static_cast<unsigned char>(s[i + k]);
      if ((bk >> 6) != 0x2) {
        ok = false;
        break;
      }
      acc = (acc << 6) | (bk & 0x3f);
    }
    if (!ok) {
      out.push_back(b0);
      ++i;
      continue;
    }
    out.push_back(acc);
    i += len;
  }
  return out;
}

}  // namespace slp
