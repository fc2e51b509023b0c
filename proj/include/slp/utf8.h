#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slp {

// Decodes UTF-8 into codepoints. Malformed bytes are passed through as
// their Latin-1 values so every input decodes to something stable.
std::vector<uint32_t> decode_utf8(const std::string& s);

}  // namespace slp
