#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace scpm {

// Standard CRC-32 (reflected, polynomial 0xEDB88320), same parameters as zlib.
class Crc32 {
 public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint32_t c = state_;
    for (std::size_t i = 0; i < len; ++i) c = table()[(c ^ p[i]) & 0xFF] ^ (c >> 8);
    state_ = c;
  }

  std::uint32_t value() const { return state_ ^ 0xFFFFFFFFu; }

  static std::uint32_t of(std::string_view bytes) {
    Crc32 crc;
    crc.update(bytes.data(), bytes.size());
    return crc.value();
  }

 private:
  static const std::array<std::uint32_t, 256>& table() {
    static const std::array<std::uint32_t, 256> t = [] {
      std::array<std::uint32_t, 256> out{};
      for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        out[i] = c;
      }
      return out;
    }();
    return t;
  }

  std::uint32_t state_ = 0xFFFFFFFFu;
};

}  // namespace scpm
