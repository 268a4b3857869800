#ifndef IRTPART_DIGEST_HPP
#define IRTPART_DIGEST_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "irtpart/common.hpp"
#include "irtpart/prng.hpp"

namespace irtpart {

/// MD5 (RFC 1321), used to verify file checksums published by OpenML.
class Md5 {
 public:
  Md5() { reset(); }

  void reset() {
    state_ = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};
    total_ = 0;
    buffered_ = 0;
  }

  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    total_ += len;
    while (len > 0) {
      const std::size_t take = std::min<std::size_t>(64 - buffered_, len);
      std::memcpy(buffer_.data() + buffered_, p, take);
      buffered_ += take;
      p += take;
      len -= take;
      if (buffered_ == 64) {
        process(buffer_.data());
        buffered_ = 0;
      }
    }
  }

  std::string hex_digest() {
    const std::uint64_t bit_len = total_ * 8;
    unsigned char pad[72] = {0x80};
    const std::size_t pad_len = (buffered_ < 56 ? 56 : 120) - buffered_;
    update(pad, pad_len);
    unsigned char len_le[8];
    for (int i = 0; i < 8; ++i) len_le[i] = (unsigned char)(bit_len >> (8 * i));
    update(len_le, 8);

    std::string out;
    static const char* hexd = "0123456789abcdef";
    for (std::uint32_t word : state_)
      for (int i = 0; i < 4; ++i) {
        const unsigned byte = (word >> (8 * i)) & 0xff;
        out += hexd[byte >> 4];
        out += hexd[byte & 0xf];
      }
    return out;
  }

 private:
  void process(const unsigned char* block) {
    static const std::uint32_t K[64] = {
        0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501,
        0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821,
        0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
        0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, 0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a,
        0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70,
        0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
        0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
        0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391};
    static const int S[64] = {7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
                              5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
                              4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
                              6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21};
    std::uint32_t m[16];
    for (int i = 0; i < 16; ++i)
      m[i] = (std::uint32_t)block[4 * i] | ((std::uint32_t)block[4 * i + 1] << 8) |
             ((std::uint32_t)block[4 * i + 2] << 16) | ((std::uint32_t)block[4 * i + 3] << 24);

    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    for (int i = 0; i < 64; ++i) {
      std::uint32_t f;
      int g;
      if (i < 16) {
        f = (b & c) | (~b & d);
        g = i;
      } else if (i < 32) {
        f = (d & b) | (~d & c);
        g = (5 * i + 1) & 15;
      } else if (i < 48) {
        f = b ^ c ^ d;
        g = (3 * i + 5) & 15;
      } else {
        f = c ^ (b | ~d);
        g = (7 * i) & 15;
      }
      f += a + K[i] + m[g];
      a = d;
      d = c;
      c = b;
      b += (f << S[i]) | (f >> (32 - S[i]));
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
  }

  std::array<std::uint32_t, 4> state_;
  std::array<unsigned char, 64> buffer_;
  std::uint64_t total_ = 0;
  std::size_t buffered_ = 0;
};

inline std::string md5_hex(std::string_view data) {
  Md5 h;
  h.update(data.data(), data.size());
  return h.hex_digest();
}

inline std::string md5_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);
  Md5 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, (std::size_t)in.gcount());
  return h.hex_digest();
}

/// Cheap content fingerprint for the run manifest (not cryptographic).
inline std::string fnv1a64_hex(std::string_view data) {
  const std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  static const char* hexd = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) out[i] = hexd[(h >> (60 - 4 * i)) & 0xf];
  return out;
}

inline std::string fnv1a64_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64_hex(data);
}

}  // namespace irtpart

#endif
