#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "compgap/errors.hpp"

namespace compgap {

/// Fixed-length bit vector packed into 64-bit words.
///
/// Bit i lives in word i/64 at position i%64. Bits past size() in the last
/// word are always zero, so word-wise comparison and popcount are exact.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  /// Parses a string of '0'/'1' characters; character i becomes bit i.
  static BitString from_string(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') {
        out.set(i, true);
      } else if (text[i] != '0') {
        throw FormatError("bit string may only contain '0' and '1'");
      }
    }
    return out;
  }

  /// Low `len` bits of `value`, bit i = (value >> i) & 1.
  static BitString from_uint(std::uint64_t value, std::size_t len) {
    if (len > 64) throw LengthError("from_uint supports at most 64 bits");
    BitString out(len);
    if (len > 0) out.words_[0] = len == 64 ? value : value & ((std::uint64_t{1} << len) - 1);
    return out;
  }

  /// Hex form: byte j holds bits [8j, 8j+8), least significant bit first.
  static BitString from_hex(std::string_view hex, std::size_t len) {
    if (hex.size() != 2 * ((len + 7) / 8)) throw FormatError("hex length does not match bit length");
    BitString out(len);
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw FormatError("invalid hex digit");
    };
    for (std::size_t j = 0; j < hex.size() / 2; ++j) {
      unsigned byte = nibble(hex[2 * j]) << 4 | nibble(hex[2 * j + 1]);
      for (std::size_t b = 0; b < 8; ++b) {
        std::size_t i = 8 * j + b;
        if ((byte >> b & 1U) == 0) continue;
        if (i >= len) throw FormatError("hex has bits set beyond length");
        out.set(i, true);
      }
    }
    return out;
  }

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::uint64_t to_uint() const {
    if (len_ > 64) throw LengthError("to_uint supports at most 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  /// Reads up to 64 bits starting at `offset` as an integer (bit offset -> bit 0).
  std::uint64_t read_bits(std::size_t offset, std::size_t count) const {
    if (count == 0) return 0;
    std::size_t w = offset >> 6;
    std::size_t s = offset & 63;
    std::uint64_t v = words_[w] >> s;
    if (s != 0 && s + count > 64) v |= words_[w + 1] << (64 - s);
    return count == 64 ? v : v & ((std::uint64_t{1} << count) - 1);
  }

  /// Writes the low `count` bits of `value` starting at `offset`.
  void write_bits(std::size_t offset, std::size_t count, std::uint64_t value) {
    if (count == 0) return;
    if (count < 64) value &= (std::uint64_t{1} << count) - 1;
    std::size_t w = offset >> 6;
    std::size_t s = offset & 63;
    std::uint64_t mask = count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
    words_[w] = (words_[w] & ~(mask << s)) | (value << s);
    if (s != 0 && s + count > 64) {
      std::size_t hi = s + count - 64;
      std::uint64_t hmask = (std::uint64_t{1} << hi) - 1;
      words_[w + 1] = (words_[w + 1] & ~hmask) | (value >> (64 - s));
    }
  }

  BitString slice(std::size_t offset, std::size_t len) const {
    if (offset + len > len_) throw LengthError("slice out of range");
    BitString out(len);
    for (std::size_t i = 0; i < len; i += 64) {
      std::size_t c = std::min<std::size_t>(64, len - i);
      out.write_bits(i, c, read_bits(offset + i, c));
    }
    return out;
  }

  /// Overwrites bits [offset, offset + src.size()) with `src`.
  void assign(std::size_t offset, const BitString& src) {
    if (offset + src.size() > len_) throw LengthError("assign out of range");
    if ((offset & 63) == 0) {
      std::size_t full = src.size() / 64;
      for (std::size_t j = 0; j < full; ++j) words_[(offset >> 6) + j] = src.words_[j];
      std::size_t rest = src.size() - 64 * full;
      if (rest > 0) write_bits(offset + 64 * full, rest, src.words_[full]);
      return;
    }
    for (std::size_t i = 0; i < src.size(); i += 64) {
      std::size_t c = std::min<std::size_t>(64, src.size() - i);
      write_bits(offset + i, c, src.read_bits(i, c));
    }
  }

  /// True when bits [offset, offset + other.size()) equal `other`.
  bool matches_at(std::size_t offset, const BitString& other) const {
    if (offset + other.size() > len_) return false;
    for (std::size_t i = 0; i < other.size(); i += 64) {
      std::size_t c = std::min<std::size_t>(64, other.size() - i);
      if (read_bits(offset + i, c) != other.read_bits(i, c)) return false;
    }
    return true;
  }

  std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    std::size_t bytes = (len_ + 7) / 8;
    s.reserve(2 * bytes);
    for (std::size_t j = 0; j < bytes; ++j) {
      auto byte = static_cast<unsigned>((words_[j / 8] >> (8 * (j % 8))) & 0xFFU);
      s.push_back(kDigits[byte >> 4]);
      s.push_back(kDigits[byte & 0xFU]);
    }
    return s;
  }

  BitString& operator^=(const BitString& other) {
    if (other.len_ != len_) throw LengthError("xor of bit strings with different lengths");
    for (std::size_t j = 0; j < words_.size(); ++j) words_[j] ^= other.words_[j];
    return *this;
  }

  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of positions where `a` and `b` differ. Throws LengthError when
/// the lengths disagree.
inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw LengthError("hamming distance of bit strings with different lengths");
  std::size_t n = 0;
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t j = 0; j < wa.size(); ++j) n += static_cast<std::size_t>(std::popcount(wa[j] ^ wb[j]));
  return n;
}

inline BitString concat(std::initializer_list<const BitString*> parts) {
  std::size_t total = 0;
  for (const auto* p : parts) total += p->size();
  BitString out(total);
  std::size_t offset = 0;
  for (const auto* p : parts) {
    out.assign(offset, *p);
    offset += p->size();
  }
  return out;
}

}  // namespace compgap
