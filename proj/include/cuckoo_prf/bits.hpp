#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace cuckoo_prf {

constexpr unsigned kMaxBits = 64;

constexpr std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

// Length-tagged bit string of at most 64 bits. The value is stored
// right-aligned; bit (length-1) of `value` is the leftmost character of the
// textual form, so "0101" has value 5. "Leftmost" and "most significant" are
// the same bit everywhere in this library.
class BitString {
public:
  constexpr BitString() = default;

  constexpr BitString(std::uint64_t value, unsigned length) : value_(value), length_(length) {
    if (length > kMaxBits)
      throw UsageError("BitString: length " + std::to_string(length) + " exceeds 64");
    if ((value & ~low_mask(length)) != 0)
      throw UsageError("BitString: value does not fit in " + std::to_string(length) + " bits");
  }

  // Parses an MSB-first string of '0'/'1' characters. The empty string is
  // the empty bit string.
  static BitString parse(std::string_view text) {
    if (text.size() > kMaxBits)
      throw UsageError("BitString: literal longer than 64 bits");
    std::uint64_t v = 0;
    for (char c : text) {
      if (c != '0' && c != '1')
        throw UsageError("BitString: invalid character in literal");
      v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return BitString(v, static_cast<unsigned>(text.size()));
  }

  static constexpr BitString zeros(unsigned length) { return BitString(0, length); }

  constexpr std::uint64_t value() const { return value_; }
  constexpr unsigned size() const { return length_; }
  constexpr bool empty() const { return length_ == 0; }

  // Bit i counted from the left, 0-based.
  constexpr bool at(unsigned i) const {
    if (i >= length_)
      throw UsageError("BitString: index out of range");
    return ((value_ >> (length_ - 1 - i)) & 1u) != 0;
  }

  // Keeps the low (rightmost) `length` bits.
  constexpr BitString truncate(unsigned length) const {
    if (length > length_)
      throw UsageError("BitString: cannot truncate to a longer length");
    return BitString(value_ & low_mask(length), length);
  }

  // Pads with leading zeroes up to `length` bits.
  constexpr BitString zero_extend(unsigned length) const {
    if (length < length_)
      throw UsageError("BitString: cannot zero-extend to a shorter length");
    return BitString(value_, length);
  }

  // Zero-extends or truncates, whichever reaches `length`.
  constexpr BitString resize(unsigned length) const {
    return length >= length_ ? zero_extend(length) : truncate(length);
  }

  constexpr BitString complement() const { return BitString(~value_ & low_mask(length_), length_); }

  std::string to_string() const {
    std::string out(length_, '0');
    for (unsigned i = 0; i < length_; ++i)
      if (at(i))
        out[i] = '1';
    return out;
  }

  friend constexpr bool operator==(const BitString &, const BitString &) = default;

private:
  std::uint64_t value_ = 0;
  unsigned length_ = 0;
};

inline BitString operator^(const BitString &a, const BitString &b) {
  if (a.size() != b.size())
    throw UsageError("BitString xor: length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  return BitString(a.value() ^ b.value(), a.size());
}

// a || b, with `a` on the left.
inline BitString concat(const BitString &a, const BitString &b) {
  if (a.size() + b.size() > kMaxBits)
    throw UsageError("BitString concat: result longer than 64 bits");
  const std::uint64_t hi = b.size() >= 64 ? 0 : (a.value() << b.size());
  return BitString(hi | b.value(), a.size() + b.size());
}

inline unsigned popcount(const BitString &b) { return static_cast<unsigned>(__builtin_popcountll(b.value())); }

// Lowercase hex, MSB-first, zero-padded to ceil(width/4) digits.
inline std::string to_hex(std::uint64_t value, unsigned width) {
  static constexpr char digits[] = "0123456789abcdef";
  const unsigned n = (width + 3) / 4;
  std::string out(n, '0');
  for (unsigned i = 0; i < n; ++i)
    out[n - 1 - i] = digits[(value >> (4 * i)) & 0xF];
  return out;
}

} // namespace cuckoo_prf
