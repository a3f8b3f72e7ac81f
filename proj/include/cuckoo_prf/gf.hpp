#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "bits.hpp"
#include "errors.hpp"

// Arithmetic in GF(2^w) for w in {4, 8, 16, 32, 64}.

namespace cuckoo_prf::gf {

inline bool is_supported_width(unsigned w) { return w == 4 || w == 8 || w == 16 || w == 32 || w == 64; }

// Smallest supported width holding `bits` bits.
inline unsigned width_for(unsigned bits) {
  for (unsigned w : {4u, 8u, 16u, 32u, 64u})
    if (bits <= w)
      return w;
  throw ConfigError("no supported field width holds " + std::to_string(bits) + " bits");
}

namespace detail {

// Carryless product of two polynomials of degree < 32 (fits in 64 bits).
inline std::uint64_t clmul32(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b != 0) {
    r ^= a * (b & 1u);
    a <<= 1;
    b >>= 1;
  }
  return r;
}

// Full 128-bit carryless product of two 64-bit polynomials.
inline unsigned __int128 clmul64(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = 0;
  unsigned __int128 aa = a;
  while (b != 0) {
    if (b & 1u)
      r ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  return r;
}

inline int degree(std::uint64_t p) { return p == 0 ? -1 : 63 - __builtin_clzll(p); }

// Remainder of a modulo b over GF(2)[x]; b != 0.
inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = degree(b);
  for (int da = degree(a); da >= db; da = degree(a))
    a ^= b << (da - db);
  return a;
}

} // namespace detail

// Width plus irreducible reduction polynomial. For w < 64 the polynomial is
// stored in full, including the x^w bit. For w = 64 the x^64 term is implicit
// and `reduction_poly` holds only the low part.
class FieldSpec {
public:
  FieldSpec(unsigned width, std::uint64_t reduction_poly) : width_(width), poly_(reduction_poly) {
    if (!is_supported_width(width))
      throw ConfigError("unsupported field width " + std::to_string(width));
    if (width < 64 && ((poly_ >> width) != 1))
      throw ConfigError("reduction polynomial must have degree exactly " + std::to_string(width));
    if (width <= 16 && !is_irreducible(poly_))
      throw ConfigError("reduction polynomial is reducible");
  }

  // The fixed polynomial for each supported width.
  static const FieldSpec &standard(unsigned width) {
    static const FieldSpec f4(4, 0x13), f8(8, 0x11B), f16(16, 0x1002B), f32(32, 0x10000008Dull), f64(64, 0x1B);
    switch (width) {
    case 4: return f4;
    case 8: return f8;
    case 16: return f16;
    case 32: return f32;
    case 64: return f64;
    default: throw ConfigError("unsupported field width " + std::to_string(width));
    }
  }

  unsigned width() const { return width_; }
  std::uint64_t reduction_poly() const { return poly_; }
  std::uint64_t mask() const { return low_mask(width_); }

  // Exhaustive trial division by every polynomial of degree 1..deg/2.
  static bool is_irreducible(std::uint64_t p) {
    const int d = detail::degree(p);
    if (d < 1)
      return false;
    for (std::uint64_t q = 2; detail::degree(q) <= d / 2; ++q)
      if (detail::poly_mod(p, q) == 0)
        return false;
    return true;
  }

  // Raw product of two reduced values.
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (width_ <= 32) {
      std::uint64_t p = detail::clmul32(a, b);
      for (int i = 2 * static_cast<int>(width_) - 2; i >= static_cast<int>(width_); --i)
        if ((p >> i) & 1u)
          p ^= poly_ << (i - static_cast<int>(width_));
      return p;
    }
    // Fold the high 64 bits back twice; the low part has degree ≤ 4 so two
    // folds always suffice.
    unsigned __int128 p = detail::clmul64(a, b);
    for (int fold = 0; fold < 2; ++fold) {
      const auto hi = static_cast<std::uint64_t>(p >> 64);
      p = static_cast<std::uint64_t>(p) ^ detail::clmul64(hi, poly_);
    }
    return static_cast<std::uint64_t>(p);
  }

  friend bool operator==(const FieldSpec &a, const FieldSpec &b) {
    return a.width_ == b.width_ && a.poly_ == b.poly_;
  }

private:
  unsigned width_;
  std::uint64_t poly_;
};

// An element of GF(2^width).
class FieldElem {
public:
  FieldElem(std::uint64_t value, unsigned width) : value_(value), width_(width) {
    if (!is_supported_width(width))
      throw ConfigError("unsupported field width " + std::to_string(width));
    if ((value & ~low_mask(width)) != 0)
      throw UsageError("field element out of range for width " + std::to_string(width));
  }

  std::uint64_t value() const { return value_; }
  unsigned width() const { return width_; }
  std::string hex() const { return to_hex(value_, width_); }

  friend bool operator==(const FieldElem &, const FieldElem &) = default;

private:
  std::uint64_t value_;
  unsigned width_;
};

inline FieldElem add(const FieldElem &a, const FieldElem &b) {
  if (a.width() != b.width())
    throw UsageError("gf add: width mismatch");
  return FieldElem(a.value() ^ b.value(), a.width());
}

inline FieldElem mul(const FieldElem &a, const FieldElem &b, const FieldSpec &spec) {
  if (a.width() != b.width() || a.width() != spec.width())
    throw UsageError("gf mul: width mismatch");
  return FieldElem(spec.mul(a.value(), b.value()), spec.width());
}

inline FieldElem mul(const FieldElem &a, const FieldElem &b) { return mul(a, b, FieldSpec::standard(a.width())); }

// Horner evaluation on raw coefficient values; coeffs[0] is the constant term.
inline std::uint64_t poly_eval_raw(std::span<const std::uint64_t> coeffs, std::uint64_t x, const FieldSpec &spec) {
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = spec.mul(acc, x) ^ *it;
  return acc;
}

inline FieldElem poly_eval(std::span<const FieldElem> coeffs, const FieldElem &x, const FieldSpec &spec) {
  if (coeffs.empty())
    throw UsageError("gf poly_eval: empty coefficient list");
  if (x.width() != spec.width())
    throw UsageError("gf poly_eval: width mismatch");
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    if (it->width() != spec.width())
      throw UsageError("gf poly_eval: width mismatch");
    acc = spec.mul(acc, x.value()) ^ it->value();
  }
  return FieldElem(acc, spec.width());
}

} // namespace cuckoo_prf::gf
