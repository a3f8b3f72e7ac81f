#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "mix.hpp"

namespace cuckoo_prf {

/// Key of a k-wise independent hash function {0,1}^d -> {0,1}^r: a uniformly
/// random polynomial of degree k-1 over GF(2^w), w the smallest supported
/// width ≥ max(d, r). Inputs are zero-extended to w bits, outputs truncated
/// to the low r bits. Truncation keeps the family exactly k-wise independent
/// since every r-bit value has 2^(w-r) preimages.
class KWiseHashKey {
public:
  KWiseHashKey(std::vector<std::uint64_t> coeffs, unsigned domain_bits, unsigned range_bits)
      : coeffs_(std::move(coeffs)), domain_bits_(domain_bits), range_bits_(range_bits) {
    if (coeffs_.empty())
      throw ConfigError("k-wise hash: k must be at least 1");
    if (domain_bits > kMaxBits || range_bits > kMaxBits)
      throw ConfigError("k-wise hash: domain and range are limited to 64 bits");
    width_ = gf::width_for(std::max({domain_bits, range_bits, 1u}));
    for (auto c : coeffs_)
      if ((c & ~low_mask(width_)) != 0)
        throw UsageError("k-wise hash: coefficient does not fit the field width");
  }

  unsigned k() const { return static_cast<unsigned>(coeffs_.size()); }
  unsigned domain_bits() const { return domain_bits_; }
  unsigned range_bits() const { return range_bits_; }
  unsigned width() const { return width_; }
  const std::vector<std::uint64_t> &coeffs() const { return coeffs_; }
  const gf::FieldSpec &field() const { return gf::FieldSpec::standard(width_); }

  // Random bits this key embodies: k·w.
  std::uint64_t key_bits() const { return std::uint64_t{k()} * width_; }

  std::uint64_t eval_raw(std::uint64_t x) const {
    return gf::poly_eval_raw(coeffs_, x, field()) & low_mask(range_bits_);
  }

  BitString operator()(const BitString &x) const {
    if (x.size() != domain_bits_)
      throw UsageError("k-wise hash: input has " + std::to_string(x.size()) + " bits, expected " +
                       std::to_string(domain_bits_));
    return BitString(eval_raw(x.value()), range_bits_);
  }

  // Hex coefficient list, constant term first.
  std::string serialize() const {
    std::string out = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i)
        out += ',';
      out += to_hex(coeffs_[i], width_);
    }
    return out + "]";
  }

  friend bool operator==(const KWiseHashKey &, const KWiseHashKey &) = default;

private:
  std::vector<std::uint64_t> coeffs_;
  unsigned domain_bits_;
  unsigned range_bits_;
  unsigned width_ = 0;
};

// Draws k independent uniform field coefficients, one rng word each.
inline KWiseHashKey sample_kwise(unsigned k, unsigned domain_bits, unsigned range_bits, Rng &rng) {
  if (k < 1)
    throw ConfigError("k-wise hash: k must be at least 1");
  if (domain_bits > kMaxBits || range_bits > kMaxBits)
    throw ConfigError("k-wise hash: domain and range are limited to 64 bits");
  const unsigned w = gf::width_for(std::max({domain_bits, range_bits, 1u}));
  std::vector<std::uint64_t> coeffs(k);
  for (auto &c : coeffs)
    c = rng.bits(w);
  return KWiseHashKey(std::move(coeffs), domain_bits, range_bits);
}

inline BitString eval_kwise(const KWiseHashKey &key, const BitString &x) { return key(x); }

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned log2_exact(std::uint64_t v) { return static_cast<unsigned>(63 - __builtin_clzll(v)); }

// [t] inside {0,1}^n: the lexicographically first t strings, t a power of two.
struct RangeRestriction {
  std::uint64_t t;
  unsigned n;

  RangeRestriction(std::uint64_t t_, unsigned n_) : t(t_), n(n_) {
    if (!is_power_of_two(t))
      throw ConfigError("range restriction: table size " + std::to_string(t) + " is not a power of two");
    if (n > kMaxBits || log2_exact(t) > n)
      throw ConfigError("range restriction: table size exceeds 2^n");
  }

  unsigned index_bits() const { return log2_exact(t); }
};

// x -> element of [t]_{0,1}^n: the low log2(t) bits of the hash,
// zero-extended to n bits. Always numerically < t.
class RestrictedHash {
public:
  RestrictedHash(KWiseHashKey key, RangeRestriction rr) : key_(std::move(key)), rr_(rr) {
    if (key_.range_bits() < rr_.index_bits())
      throw ConfigError("range restriction: hash range narrower than log2(t)");
  }

  BitString operator()(const BitString &x) const {
    const BitString h = key_(x);
    return BitString(h.value() & low_mask(rr_.index_bits()), rr_.n);
  }

  const KWiseHashKey &key() const { return key_; }
  const RangeRestriction &restriction() const { return rr_; }
  unsigned domain_bits() const { return key_.domain_bits(); }
  unsigned range_bits() const { return rr_.n; }

private:
  KWiseHashKey key_;
  RangeRestriction rr_;
};

inline RestrictedHash restrict_to_table(KWiseHashKey key, RangeRestriction rr) {
  return RestrictedHash(std::move(key), rr);
}

// Table of independently uniform entries of a fixed bit length.
class RandomTable {
public:
  RandomTable(std::vector<BitString> entries, unsigned entry_bits)
      : entries_(std::move(entries)), entry_bits_(entry_bits) {
    for (const auto &e : entries_)
      if (e.size() != entry_bits_)
        throw UsageError("random table: entry length mismatch");
  }

  const BitString &lookup(std::size_t i) const {
    if (i >= entries_.size())
      throw UsageError("random table: index " + std::to_string(i) + " out of range (size " +
                       std::to_string(entries_.size()) + ")");
    return entries_[i];
  }

  std::size_t size() const { return entries_.size(); }
  unsigned entry_bits() const { return entry_bits_; }
  const std::vector<BitString> &entries() const { return entries_; }

private:
  std::vector<BitString> entries_;
  unsigned entry_bits_;
};

inline RandomTable sample_table(std::size_t count, unsigned entry_bits, Rng &rng) {
  if (entry_bits > kMaxBits)
    throw ConfigError("random table: entries are limited to 64 bits");
  std::vector<BitString> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    entries.emplace_back(rng.bits(entry_bits), entry_bits);
  return RandomTable(std::move(entries), entry_bits);
}

inline const BitString &table_lookup(const RandomTable &tbl, std::size_t i) { return tbl.lookup(i); }

} // namespace cuckoo_prf
