#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"
#include "hashfam.hpp"
#include "oracle.hpp"

// The two cuckoo-hashing combiners. The output group is bit strings under
// XOR throughout.
//
//   pp(x)  = f1(h1(x)) ^ f2(h2(x)) ^ g(x)
//   adw(x) = f1(inner(h1, m1)(x)) ^ f2(inner(h2, m2)(x)) ^ inner(ell, y)(x)
//   inner(h, m)(x) = h(x) ^ m_1(g_1(x)) ^ ... ^ m_z(g_z(x))
//
// with one vector g_1..g_z shared by all three inner sums.

namespace cuckoo_prf {

// Hash feeding one cuckoo slot: either a plain k-wise key or one restricted
// to the first t strings of its range.
class SlotHash {
public:
  SlotHash(KWiseHashKey key) : impl_(std::move(key)) {}
  SlotHash(RestrictedHash key) : impl_(std::move(key)) {}

  BitString operator()(const BitString &x) const {
    return std::visit([&](const auto &h) { return h(x); }, impl_);
  }
  unsigned domain_bits() const {
    return std::visit([](const auto &h) { return h.domain_bits(); }, impl_);
  }
  unsigned range_bits() const {
    return std::visit([](const auto &h) { return h.range_bits(); }, impl_);
  }
  const KWiseHashKey &key() const {
    return std::visit(
        [](const auto &h) -> const KWiseHashKey & {
          if constexpr (std::is_same_v<std::decay_t<decltype(h)>, KWiseHashKey>)
            return h;
          else
            return h.key();
        },
        impl_);
  }

private:
  std::variant<KWiseHashKey, RestrictedHash> impl_;
};

// Per-query cost of evaluating a combiner.
struct UnderlyingCalls {
  std::uint64_t f_calls = 0;       // calls to PRF / random-function handles
  std::uint64_t hash_calls = 0;    // k-wise hash evaluations
  std::uint64_t table_lookups = 0; // random-table lookups

  friend bool operator==(const UnderlyingCalls &, const UnderlyingCalls &) = default;
};

// ---------------------------------------------------------------------------
// PP

struct PPKey {
  SlotHash h1, h2; // d -> s
  KWiseHashKey g;  // d -> r
  OracleHandle f1, f2; // s -> r

  PPKey(SlotHash h1_, SlotHash h2_, KWiseHashKey g_, OracleHandle f1_, OracleHandle f2_)
      : h1(std::move(h1_)), h2(std::move(h2_)), g(std::move(g_)), f1(std::move(f1_)), f2(std::move(f2_)) {
    if (!f1 || !f2)
      throw ConfigError("pp: missing PRF handle");
    if (h1.domain_bits() != h2.domain_bits() || h1.domain_bits() != g.domain_bits())
      throw ConfigError("pp: h1, h2 and g must share one domain");
    if (h1.range_bits() != f1->domain_bits() || h2.range_bits() != f2->domain_bits())
      throw ConfigError("pp: range of h1/h2 must equal the domain of f1/f2");
    if (f1->range_bits() != g.range_bits() || f2->range_bits() != g.range_bits())
      throw ConfigError("pp: f1, f2 and g must share one range");
  }

  unsigned domain_bits() const { return g.domain_bits(); }
  unsigned range_bits() const { return g.range_bits(); }
};

inline BitString pp_eval(const PPKey &key, const BitString &x, UnderlyingCalls *tally = nullptr) {
  if (x.size() != key.domain_bits())
    throw UsageError("pp: input has " + std::to_string(x.size()) + " bits, expected " +
                     std::to_string(key.domain_bits()));
  const BitString y = (*key.f1)(key.h1(x)) ^ (*key.f2)(key.h2(x)) ^ key.g(x);
  if (tally) {
    tally->f_calls += 2;
    tally->hash_calls += 3;
  }
  return y;
}

class PPOracle final : public Oracle {
public:
  explicit PPOracle(PPKey key) : Oracle(key.domain_bits(), key.range_bits()), key_(std::move(key)) {}

  OracleKind kind() const override { return OracleKind::pp; }
  const PPKey &key() const { return key_; }

protected:
  BitString evaluate(const BitString &x) override { return pp_eval(key_, x); }

private:
  PPKey key_;
};

// ---------------------------------------------------------------------------
// ADW

// One of the maps m_i : U -> S or y_i : U -> R, backed by a random table
// with 2^u entries or by a (pseudo)random function handle.
class InnerMap {
public:
  InnerMap(RandomTable table) : impl_(std::move(table)) {}
  InnerMap(OracleHandle handle) : impl_(std::move(handle)) {
    if (!std::get<OracleHandle>(impl_))
      throw ConfigError("adw: null inner map handle");
  }

  bool table_backed() const { return std::holds_alternative<RandomTable>(impl_); }

  unsigned range_bits() const {
    if (table_backed())
      return std::get<RandomTable>(impl_).entry_bits();
    return std::get<OracleHandle>(impl_)->range_bits();
  }

  // Whether the map is defined on every u-bit input.
  bool accepts_domain(unsigned u) const {
    if (table_backed())
      return std::get<RandomTable>(impl_).size() == (std::uint64_t{1} << u);
    return std::get<OracleHandle>(impl_)->domain_bits() == u;
  }

  BitString operator()(const BitString &v, UnderlyingCalls *tally = nullptr) const {
    if (table_backed()) {
      if (tally)
        ++tally->table_lookups;
      return std::get<RandomTable>(impl_).lookup(v.value());
    }
    if (tally)
      ++tally->f_calls;
    return (*std::get<OracleHandle>(impl_))(v);
  }

  const RandomTable *table() const { return std::get_if<RandomTable>(&impl_); }
  const OracleHandle *handle() const { return std::get_if<OracleHandle>(&impl_); }

private:
  std::variant<RandomTable, OracleHandle> impl_;
};

namespace detail {

inline BitString adw_inner_with(const KWiseHashKey &h, const std::vector<BitString> &g_values,
                                const std::vector<InnerMap> &mbar, const BitString &x, UnderlyingCalls *tally) {
  BitString acc = h(x);
  if (tally)
    ++tally->hash_calls;
  for (std::size_t i = 0; i < mbar.size(); ++i)
    acc = acc ^ mbar[i](g_values[i], tally);
  return acc;
}

} // namespace detail

// h(x) ^ m_1(g_1(x)) ^ ... ^ m_z(g_z(x)).
inline BitString adw_inner_eval(const KWiseHashKey &h, const std::vector<KWiseHashKey> &gbar,
                                const std::vector<InnerMap> &mbar, const BitString &x) {
  if (gbar.size() != mbar.size())
    throw ConfigError("adw: g and m vectors differ in length");
  std::vector<BitString> g_values;
  g_values.reserve(gbar.size());
  for (std::size_t i = 0; i < gbar.size(); ++i) {
    if (mbar[i].range_bits() != h.range_bits() || !mbar[i].accepts_domain(gbar[i].range_bits()))
      throw ConfigError("adw: inner map " + std::to_string(i) + " does not match the shape of h and g");
    g_values.push_back(gbar[i](x));
  }
  return detail::adw_inner_with(h, g_values, mbar, x, nullptr);
}

struct ADWKey {
  std::vector<KWiseHashKey> gbar; // D -> U, shared by all three inner sums
  std::vector<InnerMap> m1bar;    // U -> S
  std::vector<InnerMap> m2bar;    // U -> S
  std::vector<InnerMap> ybar;     // U -> R
  KWiseHashKey h1, h2;            // D -> S
  KWiseHashKey ell;               // D -> R
  OracleHandle f1, f2;            // S -> R

  ADWKey(std::vector<KWiseHashKey> gbar_, std::vector<InnerMap> m1bar_, std::vector<InnerMap> m2bar_,
         std::vector<InnerMap> ybar_, KWiseHashKey h1_, KWiseHashKey h2_, KWiseHashKey ell_, OracleHandle f1_,
         OracleHandle f2_)
      : gbar(std::move(gbar_)), m1bar(std::move(m1bar_)), m2bar(std::move(m2bar_)), ybar(std::move(ybar_)),
        h1(std::move(h1_)), h2(std::move(h2_)), ell(std::move(ell_)), f1(std::move(f1_)), f2(std::move(f2_)) {
    validate();
  }

  std::size_t z() const { return gbar.size(); }
  unsigned domain_bits() const { return ell.domain_bits(); }
  unsigned range_bits() const { return ell.range_bits(); }
  unsigned s_bits() const { return h1.range_bits(); }
  unsigned u_bits() const { return gbar.empty() ? 0 : gbar.front().range_bits(); }

private:
  void validate() const {
    if (!f1 || !f2)
      throw ConfigError("adw: missing PRF handle");
    const std::size_t zz = gbar.size();
    if (m1bar.size() != zz || m2bar.size() != zz || ybar.size() != zz)
      throw ConfigError("adw: m1, m2, y and g vectors must all have length z = " + std::to_string(zz));
    const unsigned d = ell.domain_bits(), s = h1.range_bits(), r = ell.range_bits();
    if (h1.domain_bits() != d || h2.domain_bits() != d)
      throw ConfigError("adw: h1, h2 and ell must share one domain");
    if (h2.range_bits() != s)
      throw ConfigError("adw: h1 and h2 must share one range");
    if (f1->domain_bits() != s || f2->domain_bits() != s || f1->range_bits() != r || f2->range_bits() != r)
      throw ConfigError("adw: f1, f2 must map the range of h1/h2 to the range of ell");
    for (std::size_t i = 0; i < zz; ++i) {
      const unsigned u = gbar[i].range_bits();
      if (gbar[i].domain_bits() != d || u != u_bits())
        throw ConfigError("adw: every g_i must map the common domain to the same U");
      if (!m1bar[i].accepts_domain(u) || !m2bar[i].accepts_domain(u) || !ybar[i].accepts_domain(u))
        throw ConfigError("adw: inner map " + std::to_string(i) + " is not defined on U");
      if (m1bar[i].range_bits() != s || m2bar[i].range_bits() != s)
        throw ConfigError("adw: m maps must land in S");
      if (ybar[i].range_bits() != r)
        throw ConfigError("adw: y maps must land in R");
    }
  }
};

inline BitString adw_eval(const ADWKey &key, const BitString &x, UnderlyingCalls *tally = nullptr) {
  if (x.size() != key.domain_bits())
    throw UsageError("adw: input has " + std::to_string(x.size()) + " bits, expected " +
                     std::to_string(key.domain_bits()));
  std::vector<BitString> g_values;
  g_values.reserve(key.z());
  for (const auto &g : key.gbar)
    g_values.push_back(g(x));
  if (tally)
    tally->hash_calls += key.z();
  const BitString s1 = detail::adw_inner_with(key.h1, g_values, key.m1bar, x, tally);
  const BitString s2 = detail::adw_inner_with(key.h2, g_values, key.m2bar, x, tally);
  const BitString y = detail::adw_inner_with(key.ell, g_values, key.ybar, x, tally);
  if (tally)
    tally->f_calls += 2;
  return (*key.f1)(s1) ^ (*key.f2)(s2) ^ y;
}

class ADWOracle final : public Oracle {
public:
  explicit ADWOracle(ADWKey key) : Oracle(key.domain_bits(), key.range_bits()), key_(std::move(key)) {}

  OracleKind kind() const override { return OracleKind::adw; }
  const ADWKey &key() const { return key_; }

protected:
  BitString evaluate(const BitString &x) override { return adw_eval(key_, x); }

private:
  ADWKey key_;
};

// Key size, excluding the keys of the underlying PRF instances.
struct KeyMaterial {
  std::uint64_t hash_bits = 0;  // k-wise hash coefficients
  std::uint64_t table_bits = 0; // random-table entries
  std::uint64_t prf_instances = 0;
};

inline KeyMaterial key_material(const PPKey &key) {
  return {key.h1.key().key_bits() + key.h2.key().key_bits() + key.g.key_bits(), 0, 2};
}

inline KeyMaterial key_material(const ADWKey &key) {
  KeyMaterial km{key.h1.key_bits() + key.h2.key_bits() + key.ell.key_bits(), 0, 2};
  for (const auto &g : key.gbar)
    km.hash_bits += g.key_bits();
  for (const auto *maps : {&key.m1bar, &key.m2bar, &key.ybar})
    for (const auto &m : *maps) {
      if (const auto *t = m.table())
        km.table_bits += t->size() * t->entry_bits();
      else
        ++km.prf_instances;
    }
  return km;
}

// Work done by one evaluation at x: PP makes 2 PRF calls and 3 hash calls;
// ADW makes 2 + (number of function-backed inner maps) PRF calls, z + 3
// hash calls and one table lookup per table-backed inner map.
inline UnderlyingCalls count_underlying_calls(const PPKey &key, const BitString &x) {
  UnderlyingCalls tally;
  pp_eval(key, x, &tally);
  return tally;
}

inline UnderlyingCalls count_underlying_calls(const ADWKey &key, const BitString &x) {
  UnderlyingCalls tally;
  adw_eval(key, x, &tally);
  return tally;
}

} // namespace cuckoo_prf
