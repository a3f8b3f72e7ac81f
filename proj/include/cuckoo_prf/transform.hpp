#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "combine.hpp"
#include "errors.hpp"
#include "hashfam.hpp"
#include "mix.hpp"
#include "oracle.hpp"
#include "prfcore.hpp"

// Builders that turn a PRF on a small domain into a PRF on a larger one (or
// a non-adaptively secure PRF into an adaptively secure one) by plugging
// independent copies of it into the PP or ADW combiner. Each builder checks
// its parameter contract before drawing any randomness.

namespace cuckoo_prf {

// ceil(log2 v) for v ≥ 1.
inline unsigned ceil_log2(std::uint64_t v) {
  if (v <= 1)
    return 0;
  return 64 - static_cast<unsigned>(__builtin_clzll(v - 1));
}

struct ExtensionParams {
  unsigned d = 0;      // extended domain bits
  unsigned s = 0;      // domain bits of the underlying PRF
  unsigned r = 0;      // range bits
  unsigned k = 0;      // independence of the hash families
  std::uint64_t q = 1; // query budget
  unsigned c = 1;      // security exponent (ADW variants)
  unsigned z = 0;      // ADW branch count; 0 = derive from c and q
  unsigned u = 0;      // ADW inner-map input bits; 0 = derive
};

enum class AdwVariant { prf_backed, table_backed };

inline std::string_view to_string(AdwVariant v) {
  return v == AdwVariant::prf_backed ? "prf-backed" : "table-backed";
}

// Default independence for PP-based builders: ceil(2 log2 q) + 4.
inline unsigned default_pp_k(std::uint64_t q) { return 2 * ceil_log2(q) + 4; }

namespace detail {

inline void require(bool ok, const std::string &constraint) {
  if (!ok)
    throw ConfigError("constraint violated: " + constraint);
}

inline void check_widths(const ExtensionParams &p) {
  require(p.d >= 1 && p.d <= kMaxBits, "1 <= d <= 64");
  require(p.s >= 1 && p.s <= kMaxBits, "1 <= s <= 64");
  require(p.r >= 1 && p.r <= kMaxBits, "1 <= r <= 64");
}

// q <= 2^(s-2), i.e. the cuckoo tables have at least 4q slots.
inline void check_query_budget(std::uint64_t q, unsigned s, const char *s_name) {
  require(q >= 1, "q >= 1");
  require(s >= 2 && (s - 2 >= 64 || q <= (std::uint64_t{1} << (s - 2))),
          std::string("q <= 2^(") + s_name + "-2)");
}

} // namespace detail

inline void validate_pp_params(const ExtensionParams &p) {
  detail::check_widths(p);
  detail::require(p.d >= p.s, "d >= s");
  detail::require(p.k >= 2, "k >= 2");
  detail::check_query_budget(p.q, p.s, "s");
}

// PP(H, G, F): h1, h2 : d -> s and g : d -> r k-wise independent, f1, f2
// independent PRF samples on s -> r. Two PRF calls per query.
inline OracleHandle build_pp_domain_extension(const ExtensionParams &p, const PrfSampler &f_sampler, Rng &rng) {
  validate_pp_params(p);
  auto h1 = sample_kwise(p.k, p.d, p.s, rng);
  auto h2 = sample_kwise(p.k, p.d, p.s, rng);
  auto g = sample_kwise(p.k, p.d, p.r, rng);
  auto f1 = f_sampler(p.s, p.r, rng);
  auto f2 = f_sampler(p.s, p.r, rng);
  return std::make_shared<PPOracle>(PPKey(std::move(h1), std::move(h2), std::move(g), std::move(f1), std::move(f2)));
}

struct AdaptiveOptions {
  // Evaluate both underlying functions on all of [4q] at build time and
  // answer from those tables; any later out-of-range query fails loudly.
  bool prematerialize = false;
};

inline void validate_adaptive_params(std::uint64_t q, unsigned k, unsigned n) {
  detail::require(n >= 1 && n <= kMaxBits, "1 <= n <= 64");
  detail::require(is_power_of_two(q), "q is a power of two");
  detail::require(k >= 2, "k >= 2");
  detail::require(log2_exact(q) + 2 <= n, "4q <= 2^n");
}

// Non-adaptive -> adaptive on {0,1}^n: PP with h1, h2 restricted to the
// first 4q strings of {0,1}^n, so the underlying functions are only ever
// queried there.
inline OracleHandle build_adaptive_from_nonadaptive(std::uint64_t q, unsigned k, const PrfSampler &f_sampler,
                                                    unsigned n, Rng &rng, AdaptiveOptions opts = {}) {
  validate_adaptive_params(q, k, n);
  const RangeRestriction rr(4 * q, n);
  auto h1 = restrict_to_table(sample_kwise(k, n, n, rng), rr);
  auto h2 = restrict_to_table(sample_kwise(k, n, n, rng), rr);
  auto g = sample_kwise(k, n, n, rng);
  OracleHandle f1 = f_sampler(n, n, rng);
  OracleHandle f2 = f_sampler(n, n, rng);
  if (opts.prematerialize) {
    auto materialize = [&](const OracleHandle &f) -> OracleHandle {
      std::vector<BitString> answers;
      answers.reserve(rr.t);
      for (std::uint64_t x = 0; x < rr.t; ++x)
        answers.push_back((*f)(BitString(x, n)));
      return std::make_shared<TableOracle>(n, n, std::move(answers));
    };
    f1 = materialize(f1);
    f2 = materialize(f2);
  }
  return std::make_shared<PPOracle>(PPKey(std::move(h1), std::move(h2), std::move(g), std::move(f1), std::move(f2)));
}

// Branch count: 2(c+2) when the inner maps are PRF-backed, 2(c+2)·ceil(log2 q)
// when they are 2-entry tables.
inline unsigned adw_branch_count(AdwVariant v, unsigned c, std::uint64_t q) {
  const unsigned base = 2 * (c + 2);
  return v == AdwVariant::prf_backed ? base : base * ceil_log2(q);
}

// Inner-map input bits: log2 q (capped to s, at least 1) for PRF-backed maps,
// 1 for table-backed maps.
inline unsigned adw_inner_bits(AdwVariant v, const ExtensionParams &p) {
  if (p.u != 0)
    return p.u;
  if (v == AdwVariant::table_backed)
    return 1;
  const unsigned lq = p.q > 1 ? log2_exact(p.q) : 1; // floor
  return std::max(1u, std::min(lq, p.s));
}

inline void validate_adw_params(const ExtensionParams &p, AdwVariant v) {
  detail::check_widths(p);
  detail::require(p.d >= p.s, "d >= s");
  detail::require(p.k >= 2, "k >= 2");
  detail::require(p.c >= 1, "c >= 1");
  detail::check_query_budget(p.q, p.s, "s");
  const unsigned z = adw_branch_count(v, p.c, p.q);
  detail::require(p.z == 0 || p.z == z, "z = " + std::string(v == AdwVariant::prf_backed ? "2(c+2)" : "2(c+2)*log q") +
                                            " = " + std::to_string(z));
  const unsigned u = adw_inner_bits(v, p);
  if (v == AdwVariant::prf_backed) {
    detail::require(u <= p.s && p.s <= p.r, "u <= s <= r");
  } else {
    detail::require(u == 1, "|U| = 2 for table-backed inner maps");
  }
}

// ADW_z(H, L, G, F, M, Y). With prf_backed every m and y map is an independent
// sample of the underlying PRF, reached by zero-padding U into S and
// truncating the answer (3z+2 PRF calls per query). With table_backed the m
// and y maps are 2-entry random tables stored in the key (2 PRF calls).
inline OracleHandle build_adw_domain_extension(const ExtensionParams &p, AdwVariant variant,
                                               const PrfSampler &f_sampler, Rng &rng) {
  validate_adw_params(p, variant);
  const unsigned z = adw_branch_count(variant, p.c, p.q);
  const unsigned u = adw_inner_bits(variant, p);

  std::vector<KWiseHashKey> gbar;
  gbar.reserve(z);
  for (unsigned i = 0; i < z; ++i)
    gbar.push_back(sample_kwise(p.k, p.d, u, rng));
  auto h1 = sample_kwise(p.k, p.d, p.s, rng);
  auto h2 = sample_kwise(p.k, p.d, p.s, rng);
  auto ell = sample_kwise(p.k, p.d, p.r, rng);

  auto inner_map = [&](unsigned out_bits) -> InnerMap {
    if (variant == AdwVariant::table_backed)
      return InnerMap(sample_table(std::size_t{1} << u, out_bits, rng));
    return InnerMap(std::make_shared<EmbeddedOracle>(f_sampler(p.s, p.r, rng), u, out_bits));
  };
  std::vector<InnerMap> m1, m2, y;
  for (unsigned i = 0; i < z; ++i)
    m1.push_back(inner_map(p.s));
  for (unsigned i = 0; i < z; ++i)
    m2.push_back(inner_map(p.s));
  for (unsigned i = 0; i < z; ++i)
    y.push_back(inner_map(p.r));

  auto f1 = f_sampler(p.s, p.r, rng);
  auto f2 = f_sampler(p.s, p.r, rng);
  return std::make_shared<ADWOracle>(ADWKey(std::move(gbar), std::move(m1), std::move(m2), std::move(y), std::move(h1),
                                            std::move(h2), std::move(ell), std::move(f1), std::move(f2)));
}

// m = ceil(log2 q) + 2, the smallest GGM depth with q <= 2^(m-2).
inline unsigned prg_prf_default_m(std::uint64_t q) { return ceil_log2(q) + 2; }

struct PrgPrf {
  OracleHandle handle;
  std::shared_ptr<CallCounter> prg_calls; // generator calls across both GGM trees
};

// Length-preserving PRF on {0,1}^n from a length-doubling generator:
// PP(H: n -> m, G: n -> n, GGM_{m -> n}). Each query walks two GGM trees of
// depth m, i.e. 2m generator calls.
inline PrgPrf build_prg_prf(PrgKind prg, unsigned m, unsigned n, unsigned k, std::uint64_t q, Rng &rng) {
  detail::require(n >= 1 && 2 * n <= kMaxBits, "1 <= n <= 32 (generator output must fit 64 bits)");
  detail::require(m >= 1 && m <= n, "1 <= m <= n");
  detail::require(k >= 2, "k >= 2");
  detail::check_query_budget(q, m, "m");
  auto counter = std::make_shared<CallCounter>();
  ExtensionParams p;
  p.d = n;
  p.s = m;
  p.r = n;
  p.k = k;
  p.q = q;
  return {build_pp_domain_extension(p, ggm_sampler(prg, counter), rng), counter};
}

} // namespace cuckoo_prf
