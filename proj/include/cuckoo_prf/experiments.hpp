#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "combine.hpp"
#include "games.hpp"
#include "hashfam.hpp"
#include "prfcore.hpp"
#include "transform.hpp"

// Experiment drivers behind the command-line subcommands. Each validates its
// whole configuration before drawing any randomness.

namespace cuckoo_prf::experiments {

struct Config {
  unsigned n = 16;  // bits, for length-preserving constructions
  unsigned d = 24;
  unsigned s = 12;
  unsigned r = 24;
  unsigned k = 16;
  std::uint64_t q = 128;
  unsigned c = 1;
  unsigned z = 0;
  unsigned t = 4;   // tuple length for uniformity
  unsigned w = 4;   // field width for kwise-verify
  std::uint64_t trials = 2000;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// ---------------------------------------------------------------------------

struct KwiseReport {
  unsigned w = 0, k = 0;
  std::uint64_t keys = 0;
  std::uint64_t input_tuples = 0;
  std::uint64_t expected_count = 0;
  std::uint64_t unequal_tuples = 0;
  bool pass() const { return unequal_tuples == 0; }
};

// Enumerates every key of the degree-(k-1) family over GF(2^w) and checks,
// for every set of k distinct inputs, that each output k-tuple occurs
// equally often.
inline KwiseReport kwise_verify(unsigned w, unsigned k) {
  if (w != 4 || (k != 2 && k != 3))
    throw ConfigError("kwise-verify: exhaustive enumeration is limited to w=4, k in {2,3}; "
                      "larger fields are infeasible to enumerate, use the sampling tests instead");
  KwiseReport rep;
  rep.w = w;
  rep.k = k;
  const std::uint64_t field = std::uint64_t{1} << w;
  rep.keys = std::uint64_t{1} << (w * k);
  const std::uint64_t outcomes = rep.keys; // |F|^k output tuples
  rep.expected_count = rep.keys / outcomes;

  std::vector<KWiseHashKey> keys;
  keys.reserve(rep.keys);
  for (std::uint64_t packed = 0; packed < rep.keys; ++packed) {
    std::vector<std::uint64_t> coeffs(k);
    for (unsigned i = 0; i < k; ++i)
      coeffs[i] = (packed >> (w * i)) & (field - 1);
    keys.emplace_back(std::move(coeffs), w, w);
  }

  std::vector<std::uint64_t> xs(k);
  std::vector<std::uint32_t> counts(outcomes);
  auto check = [&] {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto &key : keys) {
      std::uint64_t packed = 0;
      for (auto x : xs)
        packed = (packed << w) | key.eval_raw(x);
      ++counts[packed];
    }
    ++rep.input_tuples;
    for (auto c : counts)
      if (c != rep.expected_count) {
        ++rep.unequal_tuples;
        break;
      }
  };
  // All k-subsets of the field, in increasing order.
  for (std::uint64_t a = 0; a < field; ++a)
    for (std::uint64_t b = a + 1; b < field; ++b) {
      if (k == 2) {
        xs = {a, b};
        check();
        continue;
      }
      for (std::uint64_t c = b + 1; c < field; ++c) {
        xs = {a, b, c};
        check();
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Samplers for the birthday targets

inline HandleSampler levin_target(unsigned d, unsigned s, unsigned r, unsigned k) {
  return [=](Rng &rng) -> OracleHandle {
    auto h = sample_kwise(k, d, s, rng);
    return std::make_shared<LevinOracle>(std::move(h), make_lazy_random(rng, s, r));
  };
}

inline ExtensionParams extension_params(const Config &cfg) {
  ExtensionParams p;
  p.d = cfg.d;
  p.s = cfg.s;
  p.r = cfg.r;
  p.k = cfg.k;
  p.q = cfg.q;
  p.c = cfg.c;
  p.z = cfg.z;
  return p;
}

inline HandleSampler pp_target(const ExtensionParams &p) {
  return [p](Rng &rng) { return build_pp_domain_extension(p, lazy_random_sampler(), rng); };
}

// ADW targets use pairwise-independent hashing.
inline ExtensionParams adw_params(const Config &cfg) {
  ExtensionParams p = extension_params(cfg);
  p.k = 2;
  return p;
}

inline HandleSampler adw_target(const ExtensionParams &p, AdwVariant v) {
  return [p, v](Rng &rng) { return build_adw_domain_extension(p, v, lazy_random_sampler(), rng); };
}

inline void validate_levin(const Config &cfg) {
  if (cfg.d < 1 || cfg.d > 64 || cfg.s < 1 || cfg.s > 64 || cfg.r < 1 || cfg.r > 64)
    throw ConfigError("constraint violated: widths must be in [1, 64]");
  if (cfg.k < 1)
    throw ConfigError("constraint violated: k >= 1");
}

inline void validate_game(const Config &cfg) {
  if (cfg.trials < 1)
    throw ConfigError("constraint violated: trials >= 1");
  if (cfg.d < 64 && cfg.q > (std::uint64_t{1} << cfg.d))
    throw ConfigError("constraint violated: q <= 2^d distinct queries");
}

// Birthday attack with q queries against levin, pp and (table-backed) adw
// sharing (d, s, r, q). Ideal world: random function d -> r.
inline std::vector<ExperimentRow> birthday(const Config &cfg) {
  validate_levin(cfg);
  validate_game(cfg);
  const ExtensionParams pp = extension_params(cfg);
  validate_pp_params(pp);
  const ExtensionParams adw = adw_params(cfg);
  validate_adw_params(adw, AdwVariant::table_backed);

  const auto dist = birthday_distinguisher(cfg.q, cfg.d);
  const auto ideal = lazy_random_handles(cfg.d, cfg.r);
  std::vector<ExperimentRow> rows;
  rows.push_back({"birthday/levin", 0, cfg.d, cfg.s, cfg.r, cfg.k, cfg.q, 0,
                  run_game(levin_target(cfg.d, cfg.s, cfg.r, cfg.k), ideal, dist, cfg.trials, cfg.seed, cfg.threads)});
  rows.push_back({"birthday/pp", 0, cfg.d, cfg.s, cfg.r, cfg.k, cfg.q, 0,
                  run_game(pp_target(pp), ideal, dist, cfg.trials, cfg.seed, cfg.threads)});
  rows.push_back({"birthday/adw", 0, cfg.d, cfg.s, cfg.r, adw.k, cfg.q,
                  adw_branch_count(AdwVariant::table_backed, cfg.c, cfg.q),
                  run_game(adw_target(adw, AdwVariant::table_backed), ideal, dist, cfg.trials, cfg.seed, cfg.threads)});
  return rows;
}

// ---------------------------------------------------------------------------

struct UniformityReport {
  unsigned d = 0, s = 0, r = 0, k = 0, t = 0;
  std::uint64_t samples = 0, seed = 0;
  UniformityEstimate estimate;
  double margin = 0.005;
  bool pass() const { return estimate.sd_estimate <= estimate.baseline_sd + margin; }
};

// Output t-tuples of PP (random-function backing) on the fixed distinct
// inputs 0..t-1, against the same estimator on uniform tuples.
inline UniformityReport uniformity(const Config &cfg, double margin = 0.005) {
  ExtensionParams p = extension_params(cfg);
  p.q = cfg.t;
  validate_pp_params(p);
  if (cfg.t < 1 || (cfg.d < 64 && cfg.t > (std::uint64_t{1} << cfg.d)))
    throw ConfigError("constraint violated: 1 <= t <= 2^d");
  std::vector<BitString> queries;
  for (unsigned i = 0; i < cfg.t; ++i)
    queries.emplace_back(i, cfg.d);
  if (cfg.r * cfg.t > 16)
    throw ConfigError("uniformity: support 2^(r*t) must be at most 2^16");
  if (cfg.samples < 1000 * (std::uint64_t{1} << (cfg.r * cfg.t)))
    throw ConfigError("uniformity: need at least 1000 samples per support point");

  UniformityReport rep{cfg.d, cfg.s, cfg.r, cfg.k, cfg.t, cfg.samples, cfg.seed, {}, margin};
  rep.estimate = tuple_uniformity_sd(pp_target(p), queries, cfg.samples, cfg.seed);
  return rep;
}

// ---------------------------------------------------------------------------

struct KatVector {
  std::string name;
  std::string root, input, expected, actual;
  bool pass() const { return expected == actual; }
};

// Stub-generator GGM vectors plus the two fixed-point identities.
inline std::vector<KatVector> ggm_kat() {
  const PrgSpec stub(PrgKind::stub_complement, 4);
  const BitString r = BitString::parse("0101");
  std::vector<KatVector> out;
  auto add = [&](std::string name, unsigned m, const char *x, const char *expected) {
    const BitString in = *x ? BitString::parse(x) : BitString();
    out.push_back({std::move(name), r.to_string(), in.to_string(), expected,
                   ggm_eval(GgmKey(r, m, stub), in).to_string()});
  };
  add("empty-input", 0, "", "0101");
  add("all-zero-m2", 2, "00", "0101");
  add("all-zero-m8", 8, "00000000", "0101");
  add("x=10", 2, "10", "1010");
  add("x=11", 2, "11", "0101");
  add("x=0111", 4, "0111", "1010");
  return out;
}

// ---------------------------------------------------------------------------

struct InvolutionReport {
  ExperimentRow adaptive, non_adaptive;
  bool pass() const { return adaptive.result.p_real == 1.0 && non_adaptive.result.p_real == 0.0; }
};

inline InvolutionReport involution(const Config &cfg) {
  if (cfg.n < 1 || cfg.n > 16)
    throw ConfigError("constraint violated: 1 <= n <= 16");
  if (cfg.trials < 1)
    throw ConfigError("constraint violated: trials >= 1");
  InvolutionReport rep;
  rep.adaptive = {"involution/adaptive", cfg.n, cfg.n, 0, cfg.n, 0, 2, 0,
                  involution_game(cfg.n, cfg.trials, cfg.seed, cfg.threads)};
  rep.non_adaptive = {"involution/non-adaptive", cfg.n, cfg.n, 0, cfg.n, 0, 2, 0,
                      involution_collision_game(cfg.n, cfg.trials, cfg.seed, cfg.threads)};
  return rep;
}

// ---------------------------------------------------------------------------

// Adaptive prober: each query is the previous answer XOR fresh random bits;
// accepts iff two answers collide.
inline Distinguisher adaptive_prober(std::size_t q) {
  AdaptiveLogic logic = [q](OracleAccess &o, Rng &rng) {
    const unsigned n = o.domain_bits();
    std::unordered_set<std::uint64_t> asked, answers;
    BitString x(rng.bits(n), n);
    bool collision = false;
    for (std::size_t i = 0; i < q; ++i) {
      while (asked.count(x.value()))
        x = BitString(rng.bits(n), n);
      asked.insert(x.value());
      const BitString y = o.query(x);
      collision = !answers.insert(y.value()).second || collision;
      x = BitString((y.value() ^ rng.bits(n)) & low_mask(n), n);
    }
    return collision;
  };
  return Distinguisher{"adaptive-prober", q, false, std::move(logic)};
}

struct AdaptiveTransformReport {
  ExperimentRow row;
  std::uint64_t underlying_queries = 0;
  std::uint64_t outside_queries = 0;
  bool pass() const { return outside_queries == 0 && row.result.violations == 0; }
};

// The adaptive prober against build_adaptive_from_nonadaptive(n, q, k) with
// random-function backing; every underlying query is checked to be < 4q.
// The violations column counts protocol violations plus locality breaches.
inline AdaptiveTransformReport adaptive_transform(const Config &cfg) {
  validate_adaptive_params(cfg.q, cfg.k, cfg.n);
  if (cfg.trials < 1)
    throw ConfigError("constraint violated: trials >= 1");
  auto counter = std::make_shared<CallCounter>();
  auto outside = std::make_shared<std::uint64_t>(0);
  const std::uint64_t bound = 4 * cfg.q;
  auto observer = [outside, bound](const BitString &x) {
    if (x.value() >= bound)
      ++*outside;
  };
  const PrfSampler f = counting_sampler(lazy_random_sampler(), counter, observer);
  const unsigned n = cfg.n, k = cfg.k;
  const std::uint64_t q = cfg.q;
  HandleSampler real = [=](Rng &rng) { return build_adaptive_from_nonadaptive(q, k, f, n, rng); };
  AdaptiveTransformReport rep;
  // The shared counters make the real sampler single-threaded.
  GameResult res = run_game(real, lazy_random_handles(n, n), adaptive_prober(cfg.q), cfg.trials, cfg.seed, 1);
  rep.underlying_queries = counter->calls;
  rep.outside_queries = *outside;
  res.violations += *outside;
  rep.row = {"adaptive-transform", n, n, n, n, k, q, 0, std::move(res)};
  return rep;
}

// ---------------------------------------------------------------------------

struct CompareRow {
  ExperimentRow game;
  std::uint64_t f_calls_per_query = 0;
  KeyMaterial key;
};

// PP against both ADW variants at the same (d, s, r, q): PRF calls per query
// (instrumented), key size, and the birthday game.
inline std::vector<CompareRow> adw_compare(const Config &cfg) {
  validate_game(cfg);
  const ExtensionParams pp = extension_params(cfg);
  validate_pp_params(pp);
  const ExtensionParams adw = adw_params(cfg);
  validate_adw_params(adw, AdwVariant::prf_backed);
  validate_adw_params(adw, AdwVariant::table_backed);

  const auto dist = birthday_distinguisher(cfg.q, cfg.d);
  const auto ideal = lazy_random_handles(cfg.d, cfg.r);

  struct Target {
    std::string name;
    unsigned k, z;
    std::function<OracleHandle(const PrfSampler &, Rng &)> build;
  };
  const std::vector<Target> targets{
      {"adw-compare/pp", pp.k, 0, [pp](const PrfSampler &f, Rng &rng) { return build_pp_domain_extension(pp, f, rng); }},
      {"adw-compare/adw-prf", adw.k, adw_branch_count(AdwVariant::prf_backed, cfg.c, cfg.q),
       [adw](const PrfSampler &f, Rng &rng) { return build_adw_domain_extension(adw, AdwVariant::prf_backed, f, rng); }},
      {"adw-compare/adw-table", adw.k, adw_branch_count(AdwVariant::table_backed, cfg.c, cfg.q),
       [adw](const PrfSampler &f, Rng &rng) {
         return build_adw_domain_extension(adw, AdwVariant::table_backed, f, rng);
       }},
  };

  std::vector<CompareRow> rows;
  for (const auto &t : targets) {
    CompareRow row;
    Rng rng(derive_seed(cfg.seed, 0, 99));
    auto counter = std::make_shared<CallCounter>();
    OracleHandle h = t.build(counting_sampler(lazy_random_sampler(), counter), rng);
    const BitString x(rng.bits(cfg.d), cfg.d);
    (*h)(x);
    row.f_calls_per_query = counter->calls;
    if (auto *o = dynamic_cast<PPOracle *>(h.get()))
      row.key = key_material(o->key());
    else if (auto *a = dynamic_cast<ADWOracle *>(h.get()))
      row.key = key_material(a->key());
    HandleSampler sampler = [build = t.build](Rng &r) { return build(lazy_random_sampler(), r); };
    row.game = {t.name, 0, cfg.d, cfg.s, cfg.r, t.k, cfg.q, t.z, run_game(sampler, ideal, dist, cfg.trials, cfg.seed, cfg.threads)};
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace cuckoo_prf::experiments
