#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>

#include "bits.hpp"
#include "errors.hpp"
#include "hashfam.hpp"
#include "mix.hpp"
#include "oracle.hpp"

namespace cuckoo_prf {

// Answer of the lazily sampled random function with `seed` at `x`.
constexpr std::uint64_t lazy_random_answer(std::uint64_t seed, std::uint64_t x, unsigned range_bits) {
  return mix64(seed ^ mix64(x ^ kMixC1)) & low_mask(range_bits);
}

/// Stand-in for a uniformly random function {0,1}^d -> {0,1}^r. Answers are
/// fixed on first access and memoized; they depend only on (seed, query),
/// so two states with the same seed are the same function.
class LazyRandomOracle final : public Oracle {
public:
  LazyRandomOracle(std::uint64_t seed, unsigned domain_bits, unsigned range_bits)
      : Oracle(domain_bits, range_bits), seed_(seed) {}

  OracleKind kind() const override { return OracleKind::lazy_random; }
  std::uint64_t seed() const { return seed_; }
  std::size_t materialized() const { return memo_.size(); }

protected:
  BitString evaluate(const BitString &x) override {
    auto [it, inserted] = memo_.try_emplace(x.value(), 0);
    if (inserted)
      it->second = lazy_random_answer(seed_, x.value(), range_bits());
    return BitString(it->second, range_bits());
  }

private:
  std::uint64_t seed_;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

inline OracleHandle make_lazy_random(Rng &rng, unsigned domain_bits, unsigned range_bits) {
  return std::make_shared<LazyRandomOracle>(rng.next_u64(), domain_bits, range_bits);
}

// ---------------------------------------------------------------------------
// Length-doubling generators

enum class PrgKind {
  stub_complement, // s -> s || ~s. Test-vector generator only; trivially insecure.
  mix64,           // s -> M(s ^ C1) || M(s ^ C2), halves truncated to n bits.
};

struct PrgSpec {
  PrgKind kind = PrgKind::mix64;
  unsigned seed_bits = 0;

  PrgSpec(PrgKind k, unsigned n) : kind(k), seed_bits(n) {
    if (n < 1 || 2 * n > kMaxBits)
      throw ConfigError("prg: seed length must be in [1, 32] so the output fits 64 bits");
  }
};

struct PrgHalves {
  BitString left;  // G_0(s)
  BitString right; // G_1(s)
};

inline PrgHalves prg_halves(const PrgSpec &spec, const BitString &s) {
  if (s.size() != spec.seed_bits)
    throw UsageError("prg: seed has " + std::to_string(s.size()) + " bits, expected " +
                     std::to_string(spec.seed_bits));
  const unsigned n = spec.seed_bits;
  switch (spec.kind) {
  case PrgKind::stub_complement:
    return {s, s.complement()};
  case PrgKind::mix64:
    return {BitString(mix64(s.value() ^ kMixC1) & low_mask(n), n), BitString(mix64(s.value() ^ kMixC2) & low_mask(n), n)};
  }
  throw ConfigError("prg: unknown kind");
}

inline BitString prg_expand(const PrgSpec &spec, const BitString &s) {
  const auto h = prg_halves(spec, s);
  return concat(h.left, h.right);
}

// ---------------------------------------------------------------------------
// GGM tree

struct GgmKey {
  BitString root_seed; // ℓ bits
  unsigned input_bits; // m
  PrgSpec prg;         // seed_bits = ℓ

  GgmKey(BitString root, unsigned m, PrgSpec g) : root_seed(root), input_bits(m), prg(g) {
    if (root.size() != g.seed_bits)
      throw ConfigError("ggm: root seed length must equal the prg seed length");
    if (m > kMaxBits)
      throw ConfigError("ggm: input length limited to 64 bits");
  }
};

// Called after each tree step with (depth, seed); depth 0 is the root.
using GgmTrace = std::function<void(unsigned, const BitString &)>;

// r_x, consuming x from its leftmost bit: r_{w||b} is half b of G(r_w).
// Makes exactly m generator calls.
inline BitString ggm_eval(const GgmKey &key, const BitString &x, CallCounter *prg_calls = nullptr,
                          const GgmTrace &trace = {}) {
  if (x.size() != key.input_bits)
    throw UsageError("ggm: input has " + std::to_string(x.size()) + " bits, expected " +
                     std::to_string(key.input_bits));
  BitString r = key.root_seed;
  if (trace)
    trace(0, r);
  for (unsigned i = 0; i < x.size(); ++i) {
    const auto halves = prg_halves(key.prg, r);
    if (prg_calls)
      ++prg_calls->calls;
    r = x.at(i) ? halves.right : halves.left;
    if (trace)
      trace(i + 1, r);
  }
  return r;
}

class GgmOracle final : public Oracle {
public:
  GgmOracle(GgmKey key, std::shared_ptr<CallCounter> prg_calls = nullptr)
      : Oracle(key.input_bits, key.prg.seed_bits), key_(std::move(key)), prg_calls_(std::move(prg_calls)) {}

  OracleKind kind() const override { return OracleKind::ggm; }
  const GgmKey &key() const { return key_; }

protected:
  BitString evaluate(const BitString &x) override { return ggm_eval(key_, x, prg_calls_.get()); }

private:
  GgmKey key_;
  std::shared_ptr<CallCounter> prg_calls_;
};

inline GgmKey sample_ggm_key(const PrgSpec &prg, unsigned input_bits, Rng &rng) {
  return GgmKey(BitString(rng.bits(prg.seed_bits), prg.seed_bits), input_bits, prg);
}

// ---------------------------------------------------------------------------
// Hash-then-PRF: f(h(x)). Any collision of h is a collision of the output.

class LevinOracle final : public Oracle {
public:
  LevinOracle(KWiseHashKey h, OracleHandle f)
      : Oracle(h.domain_bits(), f->range_bits()), h_(std::move(h)), f_(std::move(f)) {
    if (h_.range_bits() != f_->domain_bits())
      throw ConfigError("levin: hash range (" + std::to_string(h_.range_bits()) + " bits) must equal PRF domain (" +
                        std::to_string(f_->domain_bits()) + " bits)");
  }

  OracleKind kind() const override { return OracleKind::levin; }
  const KWiseHashKey &hash() const { return h_; }
  const OracleHandle &prf() const { return f_; }

protected:
  BitString evaluate(const BitString &x) override { return (*f_)(h_(x)); }

private:
  KWiseHashKey h_;
  OracleHandle f_;
};

inline BitString levin_eval(const KWiseHashKey &h, Oracle &f, const BitString &x) {
  if (h.range_bits() != f.domain_bits())
    throw ConfigError("levin: hash range must equal PRF domain");
  return f(h(x));
}

// ---------------------------------------------------------------------------
// Samplers for underlying PRFs {0,1}^s -> {0,1}^r.

using PrfSampler = std::function<OracleHandle(unsigned domain_bits, unsigned range_bits, Rng &)>;

inline PrfSampler lazy_random_sampler() {
  return [](unsigned d, unsigned r, Rng &rng) { return make_lazy_random(rng, d, r); };
}

// GGM_{d -> r} over the given generator kind; `prg_calls` (optional)
// accumulates generator calls across every sampled handle.
inline PrfSampler ggm_sampler(PrgKind kind, std::shared_ptr<CallCounter> prg_calls = nullptr) {
  return [kind, prg_calls](unsigned d, unsigned r, Rng &rng) -> OracleHandle {
    return std::make_shared<GgmOracle>(sample_ggm_key(PrgSpec(kind, r), d, rng), prg_calls);
  };
}

// Wraps every sampled handle in a CountingOracle feeding `counter`.
inline PrfSampler counting_sampler(PrfSampler inner, std::shared_ptr<CallCounter> counter,
                                   CountingOracle::Observer observer = {}) {
  return [inner = std::move(inner), counter = std::move(counter), observer = std::move(observer)](
             unsigned d, unsigned r, Rng &rng) -> OracleHandle {
    return std::make_shared<CountingOracle>(inner(d, r, rng), counter, observer);
  };
}

} // namespace cuckoo_prf
