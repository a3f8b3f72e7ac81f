#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"
#include "mix.hpp"
#include "oracle.hpp"
#include "prfcore.hpp"

// Distinguisher games. A game runs `trials` independent trials in each of
// two worlds (real: handle from the family under test; ideal: a random
// function), counts how often the distinguisher accepts, and reports the
// advantage |p_real - p_ideal| with its binomial standard error.

namespace cuckoo_prf {

struct Transcript {
  std::vector<std::pair<BitString, BitString>> entries;
  bool verdict = false;
};

// The only way a distinguisher reaches its oracle. Enforces the query
// budget, the domain, and (unless allowed) distinct queries; records the
// transcript.
class OracleAccess {
public:
  OracleAccess(Oracle &oracle, std::size_t budget, bool allow_repeats = false)
      : oracle_(oracle), budget_(budget), allow_repeats_(allow_repeats) {}

  BitString query(const BitString &x) {
    if (transcript_.entries.size() >= budget_)
      throw ProtocolViolation("query budget of " + std::to_string(budget_) + " exceeded");
    if (x.size() != oracle_.domain_bits())
      throw ProtocolViolation("query of " + std::to_string(x.size()) + " bits outside the " +
                              std::to_string(oracle_.domain_bits()) + "-bit domain");
    if (!allow_repeats_ && !seen_.insert(x.value()).second)
      throw ProtocolViolation("repeated query " + x.to_string());
    BitString y = oracle_(x);
    transcript_.entries.emplace_back(x, y);
    return y;
  }

  unsigned domain_bits() const { return oracle_.domain_bits(); }
  unsigned range_bits() const { return oracle_.range_bits(); }
  std::size_t budget() const { return budget_; }
  std::size_t queries_made() const { return transcript_.entries.size(); }
  const Transcript &transcript() const { return transcript_; }

private:
  Oracle &oracle_;
  std::size_t budget_;
  bool allow_repeats_;
  std::unordered_set<std::uint64_t> seen_;
  Transcript transcript_;
};

// Chooses each query after seeing the previous answers; returns the verdict.
using AdaptiveLogic = std::function<bool(OracleAccess &, Rng &)>;

// Commits to its whole query list before any oracle access; the verdict is
// a function of the committed queries and their answers only.
struct NonAdaptiveLogic {
  std::function<std::vector<BitString>(Rng &)> queries;
  std::function<bool(std::span<const BitString> queries, std::span<const BitString> answers)> decide;
};

struct Distinguisher {
  std::string name;
  std::size_t budget = 0;
  bool allow_repeats = false;
  std::variant<AdaptiveLogic, NonAdaptiveLogic> logic;

  bool adaptive() const { return std::holds_alternative<AdaptiveLogic>(logic); }
};

struct GameResult {
  double p_real = 0;
  double p_ideal = 0;
  double advantage = 0;
  double stderr_ = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t violations = 0;
  // Per trial: 1 accept, 0 reject, -1 aborted by a protocol violation.
  std::vector<std::int8_t> verdicts_real;
  std::vector<std::int8_t> verdicts_ideal;

  friend bool operator==(const GameResult &, const GameResult &) = default;
};

using HandleSampler = std::function<OracleHandle(Rng &)>;

namespace detail {

inline bool play(const Distinguisher &dist, Oracle &oracle, Rng &rng) {
  OracleAccess access(oracle, dist.budget, dist.allow_repeats);
  if (const auto *adaptive = std::get_if<AdaptiveLogic>(&dist.logic))
    return (*adaptive)(access, rng);
  const auto &na = std::get<NonAdaptiveLogic>(dist.logic);
  const std::vector<BitString> qs = na.queries(rng);
  if (qs.size() > dist.budget)
    throw ProtocolViolation("committed " + std::to_string(qs.size()) + " queries, budget " +
                            std::to_string(dist.budget));
  std::vector<BitString> answers;
  answers.reserve(qs.size());
  for (const auto &x : qs)
    answers.push_back(access.query(x));
  return na.decide(qs, answers);
}

inline void tally(GameResult &res) {
  auto freq = [&](const std::vector<std::int8_t> &v, double &p) {
    std::uint64_t done = 0, acc = 0;
    for (auto x : v) {
      if (x < 0) {
        ++res.violations;
        continue;
      }
      ++done;
      acc += static_cast<std::uint64_t>(x);
    }
    p = done ? static_cast<double>(acc) / static_cast<double>(done) : 0.0;
    return done;
  };
  const auto n_real = freq(res.verdicts_real, res.p_real);
  const auto n_ideal = freq(res.verdicts_ideal, res.p_ideal);
  res.advantage = std::fabs(res.p_real - res.p_ideal);
  double var = 0;
  if (n_real)
    var += res.p_real * (1 - res.p_real) / static_cast<double>(n_real);
  if (n_ideal)
    var += res.p_ideal * (1 - res.p_ideal) / static_cast<double>(n_ideal);
  res.stderr_ = std::sqrt(var);
}

// Runs body(trial) for trial in [0, trials), split over `threads` workers.
template <typename Body> void for_trials(std::uint64_t trials, unsigned threads, Body &&body) {
  if (threads <= 1 || trials < 2) {
    for (std::uint64_t t = 0; t < trials; ++t)
      body(t);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t t = w; t < trials; t += threads)
        body(t);
    });
  for (auto &th : pool)
    th.join();
}

} // namespace detail

// Streams of a trial: the handle of world w is sampled from
// derive_seed(seed, trial, w) and the distinguisher's coins come from
// derive_seed(seed, trial, 2 + w). Worlds use independent trial sets.
//
// With threads > 1 the samplers and the distinguisher are called
// concurrently (on distinct trials) and must not share mutable state.
inline GameResult run_game(const HandleSampler &real_sampler, const HandleSampler &ideal_sampler,
                           const Distinguisher &dist, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads = 1) {
  if (trials < 1)
    throw ConfigError("game: trials must be at least 1");
  GameResult res;
  res.trials = trials;
  res.seed = seed;
  res.verdicts_real.assign(trials, 0);
  res.verdicts_ideal.assign(trials, 0);
  detail::for_trials(trials, threads, [&](std::uint64_t t) {
    for (unsigned world = 0; world < 2; ++world) {
      Rng key_rng(derive_seed(seed, t, world));
      Rng coins(derive_seed(seed, t, 2 + world));
      auto &slot = world == 0 ? res.verdicts_real[t] : res.verdicts_ideal[t];
      OracleHandle h = (world == 0 ? real_sampler : ideal_sampler)(key_rng);
      try {
        slot = detail::play(dist, *h, coins) ? 1 : 0;
      } catch (const ProtocolViolation &) {
        slot = -1;
      }
    }
  });
  detail::tally(res);
  return res;
}

inline HandleSampler lazy_random_handles(unsigned domain_bits, unsigned range_bits) {
  return [=](Rng &rng) { return make_lazy_random(rng, domain_bits, range_bits); };
}

// ---------------------------------------------------------------------------
// Canonical distinguishers

namespace detail {

inline bool any_collision(std::span<const BitString> answers) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(answers.size() * 2);
  for (const auto &a : answers)
    if (!seen.insert(a.value()).second)
      return true;
  return false;
}

// q distinct uniformly random points of {0,1}^bits.
inline std::vector<BitString> distinct_points(std::size_t q, unsigned bits, Rng &rng) {
  std::vector<BitString> out;
  out.reserve(q);
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < q) {
    const std::uint64_t v = rng.bits(bits);
    if (seen.insert(v).second)
      out.emplace_back(v, bits);
  }
  return out;
}

} // namespace detail

// Non-adaptive birthday attack: q distinct random inputs, accept iff two
// answers collide. Against f(h(x)) with h into s bits this succeeds with
// probability about 1 - exp(-q(q-1)/2^(s+1)).
inline Distinguisher birthday_distinguisher(std::size_t q, unsigned domain_bits) {
  if (q < 1)
    throw ConfigError("birthday: q must be at least 1");
  if (domain_bits < 64 && q > (std::uint64_t{1} << domain_bits))
    throw ConfigError("birthday: domain has fewer than q points");
  NonAdaptiveLogic logic{
      [=](Rng &rng) { return detail::distinct_points(q, domain_bits, rng); },
      [](std::span<const BitString>, std::span<const BitString> answers) { return detail::any_collision(answers); }};
  return Distinguisher{"birthday", q, false, std::move(logic)};
}

// Non-adaptive collision check on a fixed query list.
inline Distinguisher fixed_collision_distinguisher(std::vector<BitString> queries) {
  const std::size_t q = queries.size();
  NonAdaptiveLogic logic{
      [queries = std::move(queries)](Rng &) { return queries; },
      [](std::span<const BitString>, std::span<const BitString> answers) { return detail::any_collision(answers); }};
  return Distinguisher{"fixed-collision", q, false, std::move(logic)};
}

// Closed-form birthday acceptance for q uniform draws from 2^bits values.
inline double birthday_bound(std::uint64_t q, unsigned bits) {
  const double qq = static_cast<double>(q);
  return 1.0 - std::exp(-qq * (qq - 1.0) / std::ldexp(1.0, static_cast<int>(bits) + 1));
}

// ---------------------------------------------------------------------------
// Involutions

// P(first remaining point is fixed) when k points are left: I(k-1)/I(k),
// where I(k) = I(k-1) + (k-1) I(k-2) counts involutions on k points.
// ratios[k] for k in [1, size]; uses r_k = 1 / (1 + (k-1) r_{k-1}).
inline std::vector<double> involution_fixed_ratios(std::size_t size) {
  std::vector<double> r(size + 1, 1.0);
  for (std::size_t k = 2; k <= size; ++k)
    r[k] = 1.0 / (1.0 + static_cast<double>(k - 1) * r[k - 1]);
  return r;
}

// Uniformly random involution of {0, ..., 2^n - 1}.
inline std::vector<std::uint32_t> sample_involution(unsigned n, Rng &rng) {
  if (n > 16)
    throw ConfigError("involution: n must be at most 16");
  const std::size_t size = std::size_t{1} << n;
  const auto ratios = involution_fixed_ratios(size);
  std::vector<std::uint32_t> perm(size), rest(size);
  for (std::size_t i = 0; i < size; ++i)
    rest[i] = static_cast<std::uint32_t>(i);
  while (!rest.empty()) {
    const std::size_t k = rest.size();
    const std::uint32_t x = rest.back();
    rest.pop_back();
    if (rng.uniform01() < ratios[k]) {
      perm[x] = x;
      continue;
    }
    const std::size_t j = rng.below(k - 1);
    const std::uint32_t y = rest[j];
    rest[j] = rest.back();
    rest.pop_back();
    perm[x] = y;
    perm[y] = x;
  }
  return perm;
}

class InvolutionOracle final : public Oracle {
public:
  InvolutionOracle(unsigned n, std::vector<std::uint32_t> perm) : Oracle(n, n), perm_(std::move(perm)) {
    if (perm_.size() != (std::size_t{1} << n))
      throw UsageError("involution: table size must be 2^n");
  }

  OracleKind kind() const override { return OracleKind::involution; }
  const std::vector<std::uint32_t> &table() const { return perm_; }

protected:
  BitString evaluate(const BitString &x) override { return BitString(perm_[x.value()], range_bits()); }

private:
  std::vector<std::uint32_t> perm_;
};

inline HandleSampler involution_handles(unsigned n) {
  return [n](Rng &rng) -> OracleHandle { return std::make_shared<InvolutionOracle>(n, sample_involution(n, rng)); };
}

// Two adaptive queries: y = f(0); accept iff y = 0 or f(y) = 0.
inline Distinguisher involution_distinguisher(unsigned n) {
  AdaptiveLogic logic = [n](OracleAccess &o, Rng &) {
    const BitString x0 = BitString::zeros(n);
    const BitString y = o.query(x0);
    if (y == x0)
      return true;
    return o.query(y) == x0;
  };
  return Distinguisher{"involution", 2, false, std::move(logic)};
}

// Real world: uniform involution on {0,1}^n; ideal: random function.
inline GameResult involution_game(unsigned n, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
  if (n < 1 || n > 16)
    throw ConfigError("involution: n must be in [1, 16]");
  return run_game(involution_handles(n), lazy_random_handles(n, n), involution_distinguisher(n), trials, seed,
                  threads);
}

// The non-adaptive counterpart: query 0^n and 0^(n-1)1 up front, accept iff
// the answers collide.
inline GameResult involution_collision_game(unsigned n, std::uint64_t trials, std::uint64_t seed,
                                            unsigned threads = 1) {
  if (n < 1 || n > 16)
    throw ConfigError("involution: n must be in [1, 16]");
  return run_game(involution_handles(n), lazy_random_handles(n, n),
                  fixed_collision_distinguisher({BitString(0, n), BitString(1, n)}), trials, seed, threads);
}

// ---------------------------------------------------------------------------
// Statistical distance

// Half the L1 distance between two distributions on the same enumerated
// support.
inline double exact_sd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw UsageError("exact_sd: supports differ in size");
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    sum += std::fabs(p[i] - q[i]);
  return 0.5 * sum;
}

// Draws one packed output tuple (t answers of r bits, first answer in the
// high bits).
using TupleSampler = std::function<std::uint64_t(Rng &)>;

inline TupleSampler uniform_tuple_sampler(unsigned tuple_bits) {
  return [tuple_bits](Rng &rng) { return rng.bits(tuple_bits); };
}

struct UniformityEstimate {
  double sd_estimate = 0;
  double baseline_sd = 0;
};

namespace detail {

inline double plug_in_sd(const TupleSampler &sampler, unsigned tuple_bits, std::uint64_t samples, std::uint64_t seed) {
  const std::size_t support = std::size_t{1} << tuple_bits;
  std::vector<std::uint64_t> counts(support, 0);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t v = sampler(rng);
    if (v >= support)
      throw UsageError("tuple sampler produced a value outside the support");
    ++counts[v];
  }
  const double uniform = 1.0 / static_cast<double>(support);
  double sum = 0;
  for (auto c : counts)
    sum += std::fabs(static_cast<double>(c) / static_cast<double>(samples) - uniform);
  return 0.5 * sum;
}

inline void check_uniformity_budget(unsigned tuple_bits, std::uint64_t samples) {
  if (tuple_bits > 16)
    throw ConfigError("uniformity: support 2^(r*t) must be at most 2^16");
  if (samples < 1000 * (std::uint64_t{1} << tuple_bits))
    throw ConfigError("uniformity: need at least 1000 samples per support point");
}

} // namespace detail

// Plug-in SD between the sampler's empirical distribution and uniform,
// next to the same estimator fed by true uniform tuples from the same seed.
// The baseline is the estimator's own bias at this sample size.
inline UniformityEstimate tuple_uniformity_sd(const TupleSampler &sampler, unsigned tuple_bits, std::uint64_t samples,
                                              std::uint64_t seed) {
  detail::check_uniformity_budget(tuple_bits, samples);
  return {detail::plug_in_sd(sampler, tuple_bits, samples, seed),
          detail::plug_in_sd(uniform_tuple_sampler(tuple_bits), tuple_bits, samples, seed)};
}

// Each sample draws a fresh handle and evaluates it on `queries`.
inline UniformityEstimate tuple_uniformity_sd(const HandleSampler &handle_sampler, std::vector<BitString> queries,
                                              std::uint64_t samples, std::uint64_t seed) {
  if (queries.empty())
    throw ConfigError("uniformity: need at least one query");
  {
    std::unordered_set<std::uint64_t> seen;
    for (const auto &x : queries)
      if (!seen.insert(x.value()).second)
        throw ConfigError("uniformity: queries must be distinct");
  }
  Rng probe(seed ^ kMixC2);
  const unsigned r = handle_sampler(probe)->range_bits();
  const unsigned tuple_bits = r * static_cast<unsigned>(queries.size());
  detail::check_uniformity_budget(tuple_bits, samples);
  TupleSampler tuples = [&, r](Rng &rng) {
    OracleHandle h = handle_sampler(rng);
    std::uint64_t packed = 0;
    for (const auto &x : queries)
      packed = (packed << r) | (*h)(x).value();
    return packed;
  };
  return tuple_uniformity_sd(tuples, tuple_bits, samples, seed);
}

// ---------------------------------------------------------------------------
// Many-oracle games

// A distinguisher with access to `oracles` independent oracles, each with
// its own query budget.
struct MultiDistinguisher {
  std::string name;
  std::size_t oracles = 1;
  std::size_t budget = 0;
  std::function<bool(std::span<OracleAccess *const>, Rng &)> logic;
};

// Birthday attack run independently on every oracle; accepts if any of
// them shows a collision.
inline MultiDistinguisher multi_birthday_distinguisher(std::size_t oracles, std::size_t q) {
  auto logic = [q](std::span<OracleAccess *const> os, Rng &rng) {
    bool hit = false;
    for (OracleAccess *o : os) {
      const auto qs = detail::distinct_points(q, o->domain_bits(), rng);
      std::vector<BitString> answers;
      for (const auto &x : qs)
        answers.push_back(o->query(x));
      hit = hit || detail::any_collision(answers);
    }
    return hit;
  };
  return MultiDistinguisher{"multi-birthday", oracles, q, std::move(logic)};
}

// Real world: every oracle an independent family sample; ideal: every
// oracle an independent random function.
inline GameResult run_multi_game(const HandleSampler &family_sampler, const HandleSampler &ideal_sampler,
                                 const MultiDistinguisher &multi, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1)
    throw ConfigError("game: trials must be at least 1");
  GameResult res;
  res.trials = trials;
  res.seed = seed;
  res.verdicts_real.assign(trials, 0);
  res.verdicts_ideal.assign(trials, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (unsigned world = 0; world < 2; ++world) {
      Rng key_rng(derive_seed(seed, t, world));
      Rng coins(derive_seed(seed, t, 2 + world));
      std::vector<OracleHandle> handles;
      std::vector<std::unique_ptr<OracleAccess>> access;
      std::vector<OracleAccess *> ptrs;
      for (std::size_t i = 0; i < multi.oracles; ++i) {
        handles.push_back((world == 0 ? family_sampler : ideal_sampler)(key_rng));
        access.push_back(std::make_unique<OracleAccess>(*handles.back(), multi.budget));
        ptrs.push_back(access.back().get());
      }
      auto &slot = world == 0 ? res.verdicts_real[t] : res.verdicts_ideal[t];
      try {
        slot = multi.logic(ptrs, coins) ? 1 : 0;
      } catch (const ProtocolViolation &) {
        slot = -1;
      }
    }
  }
  detail::tally(res);
  return res;
}

// Single-oracle distinguisher from a many-oracle one (hybrid j of s, 1-based):
// oracles 1..j-1 are fresh random functions, oracle j is the game's
// challenge, oracles j+1..s are fresh samples of the family. Averaged over
// j, the advantage is the many-oracle advantage divided by s.
inline Distinguisher hybrid_wrap(const MultiDistinguisher &multi, std::size_t j, HandleSampler family_sampler) {
  if (j < 1 || j > multi.oracles)
    throw UsageError("hybrid_wrap: index " + std::to_string(j) + " outside [1, " + std::to_string(multi.oracles) +
                     "]");
  AdaptiveLogic logic = [multi, j, family_sampler = std::move(family_sampler)](OracleAccess &challenge, Rng &rng) {
    std::vector<OracleHandle> handles;
    std::vector<std::unique_ptr<OracleAccess>> local;
    std::vector<OracleAccess *> ptrs;
    for (std::size_t i = 1; i <= multi.oracles; ++i) {
      if (i == j) {
        ptrs.push_back(&challenge);
        continue;
      }
      handles.push_back(i < j ? make_lazy_random(rng, challenge.domain_bits(), challenge.range_bits())
                              : family_sampler(rng));
      local.push_back(std::make_unique<OracleAccess>(*handles.back(), multi.budget));
      ptrs.push_back(local.back().get());
    }
    return multi.logic(ptrs, rng);
  };
  return Distinguisher{multi.name + "/hybrid-" + std::to_string(j), multi.budget, false, std::move(logic)};
}

// ---------------------------------------------------------------------------
// Reporting

struct ExperimentRow {
  std::string experiment;
  unsigned n = 0, d = 0, s = 0, r = 0, k = 0;
  std::uint64_t q = 0;
  unsigned z = 0;
  GameResult result;
};

inline const char *csv_header() {
  return "experiment,n,d,s,r,k,q,z,trials,p_real,p_ideal,advantage,stderr,seed,violations";
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string to_csv_row(const ExperimentRow &row) {
  const auto &g = row.result;
  std::string out = row.experiment;
  for (std::uint64_t v : {std::uint64_t{row.n}, std::uint64_t{row.d}, std::uint64_t{row.s}, std::uint64_t{row.r},
                          std::uint64_t{row.k}, row.q, std::uint64_t{row.z}, g.trials})
    out += "," + std::to_string(v);
  for (double v : {g.p_real, g.p_ideal, g.advantage, g.stderr_})
    out += "," + format_double(v);
  out += "," + std::to_string(g.seed) + "," + std::to_string(g.violations);
  return out;
}

} // namespace cuckoo_prf
