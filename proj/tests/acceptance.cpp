// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cuckoo_prf/cuckoo_prf.hpp"
#include "cuckoo_prf/experiments.hpp"

using namespace cuckoo_prf;
namespace ex = cuckoo_prf::experiments;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *name, const std::function<Outcome()> &body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception &e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.ok)
    ++failures;
  std::printf("%s [%d] %s: %s (%.2fs)\n", out.ok ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome kwise() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto k2 = ex::kwise_verify(4, 2);
  const auto k3 = ex::kwise_verify(4, 3);
  const double secs = elapsed_since(t0);
  const bool ok = k2.pass() && k3.pass() && k2.input_tuples == 120 && k3.input_tuples == 560 && secs < 10;
  return {ok, fmt("k=2 %llu/%llu tuples uniform, k=3 %llu/%llu tuples uniform, %.2fs < 10s",
                  (unsigned long long)(k2.input_tuples - k2.unequal_tuples), (unsigned long long)k2.input_tuples,
                  (unsigned long long)(k3.input_tuples - k3.unequal_tuples), (unsigned long long)k3.input_tuples,
                  secs)};
}

Outcome birthday() {
  ex::Config cfg;
  cfg.d = 24;
  cfg.s = 12;
  cfg.r = 24;
  cfg.k = 16;
  cfg.q = 128;
  cfg.trials = 2000;
  cfg.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = ex::birthday(cfg);
  const double secs = elapsed_since(t0);
  const auto &levin = rows.at(0).result;
  const auto &pp = rows.at(1).result;
  const bool ok = std::fabs(levin.advantage - 0.86) <= 0.04 && pp.advantage <= 0.03 && secs < 60;
  return {ok, fmt("levin advantage %.4f (0.86 +/- 0.04), pp advantage %.4f (<= 0.03), %.1fs < 60s", levin.advantage,
                  pp.advantage, secs)};
}

Outcome uniformity() {
  ex::Config cfg;
  cfg.d = 8;
  cfg.s = 6;
  cfg.r = 2;
  cfg.k = 8;
  cfg.t = 4;
  cfg.samples = 1000000;
  cfg.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = ex::uniformity(cfg);
  const double secs = elapsed_since(t0);
  return {rep.pass() && secs < 120, fmt("sd %.6f vs baseline %.6f + 0.005, %.1fs < 120s", rep.estimate.sd_estimate,
                                        rep.estimate.baseline_sd, secs)};
}

Outcome adw_zero_branches() {
  Rng rng(2024);
  std::uint64_t mismatches = 0, checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto h1 = sample_kwise(4, 6, 4, rng), h2 = sample_kwise(4, 6, 4, rng), ell = sample_kwise(4, 6, 6, rng);
    const auto f1 = make_lazy_random(rng, 4, 6), f2 = make_lazy_random(rng, 4, 6);
    const ADWKey adw({}, {}, {}, {}, h1, h2, ell, f1, f2);
    const PPKey pp(h1, h2, ell, f1, f2);
    for (std::uint64_t x = 0; x < 64; ++x, ++checked)
      if (adw_eval(adw, BitString(x, 6)) != pp_eval(pp, BitString(x, 6)))
        ++mismatches;
  }
  return {mismatches == 0, fmt("%llu/%llu points agree over 20 shared keys", (unsigned long long)(checked - mismatches),
                               (unsigned long long)checked)};
}

Outcome ggm() {
  std::size_t kat_ok = 0;
  const auto kats = ex::ggm_kat();
  for (const auto &v : kats)
    kat_ok += v.pass();

  Rng rng(77);
  const GgmKey key = sample_ggm_key(PrgSpec(PrgKind::mix64, 24), 16, rng);
  int pairs_ok = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const unsigned p = static_cast<unsigned>(rng.below(17));
    const std::uint64_t prefix = rng.bits(p);
    const unsigned tail = 16 - p;
    const BitString a(prefix << tail | rng.bits(tail), 16);
    const BitString b(prefix << tail | rng.bits(tail), 16);
    std::vector<BitString> ta, tb;
    ggm_eval(key, a, nullptr, [&](unsigned, const BitString &s) { ta.push_back(s); });
    ggm_eval(key, b, nullptr, [&](unsigned, const BitString &s) { tb.push_back(s); });
    bool shared = ta.size() == 17 && tb.size() == 17;
    for (unsigned depth = 0; shared && depth <= p; ++depth)
      shared = ta[depth] == tb[depth];
    pairs_ok += shared;
  }
  return {kat_ok == kats.size() && pairs_ok == 100,
          fmt("%zu/%zu known answers, %d/100 prefix pairs share seeds", kat_ok, kats.size(), pairs_ok)};
}

Outcome locality() {
  const unsigned n = 16;
  const std::uint64_t q = 64;
  Rng rng(4);
  auto counter = std::make_shared<CallCounter>();
  std::uint64_t outside = 0, seen = 0;
  auto observer = [&](const BitString &x) {
    ++seen;
    if (x.value() >= 4 * q)
      ++outside;
  };
  auto f = build_adaptive_from_nonadaptive(q, 12, counting_sampler(lazy_random_sampler(), counter, observer), n, rng);
  BitString x(0, n);
  for (int i = 0; i < 10000; ++i) {
    const auto y = (*f)(x);
    x = BitString((y.value() ^ rng.bits(n)) & low_mask(n), n);
  }
  return {outside == 0 && seen == 20000,
          fmt("%llu underlying queries, %llu outside [0, 4q)", (unsigned long long)seen, (unsigned long long)outside)};
}

Outcome call_counts() {
  Rng rng(9);
  const int queries = 1000;
  auto per_query = [&](const OracleHandle &f, const std::shared_ptr<CallCounter> &counter, unsigned d,
                       std::uint64_t expected) {
    for (int i = 0; i < queries; ++i) {
      const auto before = counter->calls;
      (*f)(BitString(rng.bits(d), d));
      if (counter->calls - before != expected)
        return false;
    }
    return true;
  };
  ExtensionParams p;
  p.d = 24;
  p.s = 12;
  p.r = 16;
  p.k = 16;
  p.q = 256;

  auto c_pp = std::make_shared<CallCounter>();
  const bool pp_ok = per_query(build_pp_domain_extension(p, counting_sampler(lazy_random_sampler(), c_pp), rng), c_pp,
                               24, 2);

  ExtensionParams a = p;
  a.k = 2;
  const unsigned z = adw_branch_count(AdwVariant::prf_backed, a.c, a.q);
  auto c_prf = std::make_shared<CallCounter>();
  const bool prf_ok = per_query(
      build_adw_domain_extension(a, AdwVariant::prf_backed, counting_sampler(lazy_random_sampler(), c_prf), rng), c_prf,
      24, 3 * z + 2);
  auto c_tab = std::make_shared<CallCounter>();
  const bool tab_ok = per_query(
      build_adw_domain_extension(a, AdwVariant::table_backed, counting_sampler(lazy_random_sampler(), c_tab), rng),
      c_tab, 24, 2);

  const unsigned m = prg_prf_default_m(16);
  auto prg = build_prg_prf(PrgKind::mix64, m, 16, 8, 16, rng);
  const bool prg_ok = per_query(prg.handle, prg.prg_calls, 16, 2 * m);

  return {pp_ok && prf_ok && tab_ok && prg_ok,
          fmt("pp 2 %s, adw prf-backed 3z+2=%u %s, adw table-backed 2 %s, prg prf 2m=%u %s over %d queries each",
              pp_ok ? "ok" : "MISMATCH", 3 * z + 2, prf_ok ? "ok" : "MISMATCH", tab_ok ? "ok" : "MISMATCH", 2 * m,
              prg_ok ? "ok" : "MISMATCH", queries)};
}

Outcome involution() {
  ex::Config cfg;
  cfg.n = 10;
  cfg.trials = 1000;
  cfg.seed = 1;
  const auto rep = ex::involution(cfg);
  const double adaptive = rep.adaptive.result.advantage, non_adaptive = rep.non_adaptive.result.advantage;
  return {adaptive >= 0.99 && non_adaptive <= 0.01,
          fmt("adaptive advantage %.4f (>= 0.99), non-adaptive %.4f (<= 0.01)", adaptive, non_adaptive)};
}

Outcome identical_samplers() {
  const auto sampler = lazy_random_handles(8, 8);
  const auto dist = birthday_distinguisher(16, 8);
  int within = 0;
  bool reproducible = true;
  double worst_z = 0;
  std::uint64_t worst_seed = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto res = run_game(sampler, sampler, dist, 2000, seed);
    within += res.advantage <= 3 * res.stderr_;
    const double z = res.stderr_ > 0 ? res.advantage / res.stderr_ : 0;
    if (z > worst_z) {
      worst_z = z;
      worst_seed = seed;
    }
    const auto again = run_game(sampler, sampler, dist, 2000, seed);
    const auto threaded = run_game(sampler, sampler, dist, 2000, seed, 4);
    const ExperimentRow a{"identical", 0, 8, 0, 8, 0, 16, 0, res};
    const ExperimentRow b{"identical", 0, 8, 0, 8, 0, 16, 0, again};
    const ExperimentRow c{"identical", 0, 8, 0, 8, 0, 16, 0, threaded};
    reproducible = reproducible && to_csv_row(a) == to_csv_row(b) && to_csv_row(a) == to_csv_row(c) && res == again;
  }
  return {within == 10 && reproducible,
          fmt("%d/10 seeds within 3 stderr (largest %.2f stderr at seed %llu), reruns byte-identical: %s", within,
              worst_z, (unsigned long long)worst_seed, reproducible ? "yes" : "no")};
}

} // namespace

int main() {
  criterion(1, "exhaustive k-wise independence over GF(16)", kwise);
  criterion(2, "birthday attack levin vs pp", birthday);
  criterion(3, "pp output-tuple uniformity", uniformity);
  criterion(4, "adw with zero branches equals pp", adw_zero_branches);
  criterion(5, "ggm known answers and prefix sharing", ggm);
  criterion(6, "adaptive transform query locality", locality);
  criterion(7, "underlying call counts", call_counts);
  criterion(8, "involution adaptive vs non-adaptive", involution);
  criterion(9, "identical samplers and reproducibility", identical_samplers);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
