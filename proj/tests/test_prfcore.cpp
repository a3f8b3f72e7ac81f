#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "cuckoo_prf/combine.hpp"
#include "cuckoo_prf/games.hpp"
#include "cuckoo_prf/prfcore.hpp"

using namespace cuckoo_prf;

TEST(Mix64, KnownValues) {
  // From an independent Python implementation of the finalizer.
  EXPECT_EQ(mix64(0), 0u);
  EXPECT_EQ(mix64(1), 0x5692161d100b05e5ull);
  EXPECT_EQ(mix64(kMixC1), 0xe220a8397b1dcdafull);
  EXPECT_EQ(lazy_random_answer(42, 5, 16), 0xe2d2u);
}

TEST(LazyRandom, MemoizedAndOrderIndependent) {
  LazyRandomOracle f(7, 20, 12);
  const BitString x(12345, 20), x2(999, 20);
  const auto a = f(x);
  EXPECT_EQ(f(x), a);
  f(x2);
  EXPECT_EQ(f(x), a);
  EXPECT_EQ(f.materialized(), 2u);
  EXPECT_THROW(f(BitString(1, 19)), UsageError);
}

TEST(LazyRandom, ReplayWithSameSeed) {
  LazyRandomOracle a(99, 16, 16), b(99, 16, 16);
  Rng rng(4);
  std::vector<BitString> qs;
  for (int i = 0; i < 500; ++i)
    qs.emplace_back(rng.bits(16), 16);
  std::vector<BitString> ya, yb;
  for (const auto &q : qs)
    ya.push_back(a(q));
  for (auto it = qs.rbegin(); it != qs.rend(); ++it)
    yb.push_back(b(*it));
  std::reverse(yb.begin(), yb.end());
  EXPECT_EQ(ya, yb);
}

TEST(LazyRandom, ChiSquareByteDistribution) {
  LazyRandomOracle f(0x5eed, 24, 8);
  std::vector<int> counts(256, 0);
  const int queries = 10000;
  for (int x = 0; x < queries; ++x)
    ++counts[f(BitString(static_cast<std::uint64_t>(x), 24)).value()];
  const double expected = queries / 256.0;
  double chi2 = 0;
  for (int c : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  // Two-sided 99.9% band of chi-square with 255 degrees of freedom.
  EXPECT_GT(chi2, 187.17);
  EXPECT_LT(chi2, 335.92);
}

TEST(Prg, StubComplementAndLength) {
  const PrgSpec stub(PrgKind::stub_complement, 4);
  EXPECT_EQ(prg_expand(stub, BitString::parse("0101")), BitString::parse("01011010"));
  for (unsigned n : {1u, 7u, 16u, 32u}) {
    EXPECT_EQ(prg_expand(PrgSpec(PrgKind::stub_complement, n), BitString::zeros(n)).size(), 2 * n);
    EXPECT_EQ(prg_expand(PrgSpec(PrgKind::mix64, n), BitString::zeros(n)).size(), 2 * n);
  }
  EXPECT_THROW(prg_expand(stub, BitString::parse("010")), UsageError);
  EXPECT_THROW(PrgSpec(PrgKind::mix64, 33), ConfigError);
  EXPECT_THROW(PrgSpec(PrgKind::mix64, 0), ConfigError);
}

TEST(Prg, Mix64KnownAnswer) {
  // M(1011 ^ C1) and M(1011 ^ C2), low 4 bits, from the Python reference.
  EXPECT_EQ(prg_expand(PrgSpec(PrgKind::mix64, 4), BitString::parse("1011")), BitString::parse("01001100"));
}

TEST(Prg, Mix64HalvesDiffer) {
  const PrgSpec g(PrgKind::mix64, 32);
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const auto h = prg_halves(g, BitString(rng.bits(32), 32));
    ASSERT_NE(h.left, h.right);
  }
}

TEST(Ggm, KnownAnswers) {
  const PrgSpec stub(PrgKind::stub_complement, 4);
  const BitString r = BitString::parse("0101");
  EXPECT_EQ(ggm_eval(GgmKey(r, 0, stub), BitString()), r);
  for (unsigned m : {1u, 3u, 8u})
    EXPECT_EQ(ggm_eval(GgmKey(r, m, stub), BitString::zeros(m)), r);
  EXPECT_EQ(ggm_eval(GgmKey(r, 2, stub), BitString::parse("10")), BitString::parse("1010"));
  EXPECT_THROW(ggm_eval(GgmKey(r, 2, stub), BitString::parse("101")), UsageError);
  EXPECT_THROW(GgmKey(BitString::parse("01"), 2, stub), ConfigError);
}

TEST(Ggm, ExactlyMGeneratorCalls) {
  Rng rng(1);
  for (unsigned m : {0u, 1u, 5u, 17u}) {
    auto counter = std::make_shared<CallCounter>();
    GgmOracle f(sample_ggm_key(PrgSpec(PrgKind::mix64, 16), m, rng), counter);
    for (int i = 0; i < 10; ++i)
      f(BitString(rng.bits(m), m));
    EXPECT_EQ(counter->calls, 10u * m);
  }
}

TEST(Ggm, PrefixSharing) {
  Rng rng(77);
  const GgmKey key = sample_ggm_key(PrgSpec(PrgKind::mix64, 24), 16, rng);
  for (int pair = 0; pair < 100; ++pair) {
    const unsigned p = static_cast<unsigned>(rng.below(17));
    const std::uint64_t prefix = rng.bits(p);
    const unsigned tail = 16 - p;
    const BitString a(prefix << tail | rng.bits(tail), 16);
    const BitString b(prefix << tail | rng.bits(tail), 16);
    std::vector<BitString> ta, tb;
    ggm_eval(key, a, nullptr, [&](unsigned, const BitString &s) { ta.push_back(s); });
    ggm_eval(key, b, nullptr, [&](unsigned, const BitString &s) { tb.push_back(s); });
    ASSERT_EQ(ta.size(), 17u);
    for (unsigned depth = 0; depth <= p; ++depth)
      ASSERT_EQ(ta[depth], tb[depth]) << "depth " << depth << " prefix " << p;
  }
}

TEST(Levin, Examples) {
  Rng rng(5);
  auto f = make_lazy_random(rng, 8, 16);
  const KWiseHashKey constant({0x3C}, 16, 8);
  const auto first = levin_eval(constant, *f, BitString(0, 16));
  for (std::uint64_t x = 1; x < 300; ++x)
    EXPECT_EQ(levin_eval(constant, *f, BitString(x, 16)), first);

  const KWiseHashKey identity({0, 1}, 8, 8);
  for (std::uint64_t x = 0; x < 256; ++x)
    EXPECT_EQ(levin_eval(identity, *f, BitString(x, 8)), (*f)(BitString(x, 8)));

  const auto h = sample_kwise(2, 16, 8, rng);
  std::map<std::uint64_t, std::uint64_t> seen;
  int collisions = 0;
  LevinOracle lev(h, f);
  for (std::uint64_t x = 0; x < 2000; ++x) {
    const auto hx = h(BitString(x, 16)).value();
    const auto y = lev(BitString(x, 16));
    if (auto it = seen.find(hx); it != seen.end()) {
      EXPECT_EQ(lev(BitString(it->second, 16)), y);
      ++collisions;
    } else {
      seen.emplace(hx, x);
    }
  }
  EXPECT_GT(collisions, 0);

  EXPECT_THROW(LevinOracle(sample_kwise(2, 16, 7, rng), f), ConfigError);
}

TEST(Oracle, DeterministicUnderRandomInterleavings) {
  Rng rng(31);
  const PrgSpec prg(PrgKind::mix64, 16);
  auto build = [&](std::uint64_t seed) {
    Rng k(seed);
    std::vector<OracleHandle> hs;
    hs.push_back(make_lazy_random(k, 16, 16));
    hs.push_back(std::make_shared<GgmOracle>(sample_ggm_key(prg, 16, k)));
    auto f = make_lazy_random(k, 8, 16);
    hs.push_back(std::make_shared<LevinOracle>(sample_kwise(3, 16, 8, k), f));
    hs.push_back(std::make_shared<PPOracle>(PPKey(sample_kwise(4, 16, 8, k), sample_kwise(4, 16, 8, k),
                                                  sample_kwise(4, 16, 16, k), make_lazy_random(k, 8, 16),
                                                  make_lazy_random(k, 8, 16))));
    hs.push_back(std::make_shared<InvolutionOracle>(10, sample_involution(10, k)));
    return hs;
  };
  for (int round = 0; round < 20; ++round) {
    auto a = build(round), b = build(round);
    std::vector<std::pair<std::size_t, BitString>> script;
    for (int i = 0; i < 300; ++i) {
      const std::size_t which = rng.below(a.size());
      script.emplace_back(which, BitString(rng.bits(a[which]->domain_bits()), a[which]->domain_bits()));
    }
    std::vector<BitString> ta(script.size()), tb(script.size());
    for (std::size_t i = 0; i < script.size(); ++i)
      ta[i] = (*a[script[i].first])(script[i].second);
    // Replay in a shuffled order on fresh handles with the same keys.
    std::vector<std::size_t> order(script.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    for (auto i : order)
      tb[i] = (*b[script[i].first])(script[i].second);
    ASSERT_EQ(ta, tb);
  }
}

TEST(Oracle, EmbeddingPadsAndTruncates) {
  auto inner = std::make_shared<FunctionOracle>(8, 12, [](const BitString &x) { return BitString(x.value() * 3, 12); });
  EmbeddedOracle e(inner, 3, 5);
  EXPECT_EQ(e(BitString::parse("101")), BitString((5 * 3) & 0x1F, 5));
  EXPECT_THROW(EmbeddedOracle(inner, 9, 4), ConfigError);
}

TEST(Oracle, TableOracleRejectsOutsidePrefix) {
  TableOracle t(8, 4, {BitString(1, 4), BitString(2, 4)});
  EXPECT_EQ(t(BitString(1, 8)), BitString(2, 4));
  EXPECT_THROW(t(BitString(2, 8)), UsageError);
}
