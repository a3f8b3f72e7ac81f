#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "cuckoo_prf/hashfam.hpp"

using namespace cuckoo_prf;

namespace {

// Counts, over every key with k coefficients in GF(16), how often each
// output tuple appears on the inputs `xs`, at range_bits r.
std::map<std::vector<std::uint64_t>, int> enumerate_outputs(unsigned k, const std::vector<std::uint64_t> &xs,
                                                             unsigned r) {
  std::map<std::vector<std::uint64_t>, int> counts;
  const std::uint64_t keys = std::uint64_t{1} << (4 * k);
  for (std::uint64_t packed = 0; packed < keys; ++packed) {
    std::vector<std::uint64_t> coeffs(k);
    for (unsigned i = 0; i < k; ++i)
      coeffs[i] = (packed >> (4 * i)) & 0xF;
    const KWiseHashKey key(coeffs, 4, r);
    std::vector<std::uint64_t> out;
    for (auto x : xs)
      out.push_back(key(BitString(x, 4)).value());
    ++counts[out];
  }
  return counts;
}

} // namespace

TEST(HashFamily, SampleConsumesKWords) {
  Rng rng(1);
  const auto key = sample_kwise(5, 20, 12, rng);
  EXPECT_EQ(key.k(), 5u);
  EXPECT_EQ(key.width(), 32u);
  EXPECT_EQ(key.key_bits(), 5u * 32u);
  EXPECT_EQ(rng.words_consumed(), 5u);
  for (auto c : key.coeffs())
    EXPECT_LT(c, std::uint64_t{1} << 32);
}

TEST(HashFamily, ConfigErrors) {
  Rng rng(1);
  EXPECT_THROW(sample_kwise(0, 8, 8, rng), ConfigError);
  EXPECT_THROW(sample_kwise(2, 65, 8, rng), ConfigError);
  EXPECT_THROW(KWiseHashKey({}, 4, 4), ConfigError);
}

TEST(HashFamily, KEqualsOneIsConstant) {
  Rng rng(3);
  const auto key = sample_kwise(1, 8, 8, rng);
  const auto first = key(BitString(0, 8));
  for (std::uint64_t x = 1; x < 256; ++x)
    EXPECT_EQ(key(BitString(x, 8)), first);
}

TEST(HashFamily, EvalExamples) {
  const KWiseHashKey zero({0, 0, 0}, 8, 5);
  for (std::uint64_t x = 0; x < 256; ++x)
    EXPECT_EQ(zero(BitString(x, 8)), BitString::zeros(5));

  const KWiseHashKey identity({0, 1}, 16, 16);
  for (std::uint64_t x : {0ull, 1ull, 0xBEEFull, 0xFFFFull})
    EXPECT_EQ(identity(BitString(x, 16)).value(), x);

  const KWiseHashKey linear({1, 1}, 4, 2);
  EXPECT_EQ(linear(BitString::parse("0010")), BitString::parse("11"));

  EXPECT_THROW(identity(BitString(1, 8)), UsageError);
}

TEST(HashFamily, Pairwise256KeysEachPairOnce) {
  // 256 keys over 256 possible output pairs.
  for (std::uint64_t x1 = 0; x1 < 16; ++x1)
    for (std::uint64_t x2 = 0; x2 < 16; ++x2) {
      if (x1 == x2)
        continue;
      const auto counts = enumerate_outputs(2, {x1, x2}, 4);
      ASSERT_EQ(counts.size(), 256u);
      for (const auto &[tuple, c] : counts)
        ASSERT_EQ(c, 1);
    }
}

TEST(HashFamily, ThreeWiseIndependenceExact) {
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = a + 1; b < 16; ++b)
      for (std::uint64_t c = b + 1; c < 16; ++c) {
        const auto counts = enumerate_outputs(3, {a, b, c}, 4);
        ASSERT_EQ(counts.size(), 4096u);
        for (const auto &[tuple, n] : counts)
          ASSERT_EQ(n, 1);
      }
}

TEST(HashFamily, TruncationKeepsPairwiseIndependence) {
  // r = 2 < w = 4: every 2-bit pair over 256 keys appears 256/16 = 16 times.
  for (std::uint64_t x1 = 0; x1 < 16; ++x1)
    for (std::uint64_t x2 = x1 + 1; x2 < 16; ++x2) {
      const auto counts = enumerate_outputs(2, {x1, x2}, 2);
      ASSERT_EQ(counts.size(), 16u);
      for (const auto &[tuple, n] : counts)
        ASSERT_EQ(n, 16);
    }
}

TEST(HashFamily, Deterministic) {
  Rng rng(5);
  const auto key = sample_kwise(6, 24, 24, rng);
  const KWiseHashKey copy(key.coeffs(), 24, 24);
  for (std::uint64_t x = 0; x < 1000; x += 7)
    EXPECT_EQ(key(BitString(x, 24)), copy(BitString(x, 24)));
}

TEST(HashFamily, SerializeConstantTermFirst) {
  const KWiseHashKey key({0x1, 0xAB}, 8, 8);
  EXPECT_EQ(key.serialize(), "[01,ab]");
}

TEST(RangeRestriction, RejectsNonPowerOfTwo) {
  EXPECT_THROW(RangeRestriction(12, 8), ConfigError);
  EXPECT_THROW(RangeRestriction(0, 8), ConfigError);
  EXPECT_THROW(RangeRestriction(512, 8), ConfigError);
  Rng rng(1);
  EXPECT_THROW(restrict_to_table(sample_kwise(2, 8, 2, rng), RangeRestriction(16, 8)), ConfigError);
}

TEST(RangeRestriction, Examples) {
  Rng rng(11);
  const auto key = sample_kwise(4, 8, 8, rng);
  const auto one = restrict_to_table(key, RangeRestriction(1, 8));
  const auto full = restrict_to_table(key, RangeRestriction(256, 8));
  for (std::uint64_t x = 0; x < 256; ++x) {
    EXPECT_EQ(one(BitString(x, 8)), BitString::zeros(8));
    EXPECT_EQ(full(BitString(x, 8)), key(BitString(x, 8)));
  }

  const auto small = restrict_to_table(sample_kwise(3, 3, 3, rng), RangeRestriction(4, 3));
  for (std::uint64_t x = 0; x < 8; ++x) {
    const auto y = small(BitString(x, 3));
    EXPECT_EQ(y.size(), 3u);
    EXPECT_TRUE(y.to_string() == "000" || y.to_string() == "001" || y.to_string() == "010" || y.to_string() == "011");
  }
}

TEST(RangeRestriction, OutputAlwaysBelowT) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const unsigned n = 8 + static_cast<unsigned>(rng.below(24));
    const std::uint64_t t = std::uint64_t{1} << rng.below(n + 1);
    const auto h = restrict_to_table(sample_kwise(3, n, n, rng), RangeRestriction(t, n));
    for (int i = 0; i < 200; ++i) {
      const auto y = h(BitString(rng.bits(n), n));
      ASSERT_LT(y.value(), t);
      ASSERT_EQ(y.size(), n);
    }
  }
}

TEST(RandomTable, LookupAndErrors) {
  Rng rng(2);
  const auto one = sample_table(1, 16, rng);
  EXPECT_EQ(table_lookup(one, 0), table_lookup(one, 0));
  EXPECT_THROW(table_lookup(one, 1), UsageError);
  EXPECT_THROW(RandomTable({BitString(1, 3), BitString(1, 4)}, 3), UsageError);
}

TEST(RandomTable, MeanHammingWeight) {
  // Each entry of 8 uniform bits has mean weight 4 and variance 2; the
  // per-table mean over 2 entries has sd 1, so 10^4 tables give sd 0.01.
  Rng rng(123);
  double total = 0;
  const int tables = 10000;
  for (int i = 0; i < tables; ++i) {
    const auto tbl = sample_table(2, 8, rng);
    total += (popcount(tbl.lookup(0)) + popcount(tbl.lookup(1))) / 2.0;
  }
  EXPECT_NEAR(total / tables, 4.0, 0.1);
}
