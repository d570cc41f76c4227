#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "patsim/date.hpp"
#include "patsim/rng.hpp"
#include "patsim/text.hpp"

namespace patsim {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, LowercasesAndDropsSingleCharacters) {
  EXPECT_EQ(tokenize("A glass door, the DOOR!"), (Tokens{"glass", "door", "the", "door"}));
}

TEST(Tokenize, EmptyText) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, LoneDigitIsDropped) { EXPECT_EQ(tokenize("flt-3 ligand"), (Tokens{"flt", "ligand"})); }

TEST(Tokenize, DigitTokensOfLengthTwoAreKept) {
  EXPECT_EQ(tokenize("about 42 mg of SiO2"), (Tokens{"about", "42", "mg", "of", "sio2"}));
}

TEST(Tokenize, NonAsciiLettersAreWordCharacters) {
  EXPECT_EQ(tokenize("Über-Größe café"), (Tokens{"über", "größe", "café"}));
}

TEST(Tokenize, MinLengthIsConfigurable) {
  EXPECT_EQ(tokenize("a bc d", TokenizerConfig{1}), (Tokens{"a", "bc", "d"}));
}

TEST(Tokenize, Deterministic) {
  const std::string text = "The apparatus (10) comprises a 3-way valve; see FIG. 2.";
  EXPECT_EQ(tokenize(text), tokenize(text));
}

TEST(NormalizeText, CollapsesWhitespaceAndTrims) {
  EXPECT_EQ(normalize_text("  a\t\tb \n c  "), "a b c");
  EXPECT_EQ(normalize_text(" \t\n "), "");
}

TEST(NormalizeText, ComposesToNfc) {
  // "e" + combining acute -> U+00E9
  EXPECT_EQ(normalize_text("caf\x65\xcc\x81"), "caf\xc3\xa9");
}

TEST(NormalizeText, KeepsCase) { EXPECT_EQ(normalize_text("Device OF Claim"), "Device OF Claim"); }

TEST(Utf8Prefix, CountsCodePoints) {
  EXPECT_EQ(utf8_prefix("h\xc3\xa9llo", 2), "h\xc3\xa9");
  EXPECT_EQ(utf8_prefix("abc", 10), "abc");
}

TEST(ParseIsoDate, AcceptsDatesAndTimestamps) {
  EXPECT_EQ(parse_iso_date("2010-03-04"), (Date{2010, 3, 4}));
  EXPECT_EQ(parse_iso_date("2010-03-04T00:00:00"), (Date{2010, 3, 4}));
  EXPECT_EQ(parse_iso_date("2010-03-04 12:00"), (Date{2010, 3, 4}));
}

TEST(ParseIsoDate, RejectsInvalidCalendarDates) {
  EXPECT_FALSE(parse_iso_date("2010-02-30"));
  EXPECT_FALSE(parse_iso_date("2010-13-01"));
  EXPECT_FALSE(parse_iso_date("2010/03/04"));
  EXPECT_FALSE(parse_iso_date(""));
  EXPECT_FALSE(parse_iso_date("NULL"));
  EXPECT_TRUE(parse_iso_date("2012-02-29"));
}

TEST(ParseIsoDate, IsoRoundTrip) { EXPECT_EQ(Date({1999, 1, 9}).iso(), "1999-01-09"); }

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
  CounterRng a(7, 1), b(7, 1), c(7, 2), d(8, 1);
  const auto x = a(), y = b(), z = c(), w = d();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
  EXPECT_NE(x, w);
}

TEST(CounterRng, DeriveSeedDependsOnStage) {
  EXPECT_NE(derive_seed(1, "triplets"), derive_seed(1, "bench"));
  EXPECT_NE(derive_seed(1, "triplets"), derive_seed(2, "triplets"));
  EXPECT_EQ(derive_seed(1, "triplets"), derive_seed(1, "triplets"));
}

TEST(CounterRng, UniformIsUnbiased) {
  // Pearson chi-square over 7 cells, 70000 draws. df = 6; the 0.999 quantile is 22.46.
  CounterRng rng(42, 0);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform(7)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi2, 22.46);
}

TEST(CounterRng, UniformRejectsZeroBound) {
  CounterRng rng(1, 0);
  EXPECT_THROW(rng.uniform(0), std::exception);
}

TEST(CounterRng, Uniform01InUnitInterval) {
  CounterRng rng(3, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Shuffle, IsAPermutation) {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  CounterRng rng(5, 0);
  shuffle(std::span<int>(v), rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[i], i);
  std::vector<int> identity(100);
  std::iota(identity.begin(), identity.end(), 0);
  EXPECT_NE(v, identity);
}

TEST(Shuffle, FirstPositionIsUniform) {
  // Each of 5 items lands first with probability 1/5; chi-square df = 4, 0.999 quantile 18.47.
  std::array<int, 5> counts{};
  for (std::uint64_t s = 0; s < 20000; ++s) {
    std::array<int, 5> v{0, 1, 2, 3, 4};
    CounterRng rng(11, s);
    partial_shuffle(std::span<int>(v), 1, rng);
    ++counts[v[0]];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - 4000.0) * (c - 4000.0) / 4000.0;
  EXPECT_LT(chi2, 18.47);
}

}  // namespace
}  // namespace patsim
