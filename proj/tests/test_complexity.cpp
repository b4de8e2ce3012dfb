#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cryptolens/complexity.h"
#include "test_support.h"
#include "ts_oracle.h"

namespace cryptolens {
namespace {

using testing::analyze_dir;
using testing::fixture;
using testing::raw_argument_nodes;

TEST(Score, PublishedStrataHeadings) {
  EXPECT_DOUBLE_EQ(score(0), -1.0);
  EXPECT_DOUBLE_EQ(score(1), 0.0);
  EXPECT_NEAR(score(2), 0.2923, 5e-5);
  EXPECT_NEAR(score(3), 0.4439, 5e-5);
  EXPECT_NEAR(score(4), 0.5385, 5e-5);
  EXPECT_EQ(format_score(score(33)), "0.908438");
}

TEST(Score, RejectsNegativeCounts) { EXPECT_THROW(score(-1), std::invalid_argument); }

TEST(Score, StrictlyIncreasingAndBounded) {
  double prev = score(0);
  for (long long d = 1; d < 5000; ++d) {
    double s = score(d);
    EXPECT_GT(s, prev) << d;
    EXPECT_LT(s, 1.0);
    prev = s;
  }
  EXPECT_NEAR(score(10), std::tanh(1.0), 1e-15);
}

TEST(Score, FixedSixDecimals) {
  EXPECT_EQ(format_score(-1.0), "-1.000000");
  EXPECT_EQ(format_score(0.0), "0.000000");
  EXPECT_EQ(format_score(score(3)), "0.443935");
}

TEST(CountD, MatchesRawParserOnEveryRestrictiveFixture) {
  auto a = analyze_dir(fixture("resolve"));
  ASSERT_FALSE(a.analyses.empty());
  for (const auto& s : a.analyses) {
    if (s.site->category() != ApiCategory::kRestrictive) continue;
    EXPECT_EQ(s.d, raw_argument_nodes(s.site->unit->text(), s.site->offset())) << s.site->id;
  }
}

TEST(CountD, KnownShapes) {
  auto a = analyze_dir(fixture("resolve"));
  EXPECT_EQ(a.first("CharAtArithmetic.java").d, 33u);
  EXPECT_EQ(a.first("PlainName.java").d, 1u);
  EXPECT_EQ(a.first("OidLiteral.java").d, 1u);
  auto f = analyze_dir(fixture("flexible"));
  EXPECT_EQ(f.first("EmptyBody.java").d, 0u);
  EXPECT_DOUBLE_EQ(f.first("EmptyBody.java").score, -1.0);
}

TEST(CountD, EmptyArgumentListScoresMinusOne) {
  auto a = testing::analyze_source(
      "class A { void f() throws Exception { javax.crypto.Cipher c = AESCipher.getInstance(); } }",
      ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 1u);
  EXPECT_EQ(a.analyses[0].d, 0u);
  EXPECT_DOUBLE_EQ(a.analyses[0].score, -1.0);
}

TEST(RangeKey, Buckets) {
  EXPECT_EQ(range_key(-1.0), -1);
  EXPECT_EQ(range_key(0.0), 0);
  EXPECT_EQ(range_key(score(2)), 2);
  EXPECT_EQ(range_key(score(33)), 9);
  EXPECT_EQ(range_key(0.99999), 9);
}

TEST(Stratify, PartitionsEverySite) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<ScoredSite> sites;
    std::size_t n = rng() % 300;
    for (std::size_t i = 0; i < n; ++i) sites.push_back(scored("s" + std::to_string(i), rng() % 40));
    for (StrataMode mode : {StrataMode::kExact, StrataMode::kRanged}) {
      auto strata = stratify(sites, mode);
      std::size_t total = 0;
      std::set<std::string> seen;
      int prev_key = -2;
      for (const auto& st : strata) {
        EXPECT_GT(st.key, prev_key);
        prev_key = st.key;
        EXPECT_EQ(st.population, st.member_ids.size());
        total += st.population;
        for (const auto& id : st.member_ids) EXPECT_TRUE(seen.insert(id).second);
      }
      EXPECT_EQ(total, n);
    }
  }
}

TEST(Stratify, ParseMode) {
  EXPECT_EQ(parse_strata_mode("exact"), StrataMode::kExact);
  EXPECT_EQ(parse_strata_mode("ranged"), StrataMode::kRanged);
  EXPECT_THROW(parse_strata_mode("fuzzy"), std::invalid_argument);
}

// Two-sided critical values from printed normal tables.
double table_z(double confidence) {
  if (confidence == 0.90) return 1.6448536269514722;
  if (confidence == 0.95) return 1.959963984540054;
  if (confidence == 0.99) return 2.5758293035489004;
  throw std::logic_error("no table value");
}

std::size_t oracle_sample_size(std::size_t n, double confidence, double margin) {
  double z = table_z(confidence);
  double n0 = z * z * 0.25 / (margin * margin);
  if (static_cast<double>(n) <= n0) return n;
  return static_cast<std::size_t>(std::ceil(n0 / (1.0 + (n0 - 1.0) / static_cast<double>(n))));
}

TEST(SampleSize, PublishedCorpusFigures) {
  EXPECT_EQ(sample_size(79671, 0.95, 0.05), 383u);
  EXPECT_EQ(sample_size(16), 16u);
  EXPECT_EQ(sample_size(1), 1u);
  EXPECT_EQ(sample_size(0), 0u);
  for (std::size_t n = 1; n <= 384; ++n) EXPECT_EQ(sample_size(n, 0.95, 0.05), n);
}

TEST(SampleSize, AgreesWithTableOracle) {
  std::mt19937_64 rng(5);
  for (double conf : {0.90, 0.95, 0.99}) {
    EXPECT_NEAR(z_for_confidence(conf), table_z(conf), 1e-9);
    for (double margin : {0.01, 0.03, 0.05, 0.1}) {
      for (int i = 0; i < 400; ++i) {
        std::size_t n = 1 + rng() % 250000;
        ASSERT_EQ(sample_size(n, conf, margin), oracle_sample_size(n, conf, margin))
            << n << " " << conf << " " << margin;
      }
    }
  }
}

TEST(SampleSize, PureCorrectedFormula) {
  double n0 = cochran_n0(0.95, 0.05);
  EXPECT_NEAR(n0, 384.145882, 1e-6);
  EXPECT_EQ(cochran_fpc(384, 0.95, 0.05), 193u);
  EXPECT_EQ(cochran_fpc(79671, 0.95, 0.05), 383u);
}

// The census rule drops at the threshold (384 -> 193 at 385), so monotonicity
// only holds on either side of it.
TEST(SampleSize, BoundedAndMonotoneAboveThreshold) {
  for (std::size_t n = 0; n <= 384; ++n) EXPECT_EQ(sample_size(n), n);
  EXPECT_EQ(sample_size(385), 193u);
  std::size_t prev = 0;
  for (std::size_t n = 385; n < 200000; n += 7) {
    std::size_t s = sample_size(n);
    EXPECT_LE(s, n);
    EXPECT_LE(s, 385u);
    EXPECT_GE(s, prev);
    prev = s;
  }
}

TEST(SampleSize, RejectsBadParameters) {
  EXPECT_THROW(sample_size(10, 1.0, 0.05), std::invalid_argument);
  EXPECT_THROW(sample_size(10, 0.95, 0.0), std::invalid_argument);
  EXPECT_THROW(sample_size(10, 0.0, 0.05), std::invalid_argument);
}

std::vector<Stratum> big_strata() {
  std::vector<ScoredSite> sites;
  for (int i = 0; i < 2000; ++i) sites.push_back(scored("a" + std::to_string(i), 1));
  for (int i = 0; i < 16; ++i) sites.push_back(scored("b" + std::to_string(i), 0));
  for (int i = 0; i < 700; ++i) sites.push_back(scored("c" + std::to_string(i), 3));
  auto strata = stratify(sites, StrataMode::kExact);
  assign_sample_sizes(strata, 0.95, 0.05);
  return strata;
}

TEST(DrawSample, SizesSubsetsAndDeterminism) {
  auto strata = big_strata();
  auto p1 = draw_sample(strata, 42);
  auto p2 = draw_sample(strata, 42);
  auto p3 = draw_sample(strata, 43);
  ASSERT_EQ(p1.strata.size(), 3u);
  for (std::size_t i = 0; i < p1.strata.size(); ++i) {
    const auto& st = p1.strata[i];
    EXPECT_EQ(st.selected_ids.size(), oracle_sample_size(st.population, 0.95, 0.05));
    std::set<std::string> members(st.member_ids.begin(), st.member_ids.end());
    std::set<std::string> chosen(st.selected_ids.begin(), st.selected_ids.end());
    EXPECT_EQ(chosen.size(), st.selected_ids.size());
    for (const auto& id : chosen) EXPECT_TRUE(members.count(id));
    EXPECT_EQ(st.selected_ids, p2.strata[i].selected_ids);
    EXPECT_EQ(st.selected_ids.size(), p3.strata[i].selected_ids.size());
  }
  EXPECT_EQ(p1.selected_ids, p2.selected_ids);
  EXPECT_NE(p1.selected_ids, p3.selected_ids);
  // The 16-site stratum is a census.
  EXPECT_EQ(p1.strata[0].selected_ids.size(), 16u);
}

TEST(DrawSample, RejectsInconsistentStrata) {
  auto strata = big_strata();
  strata[0].sample_size = strata[0].population + 1;
  EXPECT_THROW(draw_sample(strata, 1), std::invalid_argument);
}

}  // namespace
}  // namespace cryptolens
