#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include <openssl/evp.h>

#include "cryptolens/codec.h"
#include "cryptolens/resolve.h"
#include "resolve_oracle.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using testing::analyze_dir;
using testing::analyze_source;
using testing::fixture;
using testing::FixtureCase;
using testing::Values;
using testing::fixture_cases;

class FixtureResolution : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { analyzed_ = new testing::Analyzed(analyze_dir(fixture("resolve"))); }
  static void TearDownTestSuite() {
    delete analyzed_;
    analyzed_ = nullptr;
  }
  static testing::Analyzed* analyzed_;
};
testing::Analyzed* FixtureResolution::analyzed_ = nullptr;

TEST_F(FixtureResolution, CandidatesEqualOracle) {
  for (const auto& c : fixture_cases()) {
    const auto& a = analyzed_->first(c.file);
    ASSERT_TRUE(a.resolved) << c.file;
    Values got(a.resolved->candidates.begin(), a.resolved->candidates.end());
    EXPECT_EQ(got, c.expected()) << c.file;
    EXPECT_EQ(a.resolved->residuals, c.residuals) << c.file;
  }
}

TEST_F(FixtureResolution, EveryFixtureIsCovered) {
  std::set<std::string> covered;
  for (const auto& c : fixture_cases()) covered.insert(c.file);
  for (const auto& u : analyzed_->scan.units) EXPECT_TRUE(covered.count(u->path())) << u->path();
}

TEST_F(FixtureResolution, CharAtValueAndVisibleLiterals) {
  const auto& a = analyzed_->first("CharAtArithmetic.java");
  EXPECT_EQ(a.resolved->candidates, std::vector<std::string>{"AES/ECB/NoPadding"});
  auto lits = visible_literals(*a.site, &*a.resolved);
  for (const char* s : {"AES/GCM/NoPadding", "AES/", "/NoPadding"}) EXPECT_TRUE(lits.count(s)) << s;
  EXPECT_FALSE(lits.count("AES/ECB/NoPadding"));
}

TEST_F(FixtureResolution, XorMaskTurnsCbcIntoEcb) {
  const auto& a = analyzed_->first("XorMask.java");
  EXPECT_EQ(a.resolved->candidates, std::vector<std::string>{"AES/ECB/PKCS5Padding"});
  EXPECT_TRUE(a.resolved->has_rule(rule::kXor));
}

TEST_F(FixtureResolution, StringBufferVisibleLiterals) {
  const auto& a = analyzed_->first("StringBufferAppend.java");
  EXPECT_EQ(visible_literals(*a.site, &*a.resolved), (std::set<std::string>{"DESede/CBC/", "NoPadding"}));
}

TEST_F(FixtureResolution, EncryptedParameterIsMarkedNotExecuted) {
  const auto& a = analyzed_->first("EncryptedParam.java");
  EXPECT_TRUE(a.resolved->encrypted_param);
  EXPECT_TRUE(a.resolved->candidates.empty());
  EXPECT_TRUE(a.resolved->has_rule(rule::kDecrypt));
}

TEST_F(FixtureResolution, TraceJustifiesEveryCandidate) {
  for (const auto& a : analyzed_->analyses) {
    if (!a.resolved || a.resolved->candidates.empty()) continue;
    ASSERT_FALSE(a.resolved->trace.empty()) << a.site->id;
    bool from_literal = std::any_of(a.resolved->trace.begin(), a.resolved->trace.end(), [](const TraceStep& t) {
      return t.rule == rule::kLiteral || t.rule == rule::kEnumConstant;
    });
    EXPECT_TRUE(from_literal) << a.site->id << " " << a.resolved->trace.front().rule;
    for (const auto& t : a.resolved->trace) {
      EXPECT_TRUE(a.site->unit->root().span.contains(t.span)) << a.site->id;
      EXPECT_GE(t.line, 1u);
    }
  }
}

TEST_F(FixtureResolution, FragmentsNeverBecomeCandidates) {
  for (const auto& a : analyzed_->analyses) {
    if (!a.resolved) continue;
    for (const auto& f : a.resolved->fragments) {
      EXPECT_EQ(std::count(a.resolved->candidates.begin(), a.resolved->candidates.end(), f), 0) << a.site->id;
    }
    EXPECT_TRUE(std::is_sorted(a.resolved->candidates.begin(), a.resolved->candidates.end()));
  }
}

TEST_F(FixtureResolution, BudgetMonotonicity) {
  for (const auto& a : analyzed_->analyses) {
    std::set<std::string> prev;
    for (int depth = 0; depth <= 4; ++depth) {
      ResolutionBudget b;
      b.max_indirection = std::max(depth, 1);
      b.max_steps = depth == 0 ? 5 : 10'000;
      auto r = resolve_site(*a.site, b);
      if (!r) break;
      std::set<std::string> now(r->candidates.begin(), r->candidates.end());
      EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end())) << a.site->id << " " << depth;
      prev = now;
    }
  }
}

TEST_F(FixtureResolution, ShallowBudgetReportsDepth) {
  const auto& a = analyzed_->first("XorMask.java");
  ResolutionBudget b;
  b.max_indirection = 1;
  auto r = resolve_site(*a.site, b);
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->has(Residual::kDepthExceeded));
  EXPECT_TRUE(r->candidates.empty());
}

TEST(Resolve, BudgetValidation) {
  ResolutionBudget b;
  EXPECT_NO_THROW(b.validate());
  b.max_candidates = 0;
  EXPECT_THROW(b.validate(), std::invalid_argument);
}

const ResolvedValue& only_value(const testing::Analyzed& a) {
  if (a.analyses.size() != 1 || !a.analyses[0].resolved) throw std::runtime_error("expected one resolved site");
  return *a.analyses[0].resolved;
}

TEST(Resolve, ParameterIsExternalInput) {
  auto a = analyze_source("class A { Object f(String t) throws Exception { return Cipher.getInstance(t); } }");
  const auto& r = only_value(a);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_TRUE(r.has(Residual::kExternalInput));
}

TEST(Resolve, StreamReadIsNetwork) {
  auto a = analyze_source(
      "class A { Object f(java.io.BufferedReader in) throws Exception {\n"
      "  String t = in.readLine();\n  return Cipher.getInstance(t); } }");
  const auto& r = only_value(a);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_TRUE(r.has(Residual::kNetwork));
}

TEST(Resolve, TernaryIsUnionOfBranches) {
  auto a = analyze_source(
      "class A { Object f(boolean x, boolean y) throws Exception {\n"
      "  String m = y ? \"ECB\" : \"CBC\";\n"
      "  return Cipher.getInstance(x ? \"AES/\" + m + \"/NoPadding\" : \"DES\"); } }");
  const auto& r = only_value(a);
  EXPECT_EQ(r.candidates, (std::vector<std::string>{"AES/CBC/NoPadding", "AES/ECB/NoPadding", "DES"}));
}

TEST(Resolve, CandidateCapOverflowsToDepthExceeded) {
  std::string src = "class A { Object f(boolean a, boolean b, boolean c, boolean d, boolean e) throws Exception {\n";
  src += "  return Cipher.getInstance((a ? \"1\" : \"2\") + (b ? \"1\" : \"2\") + (c ? \"1\" : \"2\") + "
         "(d ? \"1\" : \"2\") + (e ? \"1\" : \"2\")); } }";
  auto a = analyze_source(src);
  const auto& r = only_value(a);
  EXPECT_LE(r.candidates.size(), 16u);
  EXPECT_TRUE(r.has(Residual::kDepthExceeded));
}

TEST(Resolve, ConditionalAppendIsUnknown) {
  auto a = analyze_source(
      "class A { Object f(boolean x) throws Exception {\n"
      "  StringBuilder sb = new StringBuilder(\"AES\");\n"
      "  if (x) { sb.append(\"/ECB/NoPadding\"); }\n"
      "  return Cipher.getInstance(sb.toString()); } }");
  const auto& r = only_value(a);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_FALSE(r.residuals.empty());
}

TEST(Resolve, UnknownCallHasNoCandidates) {
  auto a = analyze_source("class A { Object f() throws Exception { return Cipher.getInstance(Config.load()); } }");
  const auto& r = only_value(a);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_TRUE(r.has(Residual::kUnknown));
}

TEST(Resolve, StringFormatWithLiterals) {
  auto a = analyze_source(
      "class A { Object f() throws Exception {\n"
      "  return Cipher.getInstance(String.format(\"%s/%s/%s\", \"AES\", \"ECB\", \"PKCS5Padding\")); } }");
  EXPECT_EQ(only_value(a).candidates, std::vector<std::string>{"AES/ECB/PKCS5Padding"});
}

TEST(RenderBytes, PrintableOrHex) {
  EXPECT_EQ(render_bytes("AES"), "AES");
  EXPECT_EQ(render_bytes(std::string("\x01\xfe", 2)), "hex:01fe");
}

}  // namespace
}  // namespace cryptolens
