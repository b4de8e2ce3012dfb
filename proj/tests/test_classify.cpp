#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "cryptolens/bench.h"
#include "cryptolens/classify.h"
#include "cryptolens/report.h"
#include "test_support.h"
#include "ts_oracle.h"

namespace cryptolens {
namespace {

using testing::analyze_dir;
using testing::analyze_source;
using testing::fixture;
using Labels = std::set<std::string>;

// Closed label sets, copied by hand from the taxonomy tables.
const Labels kRestrictive = {"STROP", "TEROP", "ENUM",   "ID",     "THIS", "METHOD", "STATIC", "NATIVE",
                             "BAS64", "STRBUF", "CONCT", "SEPRT", "OID",  "STRING", "EMPTY"};
const Labels kFlexible = {"ABS",  "NATIVD", "ILL",   "CEXP",   "NEXP",   "LOG",    "NATIVE", "METHOD",
                          "THIS", "ISTRST", "VAL",   "LEN",    "NULL",   "LIST",   "CERFAC", "VER",
                          "STROP", "AUTH",  "ENCOD", "ARR",    "BIGINT", "TMFAC",  "GETPUB", "GETISR",
                          "GETSUB", "HASH", "CERPAT", "PKIX",  "CLIENT", "EMPTY"};

TEST(LabelCatalog, ClosedSets) {
  EXPECT_EQ(Labels(restrictive_labels().begin(), restrictive_labels().end()), kRestrictive);
  EXPECT_EQ(Labels(flexible_labels().begin(), flexible_labels().end()), kFlexible);
  EXPECT_EQ(restrictive_labels().size(), 15u);
  EXPECT_EQ(flexible_labels().size(), 30u);
  EXPECT_TRUE(is_label("BAS64", ApiCategory::kRestrictive));
  EXPECT_FALSE(is_label("BAS64", ApiCategory::kFlexible));
  EXPECT_TRUE(is_label("GETSUB", ApiCategory::kFlexible));
  EXPECT_FALSE(is_label(kUnknownApi, ApiCategory::kRestrictive));
}

// Expected labels read off each fixture's source by hand.
TEST(ClassifyFixtures, Flexible) {
  const std::map<std::string, Labels> expected = {
      {"NativeDelegate.java", {"NATIVE"}},
      {"ValidityOnly.java", {"VAL"}},
      {"LogOnly.java", {"LOG"}},
      {"SubjectContains.java", {"CEXP", "STROP", "GETSUB"}},
      {"Sha1Fingerprint.java", {"CEXP", "STROP", "ENCOD", "HASH"}},
      {"EmptyBody.java", {"EMPTY"}},
      {"ClientDelegate.java", {"METHOD", "CLIENT"}},
  };
  auto a = analyze_dir(fixture("flexible"));
  ASSERT_EQ(a.analyses.size(), expected.size());
  for (const auto& [file, labels] : expected) {
    const auto& s = a.first(file);
    EXPECT_EQ(s.labels.category, ApiCategory::kFlexible) << file;
    EXPECT_EQ(s.labels.labels, labels) << file;
  }
}

TEST(ClassifyFixtures, Restrictive) {
  const std::map<std::string, Labels> expected = {
      {"PlainName.java", {"STRING"}},
      {"OidLiteral.java", {"STRING", "OID"}},
      {"StringBufferAppend.java", {"STRBUF", "ID"}},
      {"StringBuilderFragments.java", {"STRBUF", "ID"}},
      {"Base64Split.java", {"BAS64"}},
      {"CharAtArithmetic.java", {"CONCT", "STROP"}},
      {"ReplaceMarker.java", {"STROP"}},
      {"NativeDirect.java", {"NATIVE"}},
      {"NativeLocal.java", {"ID", "NATIVE"}},
      {"TernaryFlag.java", {"TEROP"}},
      {"NestedTernary.java", {"TEROP", "THIS"}},
      {"EnumPayload.java", {"ENUM", "ID"}},
      {"ThisField.java", {"THIS", "ID"}},
      {"GetterMethod.java", {"METHOD"}},
      {"NestedConstant.java", {"STATIC"}},
      {"ConcatField.java", {"CONCT", "STATIC"}},
      {"SeparatorConstant.java", {"CONCT", "ID", "SEPRT", "STATIC"}},
      {"XorBase64Helper.java", {"BAS64", "ID", "METHOD"}},
  };
  auto a = analyze_dir(fixture("resolve"));
  for (const auto& [file, labels] : expected) {
    EXPECT_EQ(a.first(file).labels.labels, labels) << file;
  }
}

TEST(ClassifyExamples, CanonicalRestrictive) {
  auto check = [](const std::string& arg, const Labels& labels) {
    auto a = analyze_source("import javax.crypto.Cipher;\nclass A { Cipher f() throws Exception { return Cipher.getInstance(" +
                                arg + "); } }",
                            ApiSet::canonical());
    ASSERT_EQ(a.analyses.size(), 1u) << arg;
    EXPECT_EQ(a.analyses[0].labels.labels, labels) << arg;
  };
  check("\"DES\"", {"STRING"});
  check("\"1.2.840.113549.3.2\"", {"STRING", "OID"});
  check("", {"EMPTY"});
}

TEST(ClassifyExamples, EmptyFlexibleBody) {
  auto a = analyze_source(
      "class T implements javax.net.ssl.X509TrustManager {\n"
      "  public void checkServerTrusted(java.security.cert.X509Certificate[] c, String t) {}\n}",
      ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 1u);
  EXPECT_EQ(a.analyses[0].labels.labels, (Labels{"EMPTY"}));
  EXPECT_FALSE(a.analyses[0].labels.composite());
}

TEST(ClassifyExamples, UnmatchedSiteIsUnknown) {
  // A body with a plain local computation matches no predicate.
  auto a = analyze_source(
      "class T implements javax.net.ssl.X509TrustManager {\n"
      "  public void checkServerTrusted(java.security.cert.X509Certificate[] c, String t) { int x = 1; }\n}",
      ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 1u);
  EXPECT_EQ(a.analyses[0].labels.labels, (Labels{std::string(kUnknownApi)}));
  EXPECT_TRUE(a.analyses[0].findings.empty());
}

TEST(CompositeName, CatalogOrder) {
  LabelSet s;
  s.labels = {"METHOD", "ID"};
  EXPECT_EQ(composite_name(s), "ID+METHOD");
  s.labels = {"OID", "STRING"};
  EXPECT_EQ(composite_name(s), "STRING/OID");
  s.category = ApiCategory::kFlexible;
  s.labels = {"AUTH", "LEN"};
  EXPECT_EQ(composite_name(s), "LEN/AUTH");
  s.labels = {"CLIENT", "METHOD"};
  EXPECT_EQ(composite_name(s), "METHOD+CLIENT");
}

// Bench corpus written once for the whole suite.
class BenchCorpus : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    cases_ = new std::vector<BenchmarkCase>(generate_corpus(dir_->path(), 7));
    analyzed_ = new testing::Analyzed(analyze_dir(dir_->path(), ApiSet::canonical()));
  }
  static void TearDownTestSuite() {
    delete analyzed_;
    delete cases_;
    delete dir_;
  }
  static testing::TempDir* dir_;
  static std::vector<BenchmarkCase>* cases_;
  static testing::Analyzed* analyzed_;
};
testing::TempDir* BenchCorpus::dir_ = nullptr;
std::vector<BenchmarkCase>* BenchCorpus::cases_ = nullptr;
testing::Analyzed* BenchCorpus::analyzed_ = nullptr;

TEST_F(BenchCorpus, TotalityAndCategoryClosure) {
  ASSERT_FALSE(analyzed_->analyses.empty());
  for (const auto& a : analyzed_->analyses) {
    ASSERT_FALSE(a.labels.labels.empty()) << a.site->id;
    EXPECT_EQ(a.labels.category, a.site->category());
    EXPECT_EQ(a.labels.composite(), a.labels.labels.size() > 1);
    const Labels& closed = a.site->category() == ApiCategory::kRestrictive ? kRestrictive : kFlexible;
    for (const auto& l : a.labels.labels) {
      EXPECT_TRUE(closed.count(l) || l == kUnknownApi) << a.site->id << " " << l;
    }
    if (a.labels.unknown()) EXPECT_EQ(a.labels.labels.size(), 1u);
  }
}

TEST_F(BenchCorpus, EmptyIffZeroNodes) {
  for (const auto& a : analyzed_->analyses) {
    EXPECT_EQ(a.labels.has("EMPTY"), a.d == 0) << a.site->id;
  }
}

TEST_F(BenchCorpus, SignatureMatchesRawParserHistogram) {
  for (const auto& a : analyzed_->analyses) {
    auto sig = signature_of(*a.site);
    EXPECT_EQ(sig, a.signature);
    std::size_t total = 0;
    for (const auto& [k, c] : sig) {
      EXPECT_GT(c, 0u);
      total += c;
    }
    EXPECT_EQ(total, a.d) << a.site->id;
    if (a.site->category() == ApiCategory::kRestrictive) {
      auto raw = testing::raw_argument_kinds(a.site->unit->text(), a.site->offset());
      EXPECT_EQ(sig, ArgumentSignature(raw.begin(), raw.end())) << a.site->id;
    }
  }
}

// Oracle for the three-identifier ternary pattern: a regular expression on
// the call text plus the variant's declared labels.
TEST_F(BenchCorpus, TernaryIdentifierSignatureRetrievesExactlyThoseVariants) {
  const std::regex shape(R"(getInstance\(\s*[A-Za-z_]\w*\s*\?\s*[A-Za-z_]\w*\s*:\s*[A-Za-z_]\w*\s*\))");
  std::set<std::string> oracle;
  for (const auto& a : analyzed_->analyses) {
    const auto& text = a.site->unit->text();
    std::size_t end = text.find(';', a.site->offset());
    std::string call = text.substr(a.site->offset(), end - a.site->offset());
    if (std::regex_search(call, shape)) oracle.insert(a.site->id);
  }
  std::set<std::string> declared;
  for (const auto& c : *cases_) {
    for (const auto& v : c.variants) {
      if (std::count(v.labels.begin(), v.labels.end(), "TEROP") && v.source.find("? \"") == std::string::npos) {
        for (const auto* a : analyzed_->in(v.file)) declared.insert(a->site->id);
      }
    }
  }
  auto got = match_signature(analyzed_->scan.sites, parse_signature("{identifier:3, ternary_expression:1}"));
  EXPECT_FALSE(got.empty());
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), oracle);
  EXPECT_EQ(oracle, declared);
  EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
  // Lower bound: everything retrieved carries the ternary label.
  for (const auto& id : got) {
    auto it = std::find_if(analyzed_->analyses.begin(), analyzed_->analyses.end(),
                           [&](const SiteAnalysis& a) { return a.site->id == id; });
    ASSERT_NE(it, analyzed_->analyses.end());
    EXPECT_TRUE(it->labels.has("TEROP"));
  }
}

TEST_F(BenchCorpus, EmptyPatternRetrievesEmptySites) {
  auto got = match_signature(analyzed_->scan.sites, {});
  std::set<std::string> empty_sites;
  for (const auto& a : analyzed_->analyses) {
    if (a.labels.has("EMPTY")) empty_sites.insert(a.site->id);
  }
  EXPECT_FALSE(empty_sites.empty());
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), empty_sites);
}

TEST_F(BenchCorpus, PrevalenceHasARowForEveryGeneratedLabel) {
  std::vector<LabelSet> sets;
  for (const auto& a : analyzed_->analyses) sets.push_back(a.labels);
  auto rows = prevalence_report(sets);
  ASSERT_EQ(rows.size(), 15u + 1u + 30u + 1u);
  std::map<std::pair<std::string, std::string>, std::size_t> count;
  for (const auto& r : rows) count[{r.category, r.label}] = r.count;
  for (const auto& c : *cases_) {
    std::string cat(to_string(c.category));
    for (const auto& v : c.variants) {
      for (const auto& l : v.labels) EXPECT_GT((count[{cat, l}]), 0u) << c.case_id << " " << l;
    }
  }
  // Counts are of sites.
  std::size_t sum_restrictive = 0;
  for (const auto& r : rows) {
    if (r.category == "restrictive") sum_restrictive += r.count;
  }
  std::size_t label_instances = 0;
  for (const auto& s : sets) {
    if (s.category == ApiCategory::kRestrictive) label_instances += s.labels.size();
  }
  EXPECT_EQ(sum_restrictive, label_instances);
}

TEST(Signature, Examples) {
  auto sig_of = [](const std::string& arg) {
    auto a = analyze_source(
        "class A { Object f(boolean z2) throws Exception { return Cipher.getInstance(" + arg + "); } }",
        ApiSet::canonical());
    return a.analyses.at(0).signature;
  };
  EXPECT_EQ(to_string(sig_of("z2 ? CBC_PADDING : CBC_NOPADDING")), "{identifier:3, ternary_expression:1}");
  EXPECT_EQ(to_string(sig_of("\"AES\"")), "{string_literal:1}");
  EXPECT_EQ(to_string(sig_of("")), "{}");
  // Same kind shape, different names and literals.
  EXPECT_EQ(sig_of("a ? b : c"), sig_of("flag ? X_MODE : Y_MODE"));
  EXPECT_EQ(sig_of("\"DES\" + x"), sig_of("\"AES/GCM/NoPadding\" + yy"));
}

TEST(MatchSignature, SingleLiteralSite) {
  auto a = analyze_source(
      "class A { void f(String m) throws Exception {\n"
      "  Cipher.getInstance(\"AES\");\n  Cipher.getInstance(m);\n  Cipher.getInstance(m + \"x\");\n} }",
      ApiSet::canonical());
  ASSERT_EQ(a.scan.sites.size(), 3u);
  auto got = match_signature(a.scan.sites, {{"string_literal", 1}});
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], a.scan.sites[0].id);
}

TEST(Prevalence, ThreeEmptyFlexibleSites) {
  std::vector<LabelSet> sets(3);
  for (auto& s : sets) {
    s.category = ApiCategory::kFlexible;
    s.labels = {"EMPTY"};
  }
  auto rows = prevalence_report(sets);
  for (const auto& r : rows) {
    std::size_t want = (r.category == "flexible" && r.label == "EMPTY") ? 3 : 0;
    EXPECT_EQ(r.count, want) << r.category << " " << r.label;
  }
  auto csv = prevalence_csv(rows);
  EXPECT_NE(csv.find("flexible"), std::string::npos);
  EXPECT_NE(csv.find("EMPTY"), std::string::npos);
}

TEST(Prevalence, SingleStringBufferSite) {
  auto a = analyze_dir(fixture("resolve"));
  std::vector<LabelSet> sets = {a.first("StringBufferAppend.java").labels};
  for (const auto& r : prevalence_report(sets)) {
    if (r.category == "restrictive" && r.label == "STRBUF") EXPECT_EQ(r.count, 1u);
  }
}

}  // namespace
}  // namespace cryptolens
