#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "cryptolens/bench.h"
#include "cryptolens/rules.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using testing::analyze_dir;
using testing::analyze_source;
using testing::fixture;
using RuleIds = std::multiset<std::string>;

RuleIds ids_of(const std::vector<MisuseFinding>& fs) {
  RuleIds out;
  for (const auto& f : fs) out.insert(f.rule_id);
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Rule predicates restated over a split transformation, restricted to the
// algorithms the generator below draws from.
RuleIds oracle_rules(const std::string& algo, const std::string& mode, const std::string& pad) {
  const std::string a = upper(algo), m = upper(mode), p = upper(pad);
  const std::set<std::string> broken = {"DES", "DESEDE", "RC2", "RC4", "BLOWFISH", "IDEA"};
  RuleIds out;
  if (broken.count(a)) out.insert("R1");
  if (m == "ECB" && a != "RSA") out.insert("R3");
  if (m.empty() && !broken.count(a) && (a == "AES" || a == "RSA" || a == "AESWRAP" || a == "AESKWP")) {
    out.insert("R4");
  }
  if (m == "CBC" && (p == "PKCS5PADDING" || p == "PKCS7PADDING")) out.insert("R5");
  if (a == "RSA" && m == "ECB" && p == "PKCS1PADDING") out.insert("R6");
  return out;
}

std::string random_case(std::string s, std::mt19937_64& rng) {
  for (char& c : s) {
    if (rng() % 4 == 0) c = static_cast<char>(std::islower(static_cast<unsigned char>(c)) ? std::toupper(c) : std::tolower(c));
  }
  return s;
}

TEST(RestrictiveRules, LiteralTransformationsMatchOracle) {
  const std::vector<std::string> algos = {"DES", "DESede", "RC2",      "RC4",    "Blowfish", "IDEA",
                                          "AES", "RSA",    "AESWrap",  "AESKWP", "ChaCha20"};
  const std::vector<std::string> modes = {"", "ECB", "CBC", "GCM", "CTR", "CFB"};
  const std::vector<std::string> pads = {"", "NoPadding", "PKCS5Padding", "PKCS7Padding", "PKCS1Padding",
                                         "OAEPWithSHA-256AndMGF1Padding"};
  std::mt19937_64 rng(31);
  struct Case {
    std::string text;
    RuleIds expected;
  };
  std::vector<Case> cases;
  std::string src = "import javax.crypto.Cipher;\nclass Many {\n";
  for (int i = 0; i < 300; ++i) {
    std::string a = algos[rng() % algos.size()];
    std::string m = modes[rng() % modes.size()];
    std::string p = m.empty() ? "" : pads[rng() % pads.size()];
    std::string t = a + (m.empty() ? "" : "/" + m) + (p.empty() ? "" : "/" + p);
    t = random_case(t, rng);
    cases.push_back({t, oracle_rules(a, m, p)});
    src += "  Cipher m" + std::to_string(i) + "() throws Exception { return Cipher.getInstance(\"" + t + "\"); }\n";
  }
  src += "}\n";
  auto an = analyze_source(src, ApiSet::canonical());
  ASSERT_EQ(an.analyses.size(), cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& fs = an.analyses[i].findings;
    EXPECT_EQ(ids_of(fs), cases[i].expected) << cases[i].text;
    for (const auto& f : fs) {
      EXPECT_FALSE(f.evasive) << cases[i].text;
      ASSERT_TRUE(f.effective_value);
      EXPECT_EQ(*f.effective_value, cases[i].text);
      EXPECT_EQ(f.severity, RuleCatalog::builtin().find(f.rule_id)->severity);
    }
  }
}

struct Expect {
  RuleIds rules;
  std::string effective;  // of the first finding, empty for none
  bool evasive = false;
};

// Findings worked out by hand from each fixture's effective value and the
// rule list.
TEST(RestrictiveRules, Fixtures) {
  const std::map<std::string, Expect> expected = {
      {"PlainName.java", {{"R1"}, "Blowfish", false}},
      {"OidLiteral.java", {{"R2"}, "RC2", false}},
      {"GetterMethod.java", {{"R1"}, "DES", false}},
      {"ReplaceMarker.java", {{"R1"}, "DES", true}},
      {"Base64Split.java", {{"R1", "R5"}, "DES/CBC/PKCS5Padding", true}},
      {"CharAtArithmetic.java", {{"R3"}, "AES/ECB/NoPadding", true}},
      {"XorMask.java", {{"R3"}, "AES/ECB/PKCS5Padding", true}},
      {"XorBase64Helper.java", {{"R5"}, "AES/CBC/PKCS5Padding", true}},
      {"ByteLoop.java", {{"R4"}, "AES", true}},
      {"StringBufferAppend.java", {{"R1"}, "DESede/CBC/NoPadding", true}},
      {"StringBuilderFragments.java", {{"R3"}, "AES/ECB/PKCS7Padding", true}},
      {"SeparatorConstant.java", {{"R3"}, "AES/ECB/NoPadding", true}},
      {"ConcatField.java", {{"R3"}, "AES/ECB/PKCS5Padding", true}},
      {"EnumPayload.java", {{"R3"}, "AES/ECB/PKCS5Padding", false}},
      {"NestedConstant.java", {{"R3"}, "AES/ECB/PKCS5Padding", false}},
      {"ThisField.java", {{"R3"}, "AES/ECB/PKCS7Padding", false}},
      {"TernaryFlag.java", {{"R5"}, "AES/CBC/PKCS5Padding", false}},
      {"TernaryGetter.java", {{"R4"}, "AES", false}},
      {"NestedTernary.java", {{"R6"}, "RSA/ECB/PKCS1Padding", false}},
      {"NativeDirect.java", {{"R8"}, "", false}},
      {"NativeLocal.java", {{"R8"}, "", false}},
      {"NativeInstance.java", {{"R8"}, "", false}},
      {"LiteralKey.java", {{"K1"}, "oejkdirztefhnvscxhdmdzedfotuabje", false}},
  };
  auto a = analyze_dir(fixture("resolve"));
  for (const auto& [file, e] : expected) {
    const auto& s = a.first(file);
    EXPECT_EQ(ids_of(s.findings), e.rules) << file;
    if (s.findings.empty()) continue;
    const auto& f = s.findings.front();
    if (e.effective.empty()) {
      EXPECT_FALSE(f.effective_value) << file;
    } else {
      EXPECT_EQ(f.effective_value.value_or(""), e.effective) << file;
    }
    EXPECT_EQ(f.evasive, e.evasive) << file;
    EXPECT_GE(f.start_line, 1u);
    EXPECT_LE(f.start_line, f.end_line);
  }
}

TEST(RestrictiveRules, EncryptedParameterFile) {
  auto a = analyze_dir(fixture("resolve"));
  auto sites = a.in("EncryptedParam.java");
  ASSERT_EQ(sites.size(), 3u);
  EXPECT_EQ(ids_of(sites[0]->findings), (RuleIds{"R8"}));
  EXPECT_EQ(sites[0]->findings[0].severity, Severity::kInfo);
  EXPECT_FALSE(sites[0]->findings[0].evidence.empty());
  EXPECT_EQ(ids_of(sites[1]->findings), (RuleIds{"K1"}));
  // The GCM call is best practice.
  EXPECT_TRUE(sites[2]->findings.empty());
}

TEST(RestrictiveRules, Base64KeyIsHiddenKeyMaterial) {
  auto a = analyze_dir(fixture("resolve"));
  const auto& s = a.first("Base64Key.java");
  ASSERT_EQ(ids_of(s.findings), (RuleIds{"K1"}));
  EXPECT_TRUE(s.findings[0].evasive);
  EXPECT_EQ(s.findings[0].effective_value->rfind("hex:", 0), 0u);
  EXPECT_EQ(s.findings[0].effective_value->size(), 4u + 128u);
}

TEST(RestrictiveRules, SecureRandomKeyHasNoFinding) {
  auto a = analyze_source(
      "import javax.crypto.spec.SecretKeySpec; import java.security.SecureRandom;\n"
      "class K { SecretKeySpec f() { byte[] k = new byte[16]; new SecureRandom().nextBytes(k);\n"
      "  return new SecretKeySpec(k, \"AES\"); } }");
  ASSERT_EQ(a.analyses.size(), 1u);
  EXPECT_TRUE(a.analyses[0].findings.empty());
}

TEST(RestrictiveRules, EmptyArgumentDefaults) {
  auto a = analyze_source(
      "class E { void f() throws Exception {\n"
      "  javax.crypto.Cipher x = AESCipher.getInstance();\n"
      "  javax.crypto.Cipher y = BlockCipher.getInstance();\n} }",
      ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 2u);
  ASSERT_EQ(ids_of(a.analyses[0].findings), (RuleIds{"R7"}));
  EXPECT_EQ(a.analyses[0].findings[0].severity, Severity::kWarning);
  ASSERT_EQ(ids_of(a.analyses[1].findings), (RuleIds{"R7"}));
  EXPECT_EQ(a.analyses[1].findings[0].severity, Severity::kInfo);
}

TEST(RestrictiveRules, ExtraOidsExtendTheCatalog) {
  auto base = analyze_source("class O { Object f() throws Exception { return Cipher.getInstance(\"1.2.3.4.5\"); } }",
                             ApiSet::canonical());
  ASSERT_EQ(base.analyses.size(), 1u);
  EXPECT_TRUE(base.analyses[0].findings.empty());
  auto cat = RuleCatalog::with_extra_oids({{"1.2.3.4.5", "DES/CBC/NoPadding"}});
  const auto& s = base.analyses[0];
  auto fs = check_site(*s.site, &*s.resolved, s.labels, cat);
  ASSERT_EQ(ids_of(fs), (RuleIds{"R2"}));
  EXPECT_EQ(*fs[0].effective_value, "DES");
}

TEST(RestrictiveRules, MalformedTransformationIsReported) {
  auto a = analyze_source("class O { Object f() throws Exception { return Cipher.getInstance(\"AES//GCM/x/y\"); } }",
                          ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 1u);
  ASSERT_EQ(ids_of(a.analyses[0].findings), (RuleIds{"R9"}));
  EXPECT_EQ(a.analyses[0].findings[0].severity, Severity::kInfo);
}

TEST(RestrictiveRules, UnknownValueGetsNoFinding) {
  auto a = analyze_source(
      "class U { Object f(Helper h) throws Exception {\n"
      "  Cipher.getInstance(h.mode());\n"
      "  return Cipher.getInstance(Config.current().transformation());\n} }",
      ApiSet::canonical());
  ASSERT_EQ(a.analyses.size(), 2u);
  for (const auto& s : a.analyses) {
    ASSERT_TRUE(s.resolved);
    EXPECT_TRUE(s.resolved->candidates.empty());
    EXPECT_TRUE(s.findings.empty()) << s.site->id;
  }
}

TEST(Transformation, Parse) {
  auto t = parse_transformation(" aes/gcm/NoPadding ");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->algorithm, "AES");
  EXPECT_EQ(t->mode, "GCM");
  EXPECT_EQ(t->padding, "NOPADDING");
  t = parse_transformation("DES");
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->mode.empty());
  EXPECT_TRUE(t->padding.empty());
  EXPECT_FALSE(parse_transformation(""));
  EXPECT_FALSE(parse_transformation("AES/"));
  EXPECT_FALSE(parse_transformation("A/B/C/D"));
  EXPECT_TRUE(is_broken_cipher("desede"));
  EXPECT_FALSE(is_broken_cipher("AES"));
}

TEST(FlexibleRules, Fixtures) {
  const std::map<std::string, RuleIds> expected = {
      {"EmptyBody.java", {"F1"}},        {"LogOnly.java", {"F2"}},
      {"ClientDelegate.java", {"F3"}},   {"ValidityOnly.java", {"F4"}},
      {"SubjectContains.java", {"F6", "F8"}}, {"Sha1Fingerprint.java", {"F7", "F8"}},
      {"NativeDelegate.java", {}},
  };
  auto a = analyze_dir(fixture("flexible"));
  for (const auto& [file, rules] : expected) {
    const auto& s = a.first(file);
    EXPECT_EQ(ids_of(s.findings), rules) << file;
    for (const auto& f : s.findings) {
      EXPECT_FALSE(f.effective_value);
      EXPECT_FALSE(f.evasive);
    }
  }
}

std::string trust_manager(const std::string& body, const std::string& extra = "") {
  return "import java.security.cert.*;\nimport javax.net.ssl.*;\n"
         "class T implements X509TrustManager {\n"
         "  public void checkServerTrusted(X509Certificate[] chain, String authType) throws CertificateException {\n" +
         body + "\n  }\n" + extra + "}\n";
}

RuleIds flex_rules(const std::string& src) {
  auto a = analyze_source(src, ApiSet::canonical());
  if (a.analyses.size() != 1) throw std::runtime_error("expected one site");
  return ids_of(a.analyses[0].findings);
}

TEST(FlexibleRules, ProperValidationHasNoFinding) {
  EXPECT_EQ(flex_rules(trust_manager(
                "    CertificateFactory cf = CertificateFactory.getInstance(\"X.509\");\n"
                "    CertPath path = cf.generateCertPath(java.util.Arrays.asList(chain));\n"
                "    CertPathValidator v = CertPathValidator.getInstance(\"PKIX\");\n"
                "    try { v.validate(path, params); } catch (Exception e) { throw new CertificateException(e); }\n"
                "    chain[0].verify(rootKey);")),
            RuleIds{});
}

TEST(FlexibleRules, IsTrustedAndIneffectualBodies) {
  EXPECT_EQ(flex_rules(trust_manager("    if (!isTrusted(chain)) throw new CertificateException();")),
            (RuleIds{"F5"}));
  EXPECT_EQ(flex_rules(trust_manager("    throw new CertificateException(\"nope\");")), (RuleIds{"F10"}));
  EXPECT_EQ(flex_rules(trust_manager("    return;")), (RuleIds{"F10"}));
}

TEST(FlexibleRules, AcceptAllHostnameVerifier) {
  auto a = analyze_source(
      "class H implements javax.net.ssl.HostnameVerifier {\n"
      "  public boolean verify(String host, javax.net.ssl.SSLSession s) { return true; }\n}",
      ApiSet::all_builtin());
  ASSERT_EQ(a.analyses.size(), 1u);
  EXPECT_TRUE(a.analyses[0].labels.unknown());
  EXPECT_EQ(ids_of(a.analyses[0].findings), (RuleIds{"F10"}));
}

TEST(FlexibleRules, AbstractDeclaration) {
  auto rules = flex_rules(
      "abstract class A implements javax.net.ssl.X509TrustManager {\n"
      "  public abstract void checkServerTrusted(java.security.cert.X509Certificate[] c, String t);\n}");
  EXPECT_EQ(rules, (RuleIds{"F9"}));
}

TEST(Findings, EvasiveFlagIsSoundEverywhere) {
  testing::TempDir bench;
  generate_corpus(bench.path(), 7);
  for (const auto& dir : {fixture("resolve"), fixture("flexible"), bench.path()}) {
    auto a = analyze_dir(dir);
    for (const auto& s : a.analyses) {
      auto visible = visible_literals(*s.site, s.resolved ? &*s.resolved : nullptr);
      for (const auto& f : s.findings) {
        if (!f.evasive) continue;
        ASSERT_TRUE(f.effective_value) << s.site->id;
        EXPECT_EQ(visible.count(*f.effective_value), 0u) << s.site->id << " " << *f.effective_value;
      }
      // No finding from a value the resolver knows nothing about.
      if (s.resolved && s.resolved->candidates.empty() &&
          s.resolved->residuals == std::set<Residual>{Residual::kUnknown}) {
        for (const auto& f : s.findings) EXPECT_TRUE(f.rule_id == "R8" || f.rule_id == "F9") << s.site->id;
      }
      if (s.labels.unknown()) {
        for (const auto& f : s.findings) EXPECT_EQ(f.rule_id, "F10") << s.site->id;
      }
      // Pure: a second evaluation gives the same findings.
      auto again = check_site(*s.site, s.resolved ? &*s.resolved : nullptr, s.labels);
      ASSERT_EQ(again.size(), s.findings.size());
      for (std::size_t i = 0; i < again.size(); ++i) {
        EXPECT_EQ(again[i].rule_id, s.findings[i].rule_id);
        EXPECT_EQ(again[i].effective_value, s.findings[i].effective_value);
        EXPECT_EQ(again[i].evasive, s.findings[i].evasive);
      }
    }
  }
}

TEST(Catalog, JsonDocument) {
  const auto& c = RuleCatalog::builtin();
  auto j = nlohmann::json::parse(c.to_json());
  EXPECT_EQ(j["version"], 1);
  std::set<std::string> ids;
  for (const auto& r : j["rules"]) {
    EXPECT_TRUE(ids.insert(r["id"].get<std::string>()).second) << r["id"];
    EXPECT_TRUE(parse_severity(r["severity"].get<std::string>()));
  }
  for (int i = 1; i <= 8; ++i) EXPECT_TRUE(ids.count("R" + std::to_string(i)));
  for (int i = 1; i <= 10; ++i) EXPECT_TRUE(ids.count("F" + std::to_string(i)));
  EXPECT_EQ(j["oids"]["1.2.840.113549.3.2"], "RC2");
  EXPECT_EQ(j["oids"]["1.2.840.113549.3.7"].get<std::string>().substr(0, 6), "DESede");
  EXPECT_EQ(j["oids"]["2.16.840.1.101.3.4.1.6"], "AES/GCM/NoPadding");
  EXPECT_EQ(c.find("R3")->severity, Severity::kError);
  EXPECT_EQ(c.find("R5")->severity, Severity::kWarning);
  EXPECT_EQ(c.find("R8")->severity, Severity::kInfo);
  EXPECT_EQ(c.find("nope"), nullptr);
}

TEST(Severity, Names) {
  for (Severity s : {Severity::kInfo, Severity::kWarning, Severity::kError}) {
    EXPECT_EQ(parse_severity(to_string(s)), s);
  }
  EXPECT_FALSE(parse_severity("FATAL"));
}

}  // namespace
}  // namespace cryptolens
