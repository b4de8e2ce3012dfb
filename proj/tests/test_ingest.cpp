#include <gtest/gtest.h>

#include <algorithm>

#include "cryptolens/ingest.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using testing::spit;
using testing::TempDir;

const char* kMixed = R"J(import javax.crypto.Cipher;
import javax.crypto.spec.SecretKeySpec;
import javax.net.ssl.X509TrustManager;
import java.security.cert.X509Certificate;

class Mixed {
    Cipher a() throws Exception { return Cipher.getInstance("DES"); }
    Cipher b() throws Exception { return javax.crypto.Cipher.getInstance("AES/GCM/NoPadding"); }
    SecretKeySpec k() { return new SecretKeySpec(new byte[16], "AES"); }
    X509TrustManager tm() {
        return new X509TrustManager() {
            public void checkServerTrusted(X509Certificate[] chain, String authType) {}
            public void checkClientTrusted(X509Certificate[] chain, String authType) {}
            public X509Certificate[] getAcceptedIssuers() { return null; }
        };
    }
    void other() { String s = "Cipher.getInstance(\"DES\")"; helper.getInstance("x"); }
}
)J";

TEST(Extract, CanonicalApisOnly) {
  auto unit = parse_unit("Mixed.java", kMixed);
  auto sites = extract_sites(unit, ApiSet::canonical());
  ASSERT_EQ(sites.size(), 3u);
  EXPECT_EQ(sites[0].api, ApiKind::kCipherGetInstance);
  EXPECT_EQ(sites[1].api, ApiKind::kCipherGetInstance);
  EXPECT_EQ(sites[2].api, ApiKind::kCheckServerTrusted);
  EXPECT_EQ(sites[2].category(), ApiCategory::kFlexible);
  for (const auto& s : sites) EXPECT_EQ(s.id, "Mixed.java:" + std::to_string(s.offset()));
  EXPECT_EQ(sites[0].enclosing_class, "Mixed");
  // Anonymous classes are named after the type they instantiate.
  EXPECT_EQ(sites[2].enclosing_class, "Mixed$X509TrustManager");
  EXPECT_EQ(sites[0].enclosing_method.value_or(""), "a");
  EXPECT_TRUE(std::is_sorted(sites.begin(), sites.end(),
                             [](const InvocationSite& x, const InvocationSite& y) { return x.offset() < y.offset(); }));
}

TEST(Extract, AllBuiltinAddsKeySpec) {
  auto unit = parse_unit("Mixed.java", kMixed);
  auto sites = extract_sites(unit, ApiSet::all_builtin());
  ASSERT_EQ(sites.size(), 4u);
  EXPECT_TRUE(std::any_of(sites.begin(), sites.end(),
                          [](const InvocationSite& s) { return s.api == ApiKind::kSecretKeySpec; }));
}

TEST(Extract, SubtreeIsArgumentListOrBody) {
  auto unit = parse_unit("Mixed.java", kMixed);
  for (const auto& s : extract_sites(unit, ApiSet::canonical())) {
    ASSERT_NE(s.subtree, nullptr);
    EXPECT_EQ(s.subtree->kind, s.category() == ApiCategory::kRestrictive ? "argument_list" : "block");
    EXPECT_TRUE(s.node->span.contains(s.subtree->span));
  }
}

TEST(Extract, CustomSignatures) {
  const char* src = R"(class C {
    void a() { KeyStoreHelper.loadKey("x"); other.loadKey("y"); }
    boolean verifyChain(Object chain, String host) { return true; }
    boolean verifyChain(Object chain) { return true; }
})";
  ApiSet apis;
  apis.extra.push_back(ApiSignature::parse("com.example.KeyStoreHelper.loadKey"));
  apis.extra.push_back(ApiSignature::parse("verifyChain(2)"));
  apis.kinds = {ApiKind::kCustomRestrictive, ApiKind::kCustomFlexible};
  auto sites = extract_sites(parse_unit("C.java", src), apis);
  ASSERT_EQ(sites.size(), 2u);
  EXPECT_EQ(sites[0].api, ApiKind::kCustomRestrictive);
  EXPECT_EQ(sites[0].signature, "KeyStoreHelper.loadKey");
  EXPECT_EQ(sites[1].api, ApiKind::kCustomFlexible);
  EXPECT_EQ(sites[1].signature, "verifyChain(2)");
}

TEST(ApiSignatureParse, Forms) {
  auto a = ApiSignature::parse(" Cipher.getInstance ");
  EXPECT_EQ(a.kind, ApiKind::kCustomRestrictive);
  EXPECT_EQ(a.receiver, "Cipher");
  EXPECT_EQ(a.method, "getInstance");
  EXPECT_EQ(a.to_string(), "Cipher.getInstance");
  auto b = ApiSignature::parse("checkServerTrusted(2)");
  EXPECT_EQ(b.kind, ApiKind::kCustomFlexible);
  EXPECT_EQ(b.arity, 2);
  EXPECT_EQ(b.to_string(), "checkServerTrusted(2)");
  for (const char* bad : {"", "noDot", "a.b(", "m(x)", "m()", ".m", "a b.c"}) {
    EXPECT_THROW(ApiSignature::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(ApiKindNames, RoundTrip) {
  for (ApiKind k : {ApiKind::kCipherGetInstance, ApiKind::kSecretKeySpec, ApiKind::kCheckServerTrusted,
                    ApiKind::kHostnameVerifier}) {
    EXPECT_EQ(parse_api_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_api_kind("Cipher.getInstance"), ApiKind::kCipherGetInstance);
  EXPECT_FALSE(parse_api_kind("nothing"));
  EXPECT_EQ(category_of(ApiKind::kHostnameVerifier), ApiCategory::kFlexible);
  EXPECT_EQ(category_of(ApiKind::kSecretKeySpec), ApiCategory::kRestrictive);
}

TEST(ScanCorpus, OrderWarningsAndFilter) {
  TempDir dir;
  spit(dir.path() / "b/B.java", "class B { void f() throws Exception { javax.crypto.Cipher.getInstance(\"DES\"); } }");
  spit(dir.path() / "a/A.java",
       "class A { void f() throws Exception { Cipher.getInstance(\"RC4\"); Cipher.getInstance(\"AES\"); } }");
  spit(dir.path() / "a/readme.txt", "Cipher.getInstance(\"DES\")");
  spit(dir.path() / "broken/Bad.java", std::string("\x01\x02 }}}} ((((", 13));
  auto r = scan_corpus(dir.path(), ApiSet::canonical());
  std::vector<std::string> paths;
  for (const auto& s : r.sites) paths.push_back(s.path());
  ASSERT_EQ(r.sites.size(), 3u);
  EXPECT_EQ(paths, (std::vector<std::string>{"a/A.java", "a/A.java", "b/B.java"}));
  EXPECT_LT(r.sites[0].offset(), r.sites[1].offset());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].path, "broken/Bad.java");
  EXPECT_EQ(r.units.size(), 2u);  // the unparseable file only produces a warning
}

TEST(ScanCorpus, JobsDoNotChangeResult) {
  TempDir dir;
  for (int i = 0; i < 30; ++i) {
    spit(dir.path() / ("p" + std::to_string(i % 4)) / ("F" + std::to_string(i) + ".java"),
         "class F" + std::to_string(i) + " { void f() throws Exception { Cipher.getInstance(\"DES\"); " +
             std::string(i % 3, ' ') + "Cipher.getInstance(\"AES\"); } }");
  }
  auto one = scan_corpus(dir.path(), ApiSet::canonical(), 1);
  auto many = scan_corpus(dir.path(), ApiSet::canonical(), 8);
  ASSERT_EQ(one.sites.size(), 60u);
  ASSERT_EQ(one.sites.size(), many.sites.size());
  for (std::size_t i = 0; i < one.sites.size(); ++i) EXPECT_EQ(one.sites[i].id, many.sites[i].id);
}

TEST(ScanCorpus, MissingDirectoryIsFatal) {
  EXPECT_THROW(scan_corpus("/nonexistent/cryptolens/dir", ApiSet::canonical()), IoError);
}

TEST(ScanCorpus, EmptyDirectory) {
  TempDir dir;
  auto r = scan_corpus(dir.path(), ApiSet::canonical());
  EXPECT_TRUE(r.sites.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Parse, NormalizedTreeHasNamedNodesOnly) {
  auto unit = parse_unit("X.java", "class X { int f() { return (1 + 2); } }");
  ASSERT_FALSE(unit->parse_failed());
  unit->root().walk([](const SyntaxNode& n) {
    EXPECT_FALSE(is_anonymous_token_kind(n.kind)) << n.kind;
    for (const auto& c : n.children) EXPECT_EQ(c.parent, &n);
  });
}

}  // namespace
}  // namespace cryptolens
