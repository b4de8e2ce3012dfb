#include "bench_templates.h"

namespace cryptolens::detail {

namespace {

constexpr auto kF = ApiCategory::kFlexible;

struct Params {
  std::string chain, auth;
};

Params pick_params(Rng& rng) {
  static const std::vector<Params> kParams = {{"x509CertificateArr", "str"}, {"chain", "authType"},
                                              {"certs", "s"}};
  return rng.pick(kParams);
}

struct FlexSpec {
  std::string role;
  std::vector<std::string> imports;
  std::vector<std::string> members;  // before checkServerTrusted
  std::vector<std::string> body;     // statements, already indented
  std::vector<std::string> helpers;  // after getAcceptedIssuers
  std::vector<std::string> labels;
  std::vector<std::string> rules;
  std::string note;
  bool throws = true;
};

// A complete X509TrustManager around the given checkServerTrusted body.
BenchVariant flex_variant(const BenchmarkCase& c, Rng& rng, const Params& p, FlexSpec spec) {
  std::string cls = class_name(rng, spec.role);
  std::vector<std::string> imports = {"java.security.cert.CertificateException",
                                      "java.security.cert.X509Certificate", "javax.net.ssl.X509TrustManager"};
  imports.insert(imports.begin(), spec.imports.begin(), spec.imports.end());
  Src s;
  open_class(s, imports, cls, "X509TrustManager");
  for (const auto& m : spec.members) s << m;
  if (!spec.members.empty()) s << "";
  s << "    public void checkClientTrusted(X509Certificate[] " + p.chain + ", String " + p.auth +
           ") throws CertificateException {"
    << "    }" << "";
  auto start = s.next_line();
  std::string head = "    public void checkServerTrusted(X509Certificate[] " + p.chain + ", String " + p.auth + ")";
  if (spec.throws) head += " throws CertificateException";
  s << head + " {";
  for (const auto& b : spec.body) s << b;
  s << "    }";
  auto end = s.last_line();
  s << "" << "    public X509Certificate[] getAcceptedIssuers() {" << "        return new X509Certificate[0];"
    << "    }";
  if (!spec.helpers.empty()) s << "";
  for (const auto& h : spec.helpers) s << h;
  s << "}";
  std::vector<ExpectedFinding> expected;
  for (const auto& r : spec.rules) expected.push_back(expect(r, start, end));
  return make_variant(c.dir, cls, s, spec.note, spec.labels, std::move(expected));
}

BenchmarkCase flex_case(std::uint64_t seed, std::size_t index, FlexSpec spec,
                        std::vector<std::string> (*body)(const Params&, Rng&)) {
  Rng rng = case_rng(seed, index);
  BenchmarkCase c = new_case(index, kF);
  Params p = pick_params(rng);
  if (body != nullptr) spec.body = body(p, rng);
  c.variants.push_back(flex_variant(c, rng, p, std::move(spec)));
  return c;
}

std::string pick_dn(Rng& rng) {
  static const std::vector<std::string> kDn = {
      "CN=api.example.com, OU=Engineering, O=Example Corp, L=Springfield, ST=IL, C=US",
      "EMAIL ADDRESS=ops@example.org, CN=Gateway Ultra, OU=Devices, O=Example Devices, C=US",
      "CN=sync.example.net, O=Example Networks, C=DE"};
  return rng.pick(kDn);
}

}  // namespace

std::vector<BenchmarkCase> flexible_cases(std::uint64_t seed) {
  std::vector<BenchmarkCase> out;
  out.push_back(flex_case(seed, 14, {"EmptyTrust", {}, {}, {}, {}, {"EMPTY"}, {"F1"}, "empty body"}, nullptr));
  out.push_back(flex_case(
      seed, 15,
      {"LogTrust", {"android.util.Log"}, {"    private static final String TAG = \"TcpClient\";"}, {}, {},
       {"LOG"}, {"F2"}, "logs every certificate", false},
      [](const Params& p, Rng&) -> std::vector<std::string> {
        return {"        for (X509Certificate x509Certificate : " + p.chain + ") {",
                "            Log.e(TAG, \"Certificate:\" + x509Certificate);", "        }"};
      }));
  out.push_back(flex_case(
      seed, 16, {"ClientTrust", {}, {}, {}, {}, {"CLIENT", "METHOD"}, {"F3"}, "delegates to an empty checkClientTrusted"},
      [](const Params& p, Rng&) -> std::vector<std::string> {
        return {"        try {", "            checkClientTrusted(" + p.chain + ", " + p.auth + ");",
                "        } catch (Exception e10) {",
                "            throw new CertificateException(\"Certificate not trusted. It has expired\", e10);",
                "        }"};
      }));
  out.push_back(flex_case(seed, 17, {"ExpiryTrust", {}, {}, {}, {}, {"VAL"}, {"F4"}, "validity period only"},
                          [](const Params& p, Rng&) -> std::vector<std::string> {
                            return {"        for (X509Certificate x509Certificate : " + p.chain + ") {",
                                    "            x509Certificate.checkValidity();", "        }"};
                          }));
  out.push_back(flex_case(
      seed, 18,
      {"PinTrust",
       {"java.security.MessageDigest"},
       {},
       {},
       {"    static String byte2HexFormatted(byte[] bArr) {", "        StringBuilder sb = new StringBuilder();",
        "        for (byte b : bArr) {", "            sb.append(String.format(\"%02X\", b));", "        }",
        "        return sb.toString();", "    }"},
       {"HASH"},
       {"F7", "F8"},
       "SHA-1 fingerprint of the leaf compared to a constant"},
      [](const Params& p, Rng& rng) -> std::vector<std::string> {
        return {"        try {",
                "            if (byte2HexFormatted(MessageDigest.getInstance(\"SHA1\").digest(" + p.chain +
                    "[0].getEncoded())).equalsIgnoreCase(\"" + rng.hex(40, true) + "\")) {",
                "                return;", "            }", "        } catch (Exception e) {", "        }",
                "        throw new CertificateException();"};
      }));
  out.push_back(flex_case(
      seed, 19, {"SubjectTrust", {}, {}, {}, {}, {"GETSUB"}, {"F6", "F8"}, "subject DN substring check"},
      [](const Params& p, Rng& rng) -> std::vector<std::string> {
        return {"        if (!" + p.chain + "[0].getSubjectDN().toString().contains(\"" + pick_dn(rng) + "\")) {",
                "            throw new CertificateException(\"unexpected subject\");", "        }"};
      }));
  out.push_back(flex_case(
      seed, 20, {"ShapeTrust", {}, {}, {}, {}, {"LEN", "AUTH"}, {"F11"}, "chain length and auth type only"},
      [](const Params& p, Rng&) -> std::vector<std::string> {
        return {"        if (" + p.chain + " == null || " + p.chain + ".length == 0) {",
                "            throw new IllegalArgumentException(\"certificate chain is empty\");", "        }",
                "        if (" + p.auth + " == null || " + p.auth + ".length() == 0) {",
                "            throw new IllegalArgumentException(\"authType is empty\");", "        }"};
      }));
  out.push_back(flex_case(
      seed, 21, {"KeyTrust", {}, {}, {}, {}, {"GETPUB"}, {"F8"}, "public key string compared to a constant"},
      [](const Params& p, Rng& rng) -> std::vector<std::string> {
        return {"        String key = " + p.chain + "[0].getPublicKey().toString();",
                "        if (!key.equals(\"OpenSSLRSAPublicKey{modulus=" + rng.hex(64, false) +
                    ",publicExponent=10001}\")) {",
                "            throw new CertificateException(\"public key mismatch\");", "        }"};
      }));
  out.push_back(flex_case(
      seed, 22, {"IssuerTrust", {}, {}, {}, {}, {"STROP"}, {"F8"}, "issuer name suffix check"},
      [](const Params& p, Rng& rng) -> std::vector<std::string> {
        static const std::vector<std::string> kSuffix = {"o=example corp,c=us", "o=example networks,c=de",
                                                         "ou=devices,o=example devices,c=us"};
        return {"        String issuer = " + p.chain + "[0].getIssuerX500Principal().getName().toLowerCase();",
                "        if (!issuer.endsWith(\"" + rng.pick(kSuffix) + "\")) {",
                "            throw new CertificateException(\"unexpected issuer\");", "        }"};
      }));
  return out;
}

}  // namespace cryptolens::detail
