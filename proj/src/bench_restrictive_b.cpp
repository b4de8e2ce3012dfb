#include <algorithm>

#include "bench_templates.h"
#include "cryptolens/codec.h"

namespace cryptolens::detail {

namespace {

constexpr auto kR = ApiCategory::kRestrictive;

BenchmarkCase string_builder(std::uint64_t seed) {
  Rng rng = case_rng(seed, 7);
  BenchmarkCase c = new_case(7, kR);
  {
    static const std::vector<std::string> kValues = {"AES/ECB/PKCS7Padding", "AES/ECB/PKCS5Padding",
                                                     "DES/CBC/PKCS5Padding"};
    std::string v = rng.pick(kValues), cls = class_name(rng, "BuilderCipher");
    // Three distinct cut points give four irregular fragments.
    std::vector<std::size_t> cuts;
    while (cuts.size() < 3) {
      std::size_t k = 1 + rng.below(v.size() - 1);
      if (std::find(cuts.begin(), cuts.end(), k) == cuts.end()) cuts.push_back(k);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(v.size());
    Src s;
    open_class(s, {"java.security.Provider", "java.security.Security", "javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {" << "        StringBuilder sb = new StringBuilder();";
    std::size_t from = 0;
    for (auto k : cuts) {
      s << "        sb.append(" + java_quote(v.substr(from, k - from)) + ");";
      from = k;
    }
    s << "        Provider provider = Security.getProvider(\"BC\");";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(sb.toString(), provider);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "irregular StringBuilder fragments", {"STRBUF"},
                                      expect_value(v, true, line)));
  }
  {
    // Characters picked from an int table: 41+24, 54+24, 59+24 spell "AES".
    std::string cls = class_name(rng, "TableCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(m7713c());" << "    }" << ""
      << "    public static String m7713c() {"
      << "        int[] iArr = {55, 49, 59, 54, 47, 45, 36, 43, 41};"
      << "        StringBuilder sb = new StringBuilder();"
      << "        for (int i2 = 8; i2 < 9 && i2 >= 0; i2 -= 3) {"
      << "            sb.append(Character.toChars(iArr[i2] + 24));"
      << "        }"
      << "        return sb.toString();" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "StringBuilder over a char-code table",
                                      {"STRBUF", "METHOD"}, expect_value("AES", true, line)));
  }
  return c;
}

BenchmarkCase concatenation(std::uint64_t seed) {
  Rng rng = case_rng(seed, 8);
  BenchmarkCase c = new_case(8, kR);
  {
    static const std::vector<std::string> kPads = {"PKCS5Padding", "NoPadding", "PKCS7Padding"};
    std::string pad = rng.pick(kPads), cls = class_name(rng, "ConcatCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private final String padding = " + java_quote(pad) + ";" << ""
      << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(\"AES/ECB/\" + padding);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "literal prefix plus field", {"CONCT"},
                                      expect_value("AES/ECB/" + pad, true, line)));
  }
  {
    struct Parts {
      std::string a, b, p;
    };
    static const std::vector<Parts> kParts = {
        {"AES", "CBC", "PKCS5Padding"}, {"AES", "ECB", "NoPadding"}, {"DES", "CBC", "PKCS5Padding"}};
    const Parts& p = rng.pick(kParts);
    std::string cls = class_name(rng, "SeparatorCipher");
    Src s;
    open_class(s, {"java.security.Provider", "javax.crypto.Cipher"}, cls);
    s << "    static final class RDMConstants {" << "        static final String SLASH = \"/\";" << "    }" << ""
      << "    public Cipher create(Provider provider) throws Exception {"
      << "        String str5 = " + java_quote(p.a) + ";" << "        String str2 = " + java_quote(p.b) + ";"
      << "        String str4 = " + java_quote(p.p) + ";";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(str5 + RDMConstants.SLASH + str2 + RDMConstants.SLASH + str4, provider);"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "fragments joined by a separator constant", {"CONCT"},
                                      expect_value(p.a + "/" + p.b + "/" + p.p, true, line)));
  }
  return c;
}

BenchmarkCase base64_case(std::uint64_t seed) {
  Rng rng = case_rng(seed, 9);
  BenchmarkCase c = new_case(9, kR);
  const std::string v = "DES/CBC/PKCS5Padding";
  const std::string enc = base64_encode(v);
  {
    std::string cls = class_name(rng, "AndroidB64Cipher");
    Src s;
    open_class(s, {"android.util.Base64", "javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(new String(Base64.decode(" + java_quote(enc) + ", 2)));"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "android Base64.decode", {"BAS64"},
                                      expect_value(v, true, line)));
  }
  {
    std::string cls = class_name(rng, "JavaB64Cipher");
    Src s;
    open_class(s, {"java.util.Base64", "javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(new String(Base64.getDecoder().decode(" + java_quote(enc) + ")));"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "java.util Base64 decoder", {"BAS64"},
                                      expect_value(v, true, line)));
  }
  return c;
}

BenchmarkCase identifier_method(std::uint64_t seed) {
  Rng rng = case_rng(seed, 10);
  BenchmarkCase c = new_case(10, kR);
  {
    // XOR on positions 4..6 turns CBC into ECB.
    std::string cls = class_name(rng, "MaskCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {"
      << "        String Qhi = Qhi(\"AES/CBC/PKCS5Padding\");";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(Qhi);" << "    }" << ""
      << "    public static String Qhi(String str) {"
      << "        int[] iArr = new int[str.length()];"
      << "        iArr[4] = 6;" << "        iArr[5] = 1;" << "        iArr[6] = 1;"
      << "        return new String(Qhi(str.getBytes(), iArr));" << "    }" << ""
      << "    public static byte[] Qhi(byte[] bArr, int[] iArr) {"
      << "        if (bArr == null || bArr.length == 0 || iArr == null || iArr.length == 0) {"
      << "            return bArr;" << "        }"
      << "        byte[] bArr2 = new byte[bArr.length];"
      << "        for (int i = 0; i < bArr.length; i++) {"
      << "            bArr2[i] = (byte) (bArr[i] ^ iArr[i % iArr.length]);" << "        }"
      << "        return bArr2;" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "XOR mask over the bytes", {"ID", "METHOD"},
                                      expect_value("AES/ECB/PKCS5Padding", true, line)));
  }
  {
    static const std::vector<std::string> kKeys = {"com.kakao.api", "org.vault.sync", "s3cr3t-k3y"};
    std::string key = rng.pick(kKeys), cls = class_name(rng, "UtilsCipher");
    const std::string v = "AES/CBC/PKCS5Padding";
    std::string enc = base64_encode(xor_text(v, key));
    Src s;
    open_class(s, {"java.util.Base64", "javax.crypto.Cipher"}, cls);
    s << "    static final class Utils {"
      << "        static String base64DecodeAndXor(String str) {"
      << "            return xorMessage(new String(Base64.getDecoder().decode(str)));" << "        }" << ""
      << "        static String xorMessage(String m) {"
      << "            char[] key = " + java_quote(key) + ".toCharArray();"
      << "            char[] out = new char[m.length()];"
      << "            for (int i = 0; i < m.length(); i++) {"
      << "                out[i] = (char) (m.charAt(i) ^ key[i % key.length]);" << "            }"
      << "            return new String(out);" << "        }" << "    }" << ""
      << "    public Cipher create() throws Exception {"
      << "        String cipherAlgorithm = Utils.base64DecodeAndXor(" + java_quote(enc) + ");";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(cipherAlgorithm);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "helper class decoding and XOR-ing", {"ID", "METHOD"},
                                      expect_value(v, true, line)));
  }
  return c;
}

BenchmarkCase ternary(std::uint64_t seed) {
  Rng rng = case_rng(seed, 11);
  BenchmarkCase c = new_case(11, kR);
  static const std::vector<std::string> kValues = {"AES/CBC/PKCS5Padding", "AES/ECB/PKCS5Padding", "DES"};
  {
    std::string v = rng.pick(kValues), cls = class_name(rng, "FlagCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private boolean z;" << "" << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(z ? \"AES/GCM/NoPadding\" : " + java_quote(v) + ");" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "ternary over literals", {"TEROP"},
                                      expect_value(v, false, line)));
  }
  {
    // Condition and both branches are plain identifiers.
    std::string v = rng.pick(kValues), cls = class_name(rng, "ModeSwitchCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private static final String LEGACY_MODE = " + java_quote(v) + ";"
      << "    private static final String MODERN_MODE = \"AES/GCM/NoPadding\";" << ""
      << "    public Cipher create(boolean legacy) throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(legacy ? LEGACY_MODE : MODERN_MODE);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "ternary over identifiers", {"TEROP"},
                                      expect_value(v, false, line)));
  }
  return c;
}

BenchmarkCase static_final(std::uint64_t seed) {
  Rng rng = case_rng(seed, 12);
  BenchmarkCase c = new_case(12, kR);
  static const std::vector<std::string> kValues = {"AES/ECB/PKCS5Padding", "DES", "AES", "RSA/ECB/PKCS1Padding"};
  std::string v = rng.pick(kValues), cls = class_name(rng, "ConstCipher");
  Src s;
  open_class(s, {"javax.crypto.Cipher"}, cls);
  s << "    static final class SecurityConstants {"
    << "        public static final String AES_MODE = " + java_quote(v) + ";" << "    }" << ""
    << "    public Cipher create() throws Exception {";
  auto line = s.next_line();
  s << "        return Cipher.getInstance(SecurityConstants.AES_MODE);" << "    }" << "}";
  c.variants.push_back(make_variant(c.dir, cls, s, "constant in a static final class", {"STATIC"},
                                    expect_value(v, false, line)));
  return c;
}

BenchmarkCase enum_case(std::uint64_t seed) {
  Rng rng = case_rng(seed, 13);
  BenchmarkCase c = new_case(13, kR);
  static const std::vector<std::string> kValues = {"DES", "AES/ECB/PKCS5Padding", "AES/CBC/PKCS5Padding"};
  auto open_enum = [](Src& s, const std::string& v) {
    s << "    enum Algo {"
      << "        A(\"AES/GCM/NoPadding\"), B(" + java_quote(v) + ");"
      << "        public final String f13865d;" << ""
      << "        Algo(String s) {" << "            this.f13865d = s;" << "        }" << "    }" << "";
  };
  {
    std::string v = rng.pick(kValues), cls = class_name(rng, "EnumParamCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    open_enum(s, v);
    s << "    public Cipher create(Algo aVar) throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(aVar.f13865d);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "enum-typed parameter", {"ENUM"},
                                      expect_value(v, false, line)));
  }
  {
    std::string v = rng.pick(kValues), cls = class_name(rng, "EnumConstCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    open_enum(s, v);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(Algo.B.f13865d);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "enum constant payload", {"ENUM"},
                                      expect_value(v, false, line)));
  }
  return c;
}

}  // namespace

std::vector<BenchmarkCase> restrictive_cases_tail(std::uint64_t seed) {
  return {string_builder(seed), concatenation(seed), base64_case(seed), identifier_method(seed),
          ternary(seed), static_final(seed), enum_case(seed)};
}

}  // namespace cryptolens::detail
