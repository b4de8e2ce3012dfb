#include "bench_templates.h"
#include "cryptolens/codec.h"

namespace cryptolens::detail {

namespace {

constexpr auto kR = ApiCategory::kRestrictive;

BenchmarkCase string_oid(std::uint64_t seed) {
  Rng rng = case_rng(seed, 0);
  BenchmarkCase c = new_case(0, kR);
  struct Oid {
    std::string oid, algorithm;
  };
  static const std::vector<Oid> kOids = {
      {"1.2.840.113549.3.2", "RC2"}, {"1.2.840.113549.3.4", "RC4"}, {"1.3.14.3.2.7", "DES"}};
  {
    const Oid& o = rng.pick(kOids);
    std::string cls = class_name(rng, "OidCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(" + java_quote(o.oid) + ");" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "object identifier literal", {"STRING", "OID"},
                                      {expect_oid(o.algorithm, line)}));
  }
  {
    static const std::vector<std::string> kNames = {"Blowfish", "RC4", "DES"};
    const std::string& v = rng.pick(kNames);
    std::string cls = class_name(rng, "NamedCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(" + java_quote(v) + ");" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "plain algorithm literal", {"STRING"},
                                      expect_value(v, false, line)));
  }
  return c;
}

BenchmarkCase identifier(std::uint64_t seed) {
  Rng rng = case_rng(seed, 1);
  BenchmarkCase c = new_case(1, kR);
  static const std::vector<std::string> kValues = {"DES", "AES/ECB/PKCS5Padding", "AES", "RC4",
                                                   "AES/ECB/NoPadding", "RSA/ECB/PKCS1Padding"};
  {
    std::string v = rng.pick(kValues), name = ident(rng), cls = class_name(rng, "LocalCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {"
      << "        String " + name + " = " + java_quote(v) + ";";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(" + name + ");" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "local variable", {"ID"}, expect_value(v, false, line)));
  }
  {
    std::string v = rng.pick(kValues), name = ident(rng), cls = class_name(rng, "FieldCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private final String " + name + " = " + java_quote(v) + ";" << ""
      << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(" + name + ");" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "instance field", {"ID"}, expect_value(v, false, line)));
  }
  {
    std::string v = rng.pick(kValues), name = ident(rng), cls = class_name(rng, "AliasCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {"
      << "        String " + name + " = " + java_quote(v) + ";"
      << "        String selected = " + name + ";";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(selected);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "chain of locals", {"ID"}, expect_value(v, false, line)));
  }
  return c;
}

BenchmarkCase method_call(std::uint64_t seed) {
  Rng rng = case_rng(seed, 2);
  BenchmarkCase c = new_case(2, kR);
  {
    static const std::vector<std::string> kValues = {"AES/ECB/PKCS5Padding", "DES", "Blowfish",
                                                     "AES/CBC/PKCS5Padding"};
    std::string v = rng.pick(kValues), cls = class_name(rng, "GetterCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(getCipherAlgorithm());" << "    }" << ""
      << "    private String getCipherAlgorithm() {"
      << "        return " + java_quote(v) + ";" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "getter returning a literal", {"METHOD"},
                                      expect_value(v, false, line)));
  }
  {
    // Integer-guarded choice between GCM and the ECB default.
    std::string cls = class_name(rng, "SwitchCipher");
    int threshold = 2 + static_cast<int>(rng.below(3));
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private static int f882fB;" << "" << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(getTransformation());" << "    }" << ""
      << "    private static String getTransformation() {"
      << "        return f882fB >= " + std::to_string(threshold) + " ? \"AES/GCM/NoPadding\" : \"AES\";"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "ternary inside the callee", {"METHOD"},
                                      expect_value("AES", false, line)));
  }
  return c;
}

BenchmarkCase method_chain(std::uint64_t seed) {
  Rng rng = case_rng(seed, 3);
  BenchmarkCase c = new_case(3, kR);
  {
    static const std::vector<std::string> kValues = {"AES/CBC/PKCS5Padding", "AES/ECB/PKCS5Padding",
                                                     "DES/CBC/PKCS5Padding"};
    static const std::vector<std::string> kKeys = {"com.kakao.api", "org.vault.sync", "s3cr3t-k3y"};
    std::string v = rng.pick(kValues), key = rng.pick(kKeys), cls = class_name(rng, "XorCipher");
    std::string enc = base64_encode(xor_text(v, key));
    Src s;
    open_class(s, {"java.util.Base64", "javax.crypto.Cipher"}, cls);
    s << "    private static final String KEY = " + java_quote(key) + ";" << ""
      << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(xorMessage(decode(" + java_quote(enc) + ")));" << "    }" << ""
      << "    static String decode(String str) {"
      << "        return new String(Base64.getDecoder().decode(str));" << "    }" << ""
      << "    static String xorMessage(String m) {"
      << "        char[] key = KEY.toCharArray();"
      << "        char[] out = new char[m.length()];"
      << "        for (int i = 0; i < m.length(); i++) {"
      << "            out[i] = (char) (m.charAt(i) ^ key[i % key.length]);"
      << "        }"
      << "        return new String(out);" << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "Base64 then XOR through two calls", {"METHOD"},
                                      expect_value(v, true, line)));
  }
  {
    struct Parts {
      std::string a, b, p;
    };
    static const std::vector<Parts> kParts = {
        {"AES", "ECB", "PKCS5Padding"}, {"DES", "CBC", "PKCS5Padding"}, {"Blowfish", "CBC", "PKCS5Padding"}};
    const Parts& p = rng.pick(kParts);
    std::string cls = class_name(rng, "JoinCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(join(algorithm(), mode(), padding()));" << "    }" << ""
      << "    private static String join(String a, String b, String c) {"
      << "        return a + \"/\" + b + \"/\" + c;" << "    }" << ""
      << "    private static String algorithm() {" << "        return " + java_quote(p.a) + ";" << "    }" << ""
      << "    private static String mode() {" << "        return " + java_quote(p.b) + ";" << "    }" << ""
      << "    private static String padding() {" << "        return " + java_quote(p.p) + ";" << "    }"
      << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "value assembled from four calls", {"METHOD"},
                                      expect_value(p.a + "/" + p.b + "/" + p.p, true, line)));
  }
  return c;
}

std::pair<std::string, std::string> jni_stub(const std::string& dir, const std::string& cls,
                                             const std::string& method, bool is_static,
                                             const std::string& params, const std::string& value) {
  std::string text = "#include <jni.h>\n\n";
  text += "JNIEXPORT jstring JNICALL Java_" + cls + "_" + method + "(JNIEnv* env, " +
          (is_static ? "jclass" : "jobject") + " self" + params + ") {\n";
  text += "    return (*env)->NewStringUTF(env, \"" + value + "\");\n}\n";
  return {dir + "/jni/" + cls + ".c", text};
}

BenchmarkCase native_call(std::uint64_t seed) {
  Rng rng = case_rng(seed, 4);
  BenchmarkCase c = new_case(4, kR);
  static const std::vector<std::string> kValues = {"AES/ECB/NoPadding", "AES/ECB/PKCS5Padding", "DES",
                                                   "AES", "RC4"};
  {
    std::string cls = class_name(rng, "NativeDirect");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(requestTransform(1));" << "    }" << ""
      << "    public static native String requestTransform(int i);" << "}";
    BenchVariant v = make_variant(c.dir, cls, s, "direct native call", {"NATIVE"}, {expect("R8", line, line)});
    // The library side: any nonzero argument selects ECB.
    std::string stub = "#include <jni.h>\n\n";
    stub += "JNIEXPORT jstring JNICALL Java_" + cls + "_requestTransform(JNIEnv* env, jclass self, jint i) {\n";
    stub += "    return (*env)->NewStringUTF(env, i != 0 ? \"AES/ECB/NoPadding\" : \"AES/CBC/PKCS5Padding\");\n}\n";
    v.companions.push_back({c.dir + "/jni/" + cls + ".c", stub});
    c.variants.push_back(std::move(v));
  }
  {
    std::string cls = class_name(rng, "NativeLocal"), value = rng.pick(kValues);
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private static native String nativeGetString(int i);" << ""
      << "    public Cipher create() throws Exception {"
      << "        String nativeGetString = nativeGetString(1);";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(nativeGetString);" << "    }" << "}";
    BenchVariant v = make_variant(c.dir, cls, s, "native result in a local", {"NATIVE"},
                                  {expect("R8", line, line)});
    v.companions.push_back(jni_stub(c.dir, cls, "nativeGetString", true, ", jint i", value));
    c.variants.push_back(std::move(v));
  }
  {
    std::string cls = class_name(rng, "NativeMember"), value = rng.pick(kValues);
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    private final native String getCypherTransformation();" << ""
      << "    public Cipher create() throws Exception {"
      << "        String f6401b = getCypherTransformation();";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(f6401b);" << "    }" << "}";
    BenchVariant v = make_variant(c.dir, cls, s, "native instance method", {"NATIVE"},
                                  {expect("R8", line, line)});
    v.companions.push_back(jni_stub(c.dir, cls, "getCypherTransformation", false, "", value));
    c.variants.push_back(std::move(v));
  }
  return c;
}

BenchmarkCase string_ops(std::uint64_t seed) {
  Rng rng = case_rng(seed, 5);
  BenchmarkCase c = new_case(5, kR);
  {
    // GCM on the surface, ECB after the character arithmetic.
    std::string cls = class_name(rng, "CharAtCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(\"AES/\" + ((char) (\"AES/GCM/NoPadding\".charAt(4) - 2)) + "
         "\"AES/GCM/NoPadding\".charAt(5) + ((char) (\"AES/GCM/NoPadding\".charAt(6) - 11)) + \"/NoPadding\");"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "charAt arithmetic", {"STROP"},
                                      expect_value("AES/ECB/NoPadding", true, line)));
  }
  {
    struct Parts {
      std::string a, b, p;
    };
    static const std::vector<Parts> kParts = {
        {"AES", "CBC", "PKCS7Padding"}, {"AES", "ECB", "PKCS5Padding"}, {"DES", "CBC", "PKCS5Padding"}};
    const Parts& p = rng.pick(kParts);
    std::string cls = class_name(rng, "FormatCipher");
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(String.format(\"%s/%s/%s\", " + java_quote(p.a) + ", " +
             java_quote(p.b) + ", " + java_quote(p.p) + "));"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "String.format", {"STROP"},
                                      expect_value(p.a + "/" + p.b + "/" + p.p, true, line)));
  }
  {
    static const std::vector<std::string> kValues = {"DES", "RC4", "Blowfish"};
    static const std::vector<std::string> kMarks = {"$", "#", "_"};
    std::string v = rng.pick(kValues), mark = rng.pick(kMarks), cls = class_name(rng, "ReplaceCipher");
    std::string masked = v;
    masked.insert(1 + rng.below(v.size() - 1), mark);
    Src s;
    open_class(s, {"javax.crypto.Cipher"}, cls);
    s << "    public Cipher create() throws Exception {";
    auto line = s.next_line();
    s << "        return Cipher.getInstance(" + java_quote(masked) + ".replace(" + java_quote(mark) + ", \"\"));"
      << "    }" << "}";
    c.variants.push_back(make_variant(c.dir, cls, s, "marker removed by replace", {"STROP"},
                                      expect_value(v, true, line)));
  }
  return c;
}

BenchmarkCase string_buffer(std::uint64_t seed) {
  Rng rng = case_rng(seed, 6);
  BenchmarkCase c = new_case(6, kR);
  static const std::vector<std::string> kValues = {"DESede/CBC/NoPadding", "AES/ECB/PKCS5Padding"};
  std::string v = rng.pick(kValues), cls = class_name(rng, "BufferCipher");
  auto cut = v.rfind('/') + 1;
  Src s;
  open_class(s, {"javax.crypto.Cipher"}, cls);
  s << "    private Cipher f13712c;" << "" << "    public void init() throws Exception {"
    << "        StringBuffer stringBuffer = new StringBuffer();"
    << "        stringBuffer.append(" + java_quote(v.substr(0, cut)) + ");"
    << "        stringBuffer.append(" + java_quote(v.substr(cut)) + ");";
  auto line = s.next_line();
  s << "        this.f13712c = Cipher.getInstance(stringBuffer.toString());" << "    }" << "}";
  c.variants.push_back(make_variant(c.dir, cls, s, "StringBuffer with two appends", {"STRBUF"},
                                    expect_value(v, true, line)));
  return c;
}

}  // namespace

std::vector<BenchmarkCase> restrictive_cases_head(std::uint64_t seed) {
  return {string_oid(seed), identifier(seed), method_call(seed), method_chain(seed),
          native_call(seed), string_ops(seed), string_buffer(seed)};
}

}  // namespace cryptolens::detail
