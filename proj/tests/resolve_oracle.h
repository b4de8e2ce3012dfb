#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "cryptolens/resolve.h"

namespace cryptolens::testing {

using Values = std::set<std::string>;

// Hand transliterations of each fixture's Java into C++. They share no code
// with the resolver and compute the runtime value directly.
namespace oracle {

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
  return s;
}

inline std::string b64(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  std::string out(text.size(), '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  std::size_t pad = std::count(text.end() - 2, text.end(), '=');
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

inline std::string bytes_as_value(const std::string& b) {
  bool printable = std::all_of(b.begin(), b.end(), [](char c) { return c >= 0x20 && c < 0x7f; });
  if (printable) return b;
  static const char* kHex = "0123456789abcdef";
  std::string h = "hex:";
  for (unsigned char c : b) {
    h += kHex[c >> 4];
    h += kHex[c & 15];
  }
  return h;
}

inline std::string char_at() {
  std::string g = "AES/GCM/NoPadding";
  std::string out = "AES/";
  out += static_cast<char>(g[4] - 2);
  out += g[5];
  out += static_cast<char>(g[6] - 11);
  return out + "/NoPadding";
}

inline std::string byte_loop() {
  int arr[] = {55, 49, 59, 54, 47, 45, 36, 43, 41};
  std::string sb;
  for (int i2 = 8; i2 < 9 && i2 >= 0; i2 -= 3) sb += static_cast<char>(arr[i2] + 24);
  return sb;
}

inline std::string xor_mask() {
  std::string s = "AES/CBC/PKCS5Padding";
  std::vector<int> mask(s.size(), 0);
  mask[4] = 6;
  mask[5] = 1;
  mask[6] = 1;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<char>(s[i] ^ mask[i % mask.size()]);
  return s;
}

inline std::string xor_base64() {
  std::string m = b64("Iio+ASgjKE4/ZSIjXDMOCUoCDww=");
  std::string key = "com.kakao.api";
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<char>(m[i] ^ key[i % key.size()]);
  return m;
}

}  // namespace oracle

struct FixtureCase {
  std::string file;
  std::function<Values()> expected;
  std::set<Residual> residuals;
};

inline std::vector<FixtureCase> fixture_cases() {
  return {
      {"ReplaceMarker.java", [] { return Values{oracle::replace_all("DE$S", "$", "")}; }, {}},
      {"NativeLocal.java", [] { return Values{}; }, {Residual::kNative}},
      {"NativeInstance.java", [] { return Values{}; }, {Residual::kNative}},
      {"TernaryGetter.java", [] { return Values{"AES/GCM/NoPadding", "AES"}; }, {}},
      {"NativeDirect.java", [] { return Values{}; }, {Residual::kNative}},
      {"StringBufferAppend.java", [] { return Values{std::string("DESede/CBC/") + "NoPadding"}; }, {}},
      {"StringBuilderFragments.java",
       [] { return Values{std::string("AES") + "/EC" + "B/PKCS7P" + "adding"}; },
       {}},
      {"Base64Split.java", [] { return Values{oracle::b64("REVTL0NCQy9QS0NTNVBhZGRpb mc=")}; }, {}},
      {"CharAtArithmetic.java", [] { return Values{oracle::char_at()}; }, {}},
      {"NestedTernary.java",
       [] { return Values{"RSA/ECB/OAEPWithSHA-1AndMGF1Padding", "RSA/ECB/PKCS1Padding"}; },
       {}},
      {"TernaryFlag.java", [] { return Values{"AES/GCM/NoPadding", "AES/CBC/PKCS5Padding"}; }, {}},
      {"EnumPayload.java", [] { return Values{"AES/ECB/PKCS5Padding"}; }, {}},
      {"ThisField.java", [] { return Values{"AES/ECB/PKCS7Padding"}; }, {}},
      {"GetterMethod.java", [] { return Values{"DES"}; }, {}},
      {"NestedConstant.java", [] { return Values{"AES/ECB/PKCS5Padding"}; }, {}},
      {"ConcatField.java", [] { return Values{std::string("AES/ECB/") + "PKCS5Padding"}; }, {}},
      {"SeparatorConstant.java",
       [] { return Values{std::string("AES") + "/" + "ECB" + "/" + "NoPadding"}; },
       {}},
      {"OidLiteral.java", [] { return Values{"1.2.840.113549.3.2"}; }, {}},
      {"PlainName.java", [] { return Values{"Blowfish"}; }, {}},
      {"ByteLoop.java", [] { return Values{oracle::byte_loop()}; }, {}},
      {"XorMask.java", [] { return Values{oracle::xor_mask()}; }, {}},
      {"XorBase64Helper.java", [] { return Values{oracle::xor_base64()}; }, {}},
      {"Base64Key.java",
       [] {
         return Values{oracle::bytes_as_value(oracle::b64(
             "oik6PdDdMnOXemTbwvMn9de/h9 lFnfBaCWbGMMZqqoSaQaqUOqjVGm5NqsmjcBI1x+sS9ugjB55HEJWR iFXYFw=="))};
       },
       {}},
      {"LiteralKey.java", [] { return Values{"oejkdirztefhnvscxhdmdzedfotuabje"}; }, {}},
      {"EncryptedParam.java", [] { return Values{}; }, {Residual::kUnknown}},
  };
}

}  // namespace cryptolens::testing
