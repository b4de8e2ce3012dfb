#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <openssl/evp.h>

#include "cryptolens/codec.h"

namespace cryptolens {
namespace {

// OpenSSL's block codec. Input must be whitespace-free and padded.
std::string ossl_decode(const std::string& b64) {
  std::string out(b64.size() / 4 * 3 + 3, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(b64.data()), static_cast<int>(b64.size()));
  if (n < 0) throw std::runtime_error("openssl rejected input");
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t pad = 0;
  if (!b64.empty() && b64.back() == '=') ++pad;
  if (b64.size() > 1 && b64[b64.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string ossl_encode(const std::string& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string strip_ws(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }),
          s.end());
  return s;
}

std::string random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
  return s;
}

TEST(Base64, PublishedLiteralsAgainstOpenSSL) {
  // The split literal keeps its embedded space, as printed.
  const std::string split = "REVTL0NCQy9QS0NTNVBhZGRpb mc=";
  auto ours = base64_decode(split, false);
  ASSERT_TRUE(ours);
  EXPECT_EQ(*ours, ossl_decode(strip_ws(split)));
  EXPECT_EQ(*ours, "DES/CBC/PKCS5Padding");

  const std::string key =
      "oik6PdDdMnOXemTbwvMn9de/h9 lFnfBaCWbGMMZqqoSaQaqUOqjVGm5NqsmjcBI1x+sS9ugjB55HEJWR iFXYFw==";
  auto k = base64_decode(key, false);
  ASSERT_TRUE(k);
  EXPECT_EQ(*k, ossl_decode(strip_ws(key)));
  EXPECT_EQ(k->size(), 64u);
}

TEST(Base64, RandomRoundTripsAgainstOpenSSL) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    std::string bytes = random_bytes(rng, rng() % 80);
    std::string enc = ossl_encode(bytes);
    EXPECT_EQ(base64_encode(bytes), enc);
    auto dec = base64_decode(enc, false);
    ASSERT_TRUE(dec) << enc;
    EXPECT_EQ(*dec, bytes);
    EXPECT_EQ(*dec, ossl_decode(enc));
  }
}

TEST(Base64, WhitespaceIsSkipped) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    std::string bytes = random_bytes(rng, 1 + rng() % 40);
    std::string enc = ossl_encode(bytes);
    std::string noisy;
    for (char c : enc) {
      noisy.push_back(c);
      if (rng() % 5 == 0) noisy.push_back(" \n\t\r"[rng() % 4]);
    }
    auto dec = base64_decode(noisy, false);
    ASSERT_TRUE(dec);
    EXPECT_EQ(*dec, bytes);
  }
}

TEST(Base64, UrlSafeAlphabet) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    std::string bytes = random_bytes(rng, rng() % 50);
    std::string enc = ossl_encode(bytes);
    std::string url = enc;
    std::replace(url.begin(), url.end(), '+', '-');
    std::replace(url.begin(), url.end(), '/', '_');
    auto dec = base64_decode(url, true);
    ASSERT_TRUE(dec);
    EXPECT_EQ(*dec, bytes);
    if (url != enc) {
      EXPECT_FALSE(base64_decode(url, false));
      EXPECT_FALSE(base64_decode(enc, true));
    }
  }
}

TEST(Base64, RejectsMalformedInput) {
  EXPECT_FALSE(base64_decode("REVT", false) == std::nullopt);
  EXPECT_FALSE(base64_decode("REV", false));      // unpadded
  EXPECT_FALSE(base64_decode("RE=T", false));     // padding inside
  EXPECT_FALSE(base64_decode("R===", false));     // too much padding
  EXPECT_FALSE(base64_decode("RE*T", false));     // outside the alphabet
  EXPECT_FALSE(base64_decode("REVTREV=REVT", false));  // padding before the end
  EXPECT_EQ(base64_decode("", false), std::string());
}

TEST(Hex, Lowercase) { EXPECT_EQ(to_hex(std::string("\x00\xff\x10", 3)), "00ff10"); }

}  // namespace
}  // namespace cryptolens
