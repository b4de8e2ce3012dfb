// Random string programs checked against a direct evaluator. The generator
// knows every value while it writes the Java, so the evaluator is the
// generator itself; the resolver only sees the source text.
#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "cryptolens/codec.h"
#include "cryptolens/resolve.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using Values = std::set<std::string>;

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
  return s;
}

struct Expr {
  std::string java;
  Values values;
};

class ProgramGen {
 public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  std::string program(Expr& top) {
    top = expr(3);
    std::string src = "import java.util.Base64;\nimport javax.crypto.Cipher;\n\nclass P {\n";
    for (const auto& m : members_) src += m;
    src += "    Object run(boolean f0, boolean f1, boolean f2) throws Exception {\n";
    for (const auto& s : locals_) src += "        " + s + "\n";
    src += "        return Cipher.getInstance(" + top.java + ");\n    }\n}\n";
    return src;
  }

 private:
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::string word() {
    static const std::string kAlpha = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789/-";
    std::string s;
    std::size_t n = 1 + below(7);
    for (std::size_t i = 0; i < n; ++i) s += kAlpha[below(kAlpha.size())];
    return s;
  }

  static Values map(const Values& in, const std::function<std::string(const std::string&)>& fn) {
    Values out;
    for (const auto& v : in) out.insert(fn(v));
    return out;
  }

  Expr literal() {
    std::string w = word();
    return {quote(w), {w}};
  }

  // Single-valued subexpression, needed where indices must fit every value.
  Expr single(int depth) {
    for (int tries = 0; tries < 20; ++tries) {
      Expr e = expr(depth);
      if (e.values.size() == 1 && !e.values.begin()->empty()) return e;
    }
    return literal();
  }

  Expr expr(int depth) {
    if (depth <= 0) return literal();
    switch (below(12)) {
      case 0:
        return literal();
      case 1: {  // concatenation
        Expr a = expr(depth - 1), b = expr(depth - 1);
        Values v;
        for (const auto& x : a.values)
          for (const auto& y : b.values) v.insert(x + y);
        return {"(" + a.java + " + " + b.java + ")", v};
      }
      case 2: {  // ternary on an unknown flag
        Expr a = expr(depth - 1), b = expr(depth - 1);
        Values v = a.values;
        v.insert(b.values.begin(), b.values.end());
        return {"(f" + std::to_string(below(3)) + " ? " + a.java + " : " + b.java + ")", v};
      }
      case 3: {
        Expr a = expr(depth - 1);
        bool up = below(2) == 0;
        return {a.java + (up ? ".toUpperCase()" : ".toLowerCase()"), map(a.values, [up](const std::string& s) {
                  std::string r = s;
                  for (char& c : r) c = static_cast<char>(up ? std::toupper(c) : std::tolower(c));
                  return r;
                })};
      }
      case 4: {
        Expr a = single(depth - 1);
        const std::string& s = *a.values.begin();
        std::string from(1, s[below(s.size())]);
        std::string to = below(3) == 0 ? "" : word();
        return {a.java + ".replace(" + quote(from) + ", " + quote(to) + ")",
                {replace_all(s, from, to)}};
      }
      case 5: {
        Expr a = single(depth - 1);
        const std::string& s = *a.values.begin();
        std::size_t i = below(s.size() + 1), j = i + below(s.size() - i + 1);
        return {a.java + ".substring(" + std::to_string(i) + ", " + std::to_string(j) + ")", {s.substr(i, j - i)}};
      }
      case 6: {  // char arithmetic, in the published charAt style
        Expr a = single(depth - 1);
        const std::string& s = *a.values.begin();
        std::size_t i = below(s.size());
        int shift = static_cast<int>(below(5));
        std::string ch(1, static_cast<char>(s[i] + shift));
        if (shift == 0) return {"(\"\" + " + a.java + ".charAt(" + std::to_string(i) + "))", {ch}};
        return {"(\"\" + ((char) (" + a.java + ".charAt(" + std::to_string(i) + ") + " + std::to_string(shift) + ")))",
                {ch}};
      }
      case 7: {  // local variable
        Expr a = expr(depth - 1);
        std::string name = "v" + std::to_string(locals_.size());
        locals_.push_back("String " + name + " = " + a.java + ";");
        return {name, a.values};
      }
      case 8: {  // static final field
        Expr a = literal();
        std::string name = "K" + std::to_string(members_.size());
        members_.push_back("    static final String " + name + " = " + a.java + ";\n");
        return {name, a.values};
      }
      case 9: {  // helper method, one hop
        Expr a = literal();
        Expr b = literal();
        std::string name = "m" + std::to_string(members_.size());
        members_.push_back("    static String " + name + "() {\n        return " + a.java + " + " + b.java +
                           ";\n    }\n");
        return {name + "()", {*a.values.begin() + *b.values.begin()}};
      }
      case 10: {  // Base64 of a known string
        std::string w = word();
        return {"new String(Base64.getDecoder().decode(" + quote(base64_encode(w)) + "))", {w}};
      }
      default: {  // builder appends in straight-line order
        Expr a = single(depth - 1), b = single(depth - 1);
        std::string name = "sb" + std::to_string(locals_.size());
        locals_.push_back("StringBuilder " + name + " = new StringBuilder();");
        locals_.push_back(name + ".append(" + a.java + ");");
        locals_.push_back(name + ".append(" + b.java + ");");
        return {name + ".toString()", {*a.values.begin() + *b.values.begin()}};
      }
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> locals_;
  std::vector<std::string> members_;
};

TEST(ResolveProperty, RandomConcreteProgramsMatchEvaluator) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    ProgramGen gen(seed);
    Expr top;
    std::string src = gen.program(top);
    if (top.values.size() > 16) continue;  // beyond the candidate cap by construction
    auto a = testing::analyze_source(src, ApiSet::canonical());
    ASSERT_EQ(a.analyses.size(), 1u) << src;
    ASSERT_TRUE(a.analyses[0].resolved);
    const auto& r = *a.analyses[0].resolved;
    Values got(r.candidates.begin(), r.candidates.end());
    EXPECT_EQ(got, top.values) << "seed " << seed << "\n" << src;
    EXPECT_TRUE(r.residuals.empty()) << "seed " << seed << "\n" << src;
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(ResolveProperty, TernaryUnionLaw) {
  std::mt19937_64 rng(3);
  auto word = [&rng] {
    std::string w;
    for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) w += static_cast<char>('A' + rng() % 26);
    return w;
  };
  for (int i = 0; i < 60; ++i) {
    std::string x1 = word(), x2 = word(), y = word();
    // x is itself a ternary, so the law is checked on a non-singleton side too.
    std::string src = "class T { Object f(boolean c, boolean d) throws Exception {\n"
                      "  String x = d ? " + quote(x1) + " : " + quote(x2) + ";\n"
                      "  return Cipher.getInstance(c ? x : " + quote(y) + "); } }";
    auto a = testing::analyze_source(src, ApiSet::canonical());
    ASSERT_EQ(a.analyses.size(), 1u);
    Values got(a.analyses[0].resolved->candidates.begin(), a.analyses[0].resolved->candidates.end());
    EXPECT_EQ(got, (Values{x1, x2, y})) << src;
  }
}

}  // namespace
}  // namespace cryptolens
