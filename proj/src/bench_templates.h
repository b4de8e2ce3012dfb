#pragma once

// Shared helpers for the benchmark case templates.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/bench.h"

namespace cryptolens::detail {

// Java source with line bookkeeping, so expected spans come from
// construction rather than from parsing the output.
class Src {
 public:
  std::uint32_t next_line() const { return lines_ + 1; }
  std::uint32_t last_line() const { return lines_; }
  Src& operator<<(std::string_view line) {
    text_.append(line);
    text_.push_back('\n');
    ++lines_;
    return *this;
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::uint32_t lines_ = 0;
};

// mt19937_64 output is fixed by the standard; distributions are not, so
// picks use the raw stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(g_() % n); }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  std::string hex(std::size_t digits, bool upper);

 private:
  std::mt19937_64 g_;
};

std::string java_quote(std::string_view s);
std::string class_name(Rng& rng, std::string_view role);
std::string ident(Rng& rng);

// Rule ids the built-in catalog raises for a transformation, e.g. R1+R5 for
// DES/CBC/PKCS5Padding. Only values used by the templates are listed.
std::vector<std::string> rules_for_value(std::string_view value);

ExpectedFinding expect(std::string_view rule_id, std::uint32_t start, std::uint32_t end);
// One finding per rule the value raises, all on `line`.
std::vector<ExpectedFinding> expect_value(std::string_view value, bool evasive, std::uint32_t line);

// Same value through an OID literal.
ExpectedFinding expect_oid(std::string_view algorithm, std::uint32_t line);

BenchVariant make_variant(const std::string& dir, const std::string& cls, const Src& src,
                          std::string note, std::vector<std::string> labels,
                          std::vector<ExpectedFinding> expected);

// Rows 1-7 and 8-14 of the restrictive half.
std::vector<BenchmarkCase> restrictive_cases_head(std::uint64_t seed);
std::vector<BenchmarkCase> restrictive_cases_tail(std::uint64_t seed);
std::vector<BenchmarkCase> restrictive_cases(std::uint64_t seed);

BenchmarkCase new_case(std::size_t index, ApiCategory category);
// "import ...;" lines, a blank line, then "public class <cls> {".
void open_class(Src& s, const std::vector<std::string>& imports, const std::string& cls,
                std::string_view implements = {});
std::string xor_text(std::string_view text, std::string_view key);
std::vector<BenchmarkCase> flexible_cases(std::uint64_t seed);

// Per-case stream so adding a case does not reshuffle the others.
inline Rng case_rng(std::uint64_t seed, std::size_t index) {
  return Rng(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

}  // namespace cryptolens::detail
