#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "bench_templates.h"

namespace cryptolens::detail {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string algorithm_of(std::string_view value) {
  return std::string(value.substr(0, value.find('/')));
}

std::vector<std::string> keywords_for(std::string_view rule_id, std::string_view value) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> kFixed = {
      {"R3", {"ecb"}},
      {"R4", {"ecb", "default"}},
      {"R5", {"cbc"}},
      {"R6", {"pkcs1"}},
      {"R7", {"default"}},
      {"R8", {"native"}},
      {"K1", {"key"}},
      {"F1", {"trustmanager", "trust all", "trusts all", "empty"}},
      {"F2", {"trustmanager", "log"}},
      {"F3", {"trustmanager", "checkclienttrusted"}},
      {"F4", {"checkvalidity", "expir"}},
      {"F5", {"istrusted"}},
      {"F6", {"getsubjectdn", "getissuerdn", "deprecated"}},
      {"F7", {"sha1", "sha-1"}},
      {"F8", {"hard-coded", "hardcoded", "pinning"}},
      {"F10", {"trustmanager"}},
      {"F11", {"trustmanager"}},
  };
  if (rule_id == "R1") return {lower(algorithm_of(value))};
  if (rule_id == "R2") return {lower(algorithm_of(value)), "oid"};
  auto it = kFixed.find(rule_id);
  return it == kFixed.end() ? std::vector<std::string>{} : it->second;
}

}  // namespace

std::string Rng::hex(std::size_t digits, bool upper) {
  static constexpr char kLo[] = "0123456789abcdef";
  static constexpr char kUp[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < digits; ++i) out.push_back((upper ? kUp : kLo)[below(16)]);
  return out;
}

std::string java_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string class_name(Rng& rng, std::string_view role) {
  static const std::vector<std::string> kPrefix = {"Vault", "Token", "Session", "Payload", "Ledger",
                                                   "Secure", "Cloud", "Device", "Sync", "Media"};
  return rng.pick(kPrefix) + std::string(role);
}

std::string ident(Rng& rng) {
  static const std::vector<std::string> kNames = {"transformation", "cipherName", "algo", "mode",
                                                  "spec", "f6401b", "str5", "cipherSpec",
                                                  "value", "f13712c"};
  return rng.pick(kNames);
}

std::vector<std::string> rules_for_value(std::string_view value) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> kTable = {
      {"DES", {"R1"}},
      {"RC4", {"R1"}},
      {"Blowfish", {"R1"}},
      {"DESede/CBC/NoPadding", {"R1"}},
      {"AES/ECB/PKCS5Padding", {"R3"}},
      {"AES/ECB/NoPadding", {"R3"}},
      {"AES/ECB/PKCS7Padding", {"R3"}},
      {"AES", {"R4"}},
      {"AES/CBC/PKCS5Padding", {"R5"}},
      {"AES/CBC/PKCS7Padding", {"R5"}},
      {"RSA/ECB/PKCS1Padding", {"R6"}},
      {"DES/CBC/PKCS5Padding", {"R1", "R5"}},
      {"Blowfish/CBC/PKCS5Padding", {"R1", "R5"}},
  };
  auto it = kTable.find(value);
  if (it == kTable.end()) throw std::logic_error("no expectation for template value " + std::string(value));
  return it->second;
}

ExpectedFinding expect(std::string_view rule_id, std::uint32_t start, std::uint32_t end) {
  const Rule* rule = RuleCatalog::builtin().find(rule_id);
  if (rule == nullptr) throw std::logic_error("unknown rule " + std::string(rule_id));
  ExpectedFinding e;
  e.rule_id = rule->id;
  e.severity = rule->severity;
  e.start_line = start;
  e.end_line = end;
  e.keywords = keywords_for(rule_id, "");
  return e;
}

std::vector<ExpectedFinding> expect_value(std::string_view value, bool evasive, std::uint32_t line) {
  std::vector<ExpectedFinding> out;
  for (const auto& id : rules_for_value(value)) {
    ExpectedFinding e = expect(id, line, line);
    e.keywords = keywords_for(id, value);
    e.effective_value = std::string(value);
    e.evasive = evasive;
    out.push_back(std::move(e));
  }
  return out;
}

ExpectedFinding expect_oid(std::string_view algorithm, std::uint32_t line) {
  ExpectedFinding e = expect("R2", line, line);
  e.keywords = keywords_for("R2", algorithm);
  e.effective_value = std::string(algorithm);
  e.evasive = false;
  return e;
}

BenchVariant make_variant(const std::string& dir, const std::string& cls, const Src& src,
                          std::string note, std::vector<std::string> labels,
                          std::vector<ExpectedFinding> expected) {
  BenchVariant v;
  v.file = dir + "/" + cls + ".java";
  v.source = src.text();
  v.note = std::move(note);
  v.labels = std::move(labels);
  v.expected = std::move(expected);
  return v;
}

BenchmarkCase new_case(std::size_t index, ApiCategory category) {
  BenchmarkCase c;
  c.case_id = bench_case_ids().at(index);
  c.category = category;
  c.dir = bench_dir_name(index, c.case_id);
  return c;
}

void open_class(Src& s, const std::vector<std::string>& imports, const std::string& cls,
                std::string_view implements) {
  for (const auto& i : imports) s << "import " + i + ";";
  s << "";
  std::string head = "public class " + cls;
  if (!implements.empty()) head += " implements " + std::string(implements);
  s << head + " {";
}

std::string xor_text(std::string_view text, std::string_view key) {
  std::string out(text);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<char>(out[i] ^ key[i % key.size()]);
  return out;
}

std::vector<BenchmarkCase> restrictive_cases(std::uint64_t seed) {
  auto out = restrictive_cases_head(seed);
  auto tail = restrictive_cases_tail(seed);
  out.insert(out.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
  return out;
}

}  // namespace cryptolens::detail

namespace cryptolens {

const std::vector<std::string>& bench_case_ids() {
  static const std::vector<std::string> ids = {
      "STRING/OID", "ID",     "METHOD", "METHOD*", "NATIVE",   "STROP",  "STRBUF", "STRBL*",
      "CONCT",      "BAS64",  "ID+METHOD", "TEROP", "STATIC",  "ENUM",   "EMPTY",  "LOG",
      "CLIENT",     "VAL",    "HASH",   "GETSUB",  "LEN/AUTH", "GETPUB", "STROP"};
  return ids;
}

std::string bench_dir_name(std::size_t index, std::string_view case_id) {
  std::string name;
  for (char c : case_id) {
    if (c == '/' || c == '+') {
      name.push_back('_');
    } else if (c == '*') {
      name += "_MULTI";
    } else {
      name.push_back(c);
    }
  }
  std::string num = std::to_string(index + 1);
  if (num.size() < 2) num = "0" + num;
  return num + "_" + name;
}

std::vector<BenchmarkCase> build_cases(std::uint64_t seed) {
  auto out = detail::restrictive_cases(seed);
  auto flex = detail::flexible_cases(seed);
  out.insert(out.end(), std::make_move_iterator(flex.begin()), std::make_move_iterator(flex.end()));
  const auto& ids = bench_case_ids();
  if (out.size() != ids.size()) throw std::logic_error("benchmark case count drifted");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].case_id != ids[i]) throw std::logic_error("benchmark case order drifted at " + ids[i]);
  }
  return out;
}

}  // namespace cryptolens
