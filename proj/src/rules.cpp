#include "cryptolens/rules.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

namespace cryptolens {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_oid(std::string_view s) {
  static const std::regex re(R"(\d+(\.\d+)+)");
  return std::regex_match(s.begin(), s.end(), re);
}

MisuseFinding base_finding(const InvocationSite& site, const Rule& rule, std::string message) {
  MisuseFinding f;
  f.site_id = site.id;
  f.rule_id = rule.id;
  f.severity = rule.severity;
  f.message = std::move(message);
  if (site.node != nullptr) {
    f.start_line = site.node->start_line;
    f.end_line = site.node->end_line;
  }
  return f;
}

std::vector<std::size_t> all_steps(const ResolvedValue* r) {
  std::vector<std::size_t> out;
  if (r == nullptr) return out;
  for (std::size_t i = 0; i < r->trace.size(); ++i) out.push_back(i);
  return out;
}

std::vector<std::size_t> steps_with(const ResolvedValue* r, std::initializer_list<std::string_view> rules) {
  std::vector<std::size_t> out;
  if (r == nullptr) return out;
  for (std::size_t i = 0; i < r->trace.size(); ++i) {
    if (std::find(rules.begin(), rules.end(), r->trace[i].rule) != rules.end()) out.push_back(i);
  }
  return out;
}

const std::set<std::string>& broken_ciphers() {
  static const std::set<std::string> s = {"DES", "DESEDE", "TRIPLEDES", "3DES", "RC2",
                                          "RC4", "ARCFOUR", "BLOWFISH", "IDEA"};
  return s;
}

// Block ciphers whose JCA provider default is ECB when no mode is given.
const std::set<std::string>& ecb_defaulting() {
  static const std::set<std::string> s = {"AES",  "AES_128",  "AES_192", "AES_256",
                                          "RSA",  "CAMELLIA", "ARIA",    "SEED",
                                          "SM4",  "TWOFISH",  "SERPENT", "AESWRAP",
                                          "AESKWP", "AESWRAPPAD", "AESKW"};
  return s;
}

bool asymmetric(std::string_view algo) {
  return algo == "RSA" || algo == "ECIES" || algo == "ELGAMAL";
}

}  // namespace

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::kInfo: return "INFO";
    case Severity::kWarning: return "WARNING";
    case Severity::kError: return "ERROR";
  }
  return "INFO";
}

std::optional<Severity> parse_severity(std::string_view s) {
  std::string u = upper(s);
  if (u == "INFO") return Severity::kInfo;
  if (u == "WARNING") return Severity::kWarning;
  if (u == "ERROR") return Severity::kError;
  return std::nullopt;
}

const RuleCatalog& RuleCatalog::builtin() {
  static const RuleCatalog c = [] {
    RuleCatalog k;
    auto R = ApiCategory::kRestrictive;
    auto F = ApiCategory::kFlexible;
    auto E = Severity::kError;
    auto W = Severity::kWarning;
    auto I = Severity::kInfo;
    k.rules = {
        {"R1", E, R, "broken cipher algorithm (DES, DESede, RC2, RC4, Blowfish, IDEA)"},
        {"R2", E, R, "object identifier naming a broken cipher"},
        {"R3", E, R, "explicit ECB mode"},
        {"R4", E, R, "algorithm without mode defaults to ECB (includes AESWrap/AESKWP)"},
        {"R5", W, R, "CBC with PKCS5/PKCS7 padding is exposed to padding oracles"},
        {"R6", W, R, "RSA/ECB/PKCS1Padding"},
        {"R7", W, R, "empty argument list relies on a type-dependent default"},
        {"R8", I, R, "unverifiable parameter (native code or encrypted value)"},
        {"R9", I, R, "malformed transformation string"},
        {"K1", E, R, "hard-coded secret key material"},
        {"K2", I, R, "key material could not be resolved"},
        {"F1", E, F, "empty body accepts every certificate"},
        {"F2", E, F, "body only logs the certificate"},
        {"F3", E, F, "delegates to an empty or trivially accepting method"},
        {"F4", E, F, "only checks the validity period"},
        {"F5", W, F, "isTrusted bypasses the configured trust manager"},
        {"F6", W, F, "deprecated getSubjectDN/getIssuerDN accessor"},
        {"F7", W, F, "SHA-1 used to compare certificates"},
        {"F8", W, F, "certificate material compared against a hard-coded string"},
        {"F9", I, F, "abstract or native declaration cannot be verified"},
        {"F10", E, F, "ineffectual body: unconditional throw or return ignoring the chain"},
        {"F11", E, F, "only structural checks (length, null, auth type) without verification"},
    };
    k.oids = {
        {"1.2.840.113549.3.2", "RC2"},
        {"1.2.840.113549.3.4", "RC4"},
        {"1.2.840.113549.3.7", "DESede/CBC/NoPadding"},
        {"1.3.14.3.2.7", "DES/CBC/NoPadding"},
        {"1.3.6.1.4.1.3029.1.2", "Blowfish/CBC/NoPadding"},
        {"1.2.840.113549.1.1.1", "RSA/ECB/PKCS1Padding"},
    };
    // NIST AES arcs: 1/21/41 = 128/192/256 bit.
    const char* modes[] = {nullptr,     "AES/ECB/NoPadding", "AES/CBC/NoPadding", "AES/OFB/NoPadding",
                           "AES/CFB/NoPadding", "AESWrap", "AES/GCM/NoPadding", "AES/CCM/NoPadding",
                           "AESWrapPad"};
    for (int base : {0, 20, 40}) {
      for (int m = 1; m <= 8; ++m) {
        k.oids["2.16.840.1.101.3.4.1." + std::to_string(base + m)] = modes[m];
      }
    }
    return k;
  }();
  return c;
}

RuleCatalog RuleCatalog::with_extra_oids(const std::map<std::string, std::string>& extra) {
  RuleCatalog c = builtin();
  for (const auto& [k, v] : extra) c.oids[k] = v;
  return c;
}

const Rule* RuleCatalog::find(std::string_view id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string RuleCatalog::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["severity"] = std::string(to_string(r.severity));
    o["category"] = std::string(to_string(r.category));
    o["description"] = r.description;
    j["rules"].push_back(o);
  }
  nlohmann::ordered_json oids = nlohmann::ordered_json::object();
  for (const auto& [k, v] : this->oids) oids[k] = v;
  j["oids"] = oids;
  return j.dump(2);
}

std::optional<Transformation> parse_transformation(std::string_view text) {
  static const std::regex re(R"(([A-Za-z0-9_.\-]+)(?:/([A-Za-z0-9_\-]+)(?:/([A-Za-z0-9_\-]+))?)?)");
  std::string s(text);
  // Surrounding whitespace is tolerated by the JCA parser.
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return std::nullopt;
  s = s.substr(b, e - b + 1);
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  Transformation t;
  t.algorithm = upper(m[1].str());
  t.mode = upper(m[2].str());
  t.padding = upper(m[3].str());
  return t;
}

bool is_broken_cipher(std::string_view algorithm) {
  return broken_ciphers().count(upper(algorithm)) > 0;
}

std::vector<MisuseFinding> check_restrictive(const InvocationSite& site,
                                             const ResolvedValue* resolved,
                                             const LabelSet& labels,
                                             const RuleCatalog& catalog) {
  std::vector<MisuseFinding> out;
  if (labels.unknown()) return out;
  auto rule = [&](std::string_view id) -> const Rule& { return *catalog.find(id); };

  if (labels.has("EMPTY")) {
    // Default transformation depends on the receiver type.
    std::string recv;
    if (const SyntaxNode* o = site.node ? site.node->child("object") : nullptr) {
      recv = std::string(o->text);
      if (auto d = recv.rfind('.'); d != std::string::npos) recv = recv.substr(d + 1);
    }
    MisuseFinding f = base_finding(site, rule("R7"), recv + ".getInstance() without a transformation");
    if (recv != "AESCipher") f.severity = Severity::kInfo;
    out.push_back(std::move(f));
    return out;
  }
  if (resolved == nullptr) return out;

  std::set<std::string> visible = visible_literals(site, resolved);
  auto evidence = all_steps(resolved);
  for (const auto& cand : resolved->candidates) {
    const bool evasive_cand = visible.count(cand) == 0;
    auto emit = [&](std::string_view id, std::string effective, std::string message, bool evasive) {
      MisuseFinding f = base_finding(site, rule(id), std::move(message));
      f.effective_value = std::move(effective);
      f.evidence = evidence;
      f.evasive = evasive && visible.count(*f.effective_value) == 0;
      out.push_back(std::move(f));
    };
    std::string effective = cand;
    bool via_oid = false;
    if (is_oid(cand)) {
      auto it = catalog.oids.find(cand);
      if (it == catalog.oids.end()) continue;
      effective = it->second;
      via_oid = true;
    }
    auto t = parse_transformation(effective);
    if (!t) {
      emit("R9", cand, "malformed transformation \"" + cand + "\"", evasive_cand);
      continue;
    }
    bool broken = broken_ciphers().count(t->algorithm) > 0;
    if (broken) {
      if (via_oid) {
        emit("R2", effective.substr(0, effective.find('/')), cand + " names " + effective,
             evasive_cand);
      } else {
        emit("R1", cand, "broken cipher " + t->algorithm, evasive_cand);
      }
    }
    if (t->mode == "ECB" && !asymmetric(t->algorithm)) {
      emit("R3", effective, "ECB mode", evasive_cand);
    }
    if (t->mode.empty() && !broken && ecb_defaulting().count(t->algorithm)) {
      emit("R4", effective, t->algorithm + " defaults to ECB", evasive_cand);
    }
    if (t->mode == "CBC" && (t->padding == "PKCS5PADDING" || t->padding == "PKCS7PADDING")) {
      emit("R5", effective, "CBC with " + t->padding, evasive_cand);
    }
    if (t->algorithm == "RSA" && t->mode == "ECB" && t->padding == "PKCS1PADDING") {
      emit("R6", effective, "RSA with PKCS#1 v1.5 padding", evasive_cand);
    }
  }
  if (resolved->has(Residual::kNative) || resolved->encrypted_param) {
    MisuseFinding f = base_finding(
        site, rule("R8"),
        resolved->encrypted_param ? "parameter is decrypted at runtime" : "parameter comes from native code");
    f.evidence = steps_with(resolved, {rule::kNativeCall, rule::kDecrypt});
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<MisuseFinding> check_key_material(const InvocationSite& site,
                                              const ResolvedValue* resolved,
                                              const RuleCatalog& catalog) {
  std::vector<MisuseFinding> out;
  if (resolved == nullptr || resolved->secure_random) return out;
  std::set<std::string> visible = visible_literals(site, resolved);
  for (const auto& cand : resolved->candidates) {
    MisuseFinding f = base_finding(site, *catalog.find("K1"), "hard-coded key");
    f.effective_value = cand;
    f.evidence = all_steps(resolved);
    f.evasive = visible.count(cand) == 0;
    out.push_back(std::move(f));
  }
  bool only_unknown = resolved->residuals == std::set<Residual>{Residual::kUnknown};
  if (resolved->candidates.empty() && !resolved->residuals.empty() && !only_unknown) {
    MisuseFinding f = base_finding(site, *catalog.find("K2"), "key material not resolved");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace cryptolens
