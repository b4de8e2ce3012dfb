#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/classify.h"
#include "cryptolens/ingest.h"
#include "cryptolens/resolve.h"

namespace cryptolens {

enum class Severity { kInfo, kWarning, kError };
std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);

struct Rule {
  std::string id;
  Severity severity = Severity::kInfo;
  ApiCategory category = ApiCategory::kRestrictive;
  std::string description;
};

struct RuleCatalog {
  int version = 1;
  std::vector<Rule> rules;
  // OID -> JCA transformation or algorithm name.
  std::map<std::string, std::string> oids;

  static const RuleCatalog& builtin();
  // Builtin catalog with extra OIDs from a JSON object {"oids": {...}}.
  static RuleCatalog with_extra_oids(const std::map<std::string, std::string>& extra);
  const Rule* find(std::string_view id) const;
  std::string to_json() const;
};

struct MisuseFinding {
  std::string site_id;
  std::string rule_id;
  Severity severity = Severity::kInfo;
  std::optional<std::string> effective_value;
  std::string message;
  // Indices into the site's ResolvedValue::trace that support the finding.
  std::vector<std::size_t> evidence;
  bool evasive = false;
  std::uint32_t start_line = 0;
  std::uint32_t end_line = 0;
};

// ALGO[/MODE[/PADDING]], upper-cased. Nothing for malformed strings.
struct Transformation {
  std::string algorithm;
  std::string mode;     // empty when absent
  std::string padding;  // empty when absent
};
std::optional<Transformation> parse_transformation(std::string_view text);

// Broken ciphers of R1, compared upper-case.
bool is_broken_cipher(std::string_view algorithm);

std::vector<MisuseFinding> check_restrictive(const InvocationSite& site,
                                             const ResolvedValue* resolved,
                                             const LabelSet& labels,
                                             const RuleCatalog& catalog = RuleCatalog::builtin());

std::vector<MisuseFinding> check_flexible(const InvocationSite& site, const LabelSet& labels,
                                          const RuleCatalog& catalog = RuleCatalog::builtin());

std::vector<MisuseFinding> check_key_material(const InvocationSite& site,
                                              const ResolvedValue* resolved,
                                              const RuleCatalog& catalog = RuleCatalog::builtin());

// Dispatch on the site's api kind. Restrictive sites labelled UNKNOWN_API get
// nothing; flexible ones only the body-shape check F10.
std::vector<MisuseFinding> check_site(const InvocationSite& site, const ResolvedValue* resolved,
                                      const LabelSet& labels,
                                      const RuleCatalog& catalog = RuleCatalog::builtin());

}  // namespace cryptolens
