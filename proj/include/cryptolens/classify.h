#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cryptolens/ingest.h"
#include "cryptolens/resolve.h"

namespace cryptolens {

// Catch-all label for sites no predicate matched. Not a taxonomy label.
inline constexpr std::string_view kUnknownApi = "UNKNOWN_API";

const std::vector<std::string>& restrictive_labels();
const std::vector<std::string>& flexible_labels();
bool is_label(std::string_view name, ApiCategory category);

struct LabelSet {
  ApiCategory category = ApiCategory::kRestrictive;
  std::set<std::string> labels;

  bool composite() const { return labels.size() > 1; }
  bool has(std::string_view l) const { return labels.count(std::string(l)) > 0; }
  bool unknown() const { return has(kUnknownApi); }
};

// Reporting name for a label set, e.g. "ID+METHOD" or "STRING/OID".
std::string composite_name(const LabelSet& set);

// `resolved` is the resolution of the first argument for restrictive sites
// and is ignored for flexible ones. The restrictive predicates then only
// see syntax.
LabelSet classify(const InvocationSite& site, const ResolvedValue* resolved);

using ArgumentSignature = std::map<std::string, std::size_t>;

ArgumentSignature signature_of(const InvocationSite& site);
// "{identifier:3, ternary_expression:1}"
std::string to_string(const ArgumentSignature& sig);

std::vector<std::string> match_signature(const std::vector<InvocationSite>& sites,
                                         const ArgumentSignature& pattern);

struct PrevalenceRow {
  std::string label;
  std::string category;
  std::size_t count = 0;
};

// Per-label site counts in catalog order, followed by UNKNOWN_API. Rows with
// a zero count are kept so the table shape is fixed.
std::vector<PrevalenceRow> prevalence_report(const std::vector<LabelSet>& labels);
std::string prevalence_csv(const std::vector<PrevalenceRow>& rows);

}  // namespace cryptolens
