#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cryptolens/classify.h"
#include "cryptolens/ingest.h"
#include "cryptolens/resolve.h"
#include "cryptolens/rules.h"

namespace cryptolens {

struct AnalysisOptions {
  ResolutionBudget budget;
  RuleCatalog catalog = RuleCatalog::builtin();
  unsigned jobs = 1;
};

// Everything computed for one site: score, resolution, labels and findings.
struct SiteAnalysis {
  const InvocationSite* site = nullptr;
  std::size_t d = 0;
  double score = 0.0;
  std::optional<ResolvedValue> resolved;
  LabelSet labels;
  ArgumentSignature signature;
  std::vector<MisuseFinding> findings;
};

SiteAnalysis analyze_site(const InvocationSite& site, const AnalysisOptions& options);

// Output order follows `sites`, whatever the job count.
std::vector<SiteAnalysis> analyze_sites(const std::vector<InvocationSite>& sites,
                                        const AnalysisOptions& options);

}  // namespace cryptolens
