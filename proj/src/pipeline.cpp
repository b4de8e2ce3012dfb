#include "cryptolens/pipeline.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cryptolens/complexity.h"

namespace cryptolens {

SiteAnalysis analyze_site(const InvocationSite& site, const AnalysisOptions& options) {
  SiteAnalysis a;
  a.site = &site;
  a.d = count_d(site);
  a.score = score(static_cast<long long>(a.d));
  a.resolved = resolve_site(site, options.budget);
  const ResolvedValue* r = a.resolved ? &*a.resolved : nullptr;
  a.labels = classify(site, r);
  a.signature = signature_of(site);
  a.findings = check_site(site, r, a.labels, options.catalog);
  return a;
}

std::vector<SiteAnalysis> analyze_sites(const std::vector<InvocationSite>& sites,
                                        const AnalysisOptions& options) {
  std::vector<SiteAnalysis> out(sites.size());
  unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(sites.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < sites.size(); ++i) out[i] = analyze_site(sites[i], options);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < sites.size(); i = next++) out[i] = analyze_site(sites[i], options);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace cryptolens
