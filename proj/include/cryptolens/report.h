#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/classify.h"
#include "cryptolens/complexity.h"
#include "cryptolens/ingest.h"
#include "cryptolens/pipeline.h"
#include "cryptolens/resolve.h"
#include "cryptolens/rules.h"

namespace cryptolens {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON-lines report.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  ApiSet apis = ApiSet::canonical();
  ResolutionBudget budget;
  double confidence = 0.95;
  double margin = 0.05;
  std::uint64_t seed = 0;
  std::optional<Severity> fail_on;  // nullopt: never fail
  StrataMode mode = StrataMode::kExact;
  unsigned jobs = 1;
  std::map<std::string, std::string> extra_oids;
  std::string output;      // JSON-lines report or sample plan; empty for stdout
  std::string csv_output;  // tabular side output; empty to skip
};

// "error", "warning", "info" or "none", any case.
std::optional<Severity> parse_fail_on(std::string_view text);
std::string fail_on_name(const std::optional<Severity>& fail_on);

// Key-value lines, '#' comments. `api` and `oid.<dotted> = NAME` may repeat;
// `api` adds to the set already in `config`. Throws ConfigError with the line.
void apply_config_text(std::string_view text, ScanConfig& config);
ScanConfig load_config(const std::filesystem::path& path, ScanConfig base = {});

// "{identifier:3, ternary_expression:1}"; braces and spaces optional.
ArgumentSignature parse_signature(std::string_view text);

struct ScanReport {
  ScanResult scan;
  std::vector<SiteAnalysis> analyses;
};

// Throws IoError when the directory cannot be read.
ScanReport run_scan(const std::filesystem::path& dir, const ScanConfig& config);

std::string site_json(const SiteAnalysis& a);
std::string summary_json(const ScanReport& report, const ScanConfig& config);
// One line per site in (path, offset) order, then the summary line.
std::string report_jsonl(const ScanReport& report, const ScanConfig& config);

// 1 when some finding reaches fail_on, else 0.
int exit_code(const std::vector<MisuseFinding>& findings, const std::optional<Severity>& fail_on);
int exit_code(const ScanReport& report, const std::optional<Severity>& fail_on);

// What the sampling side needs from a report line.
struct ReportSite {
  std::string id;
  std::string path;
  ApiCategory category = ApiCategory::kRestrictive;
  std::size_t d = 0;
  std::vector<std::string> labels;
  std::vector<MisuseFinding> findings;
};

// Requires one summary line, last. Throws ReportError naming the line.
std::vector<ReportSite> parse_report(std::string_view jsonl);

struct CategoryPlan {
  ApiCategory category = ApiCategory::kRestrictive;
  SamplePlan plan;
};

// Restrictive then flexible; categories without sites are dropped. When
// `draw` is false strata carry sizes but no selection.
std::vector<CategoryPlan> plan_sample(const std::vector<ReportSite>& sites, StrataMode mode,
                                      double confidence, double margin, std::uint64_t seed,
                                      bool draw);

// category,stratum_key,score,population,sample_size
std::string strata_csv(const std::vector<CategoryPlan>& plans, StrataMode mode);
std::string plan_json(const std::vector<CategoryPlan>& plans, StrataMode mode);

std::vector<PrevalenceRow> prevalence_of(const std::vector<ReportSite>& sites);

// Findings as a tool report, so the scanner can be graded like any other tool.
std::string findings_csv(const std::vector<ReportSite>& sites);

}  // namespace cryptolens
