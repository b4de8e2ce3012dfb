#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/ingest.h"
#include "cryptolens/rules.h"

namespace cryptolens {

struct ExpectedFinding {
  std::string rule_id;
  Severity severity = Severity::kInfo;
  std::uint32_t start_line = 0;
  std::uint32_t end_line = 0;
  // Lower-case terms an external tool's rule or message may use instead of
  // our rule id, e.g. "ecb" or "des".
  std::vector<std::string> keywords;
  // Effective value the finding is about; absent for flexible and
  // native-code findings.
  std::optional<std::string> effective_value;
  // Whether the effective value is hidden from the source's literals.
  std::optional<bool> evasive;
};

struct BenchVariant {
  std::string file;    // relative to the corpus root, forward slashes
  std::string source;  // Java text
  std::string note;    // which published shape the template follows
  // Labels the classifier must assign to the variant's site.
  std::vector<std::string> labels;
  std::vector<ExpectedFinding> expected;
  // Extra non-Java files written next to the variant (native stubs).
  std::vector<std::pair<std::string, std::string>> companions;
};

struct BenchmarkCase {
  std::string case_id;  // row name, e.g. "STRING/OID"
  ApiCategory category = ApiCategory::kRestrictive;
  std::string dir;      // directory name, e.g. "01_STRING_OID"
  std::vector<BenchVariant> variants;
};

// The 23 rows in table order: 14 restrictive, then 9 flexible.
const std::vector<std::string>& bench_case_ids();
std::string bench_dir_name(std::size_t index, std::string_view case_id);

// Pure function of the seed.
std::vector<BenchmarkCase> build_cases(std::uint64_t seed);

std::string manifest_json(const std::vector<BenchmarkCase>& cases, std::uint64_t seed);
// Sources are not part of the manifest; variants come back without them.
std::vector<BenchmarkCase> parse_manifest(std::string_view json_text);

// Writes one directory per case plus manifest.json. Throws IoError.
std::vector<BenchmarkCase> generate_corpus(const std::filesystem::path& outdir,
                                           std::uint64_t seed);
std::vector<BenchmarkCase> load_corpus(const std::filesystem::path& dir);

struct ReportRow {
  std::string file;
  std::uint32_t start_line = 0;
  std::uint32_t end_line = 0;
  std::string rule;
  std::string message;
};

struct ToolReport {
  std::string tool;
  std::vector<ReportRow> rows;
  // Files whose rows could not be read, or where the tool reported its own
  // failure (rule "TOOL_ERROR").
  std::vector<std::string> error_files;
};

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV with header tool,file,start_line,end_line,rule,message. A wrong header
// or wrong column count is fatal; a bad line number only poisons its file.
ToolReport parse_tool_report(std::string_view csv);
std::string tool_report_csv(const ToolReport& report);

// Runs the bundled detector over a generated corpus.
ToolReport self_report(const std::filesystem::path& corpus_dir, unsigned jobs = 1);

enum class Verdict { kDetected, kPartial, kUndetected, kToolError };
std::string_view to_string(Verdict v);

enum class PartialReason { kNone, kWrongMisuse, kSubsetOfMisuses, kSomeInstances };
std::string_view to_string(PartialReason r);

struct DetectionVerdict {
  std::string case_id;
  Verdict verdict = Verdict::kUndetected;
  PartialReason reason = PartialReason::kNone;
  std::size_t matched = 0;   // expected findings matched
  std::size_t expected = 0;  // expected findings in total
};

// A row matches an expected finding when the file is the same, the line
// ranges overlap and the rule is compatible (same id or a keyword hit).
bool row_matches(const ReportRow& row, const std::string& file, const ExpectedFinding& e);

std::vector<DetectionVerdict> grade(const std::vector<BenchmarkCase>& cases,
                                    const ToolReport& report);

struct ToolColumn {
  std::string tool;
  std::vector<DetectionVerdict> verdicts;
};

// Cases x tools in table order. No tools gives the header alone.
std::string summary_csv(const std::vector<ToolColumn>& columns);
std::string summary_text(const std::vector<ToolColumn>& columns);
std::string_view glyph(Verdict v);

}  // namespace cryptolens
