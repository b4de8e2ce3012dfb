#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cryptolens/report.h"

namespace cryptolens::cli {

// 0 clean, 1 a finding reached fail_on, 2 fatal error.
inline constexpr int kExitFindings = 1;
inline constexpr int kExitFatal = 2;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_scan(const std::string& dir, const ScanConfig& config, Streams io);

// `input` is a JSON-lines report or a source directory, which is scanned first.
int cmd_stratify(const std::string& input, const ScanConfig& config, Streams io);
int cmd_sample(const std::string& input, const ScanConfig& config, Streams io);

// Per-site labels as CSV. With a signature pattern, only the ids of matching sites.
int cmd_classify(const std::string& dir, const ScanConfig& config,
                 const std::optional<std::string>& signature, Streams io);

enum class ReportView { kPrevalence, kStrata, kFindings, kCatalog };
int cmd_report(const std::string& report_path, ReportView view, const ScanConfig& config, Streams io);

int cmd_bench_gen(const std::string& outdir, std::uint64_t seed, Streams io);
// Each report is "self" or a tool CSV path. The matrix CSV goes to
// config.csv_output when set; the glyph table always goes to io.out.
int cmd_bench_run(const std::string& dir, const std::vector<std::string>& reports,
                  const ScanConfig& config, Streams io);

}  // namespace cryptolens::cli
