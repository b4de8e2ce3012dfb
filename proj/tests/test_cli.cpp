#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_commands.h"
#include "cryptolens/bench.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using cli::Streams;
using testing::fixture;
using testing::slurp;
using testing::spit;
using testing::TempDir;

struct Capture {
  std::ostringstream out, err;
  Streams io() { return {out, err}; }
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(CliScan, WritesReportAndHonoursFailOn) {
  ScanConfig c;
  Capture cap;
  EXPECT_EQ(cli::cmd_scan(fixture("flexible").string(), c, cap.io()), 0);
  EXPECT_EQ(count_lines(cap.out.str()), 7u + 1u);
  c.fail_on = Severity::kError;
  Capture again;
  EXPECT_EQ(cli::cmd_scan(fixture("flexible").string(), c, again.io()), cli::kExitFindings);
  // Only the summary's fail_on field differs.
  auto head = [](const std::string& s) { return s.substr(0, s.rfind("\"fail_on\"")); };
  EXPECT_EQ(head(cap.out.str()), head(again.out.str()));
  EXPECT_NE(again.out.str().find("\"fail_on\":\"ERROR\""), std::string::npos);
}

TEST(CliScan, OutputFilesAndStrataCsv) {
  TempDir d;
  ScanConfig c;
  c.output = (d.path() / "r.jsonl").string();
  c.csv_output = (d.path() / "s.csv").string();
  Capture cap;
  EXPECT_EQ(cli::cmd_scan(fixture("resolve").string(), c, cap.io()), 0);
  EXPECT_TRUE(cap.out.str().empty());
  auto report = slurp(d.path() / "r.jsonl");
  EXPECT_GT(count_lines(report), 1u);
  EXPECT_EQ(slurp(d.path() / "s.csv").rfind("category,stratum_key,score,population,sample_size\n", 0), 0u);
}

TEST(CliScan, MissingDirectoryIsFatal) {
  Capture cap;
  EXPECT_EQ(cli::cmd_scan("/nonexistent/cryptolens", ScanConfig{}, cap.io()), cli::kExitFatal);
  EXPECT_NE(cap.err.str().find("error:"), std::string::npos);
}

TEST(CliScan, BrokenFileIsAWarningNotAFailure) {
  TempDir d;
  spit(d.path() / "Bad.java", "\x01\x02 }}}} ((((");
  spit(d.path() / "Ok.java", "class Ok { Object f() throws Exception { return Cipher.getInstance(\"DES\"); } }");
  Capture cap;
  EXPECT_EQ(cli::cmd_scan(d.path().string(), ScanConfig{}, cap.io()), 0);
  EXPECT_NE(cap.err.str().find("Bad.java"), std::string::npos);
  EXPECT_EQ(count_lines(cap.out.str()), 2u);
}

TEST(CliSample, FromReportOrDirectory) {
  TempDir d;
  ScanConfig c;
  c.output = (d.path() / "r.jsonl").string();
  Capture scan;
  ASSERT_EQ(cli::cmd_scan(fixture("").string(), c, scan.io()), 0);

  ScanConfig s;
  s.seed = 3;
  Capture from_report, from_dir;
  EXPECT_EQ(cli::cmd_sample((d.path() / "r.jsonl").string(), s, from_report.io()), 0);
  EXPECT_EQ(cli::cmd_sample(fixture("").string(), s, from_dir.io()), 0);
  EXPECT_EQ(from_report.out.str(), from_dir.out.str());
  auto j = nlohmann::json::parse(from_report.out.str());
  EXPECT_FALSE(j.empty());

  Capture strata;
  EXPECT_EQ(cli::cmd_stratify((d.path() / "r.jsonl").string(), s, strata.io()), 0);
  EXPECT_EQ(strata.out.str().rfind("category,stratum_key", 0), 0u);
}

TEST(CliSample, MalformedReportIsFatal) {
  TempDir d;
  spit(d.path() / "bad.jsonl", "{\"id\":1}\nnot json\n");
  Capture cap;
  EXPECT_EQ(cli::cmd_sample((d.path() / "bad.jsonl").string(), ScanConfig{}, cap.io()), cli::kExitFatal);
  EXPECT_NE(cap.err.str().find("line"), std::string::npos);
}

TEST(CliClassify, CsvAndSignatureFilter) {
  TempDir d;
  generate_corpus(d.path(), 7);
  Capture all;
  EXPECT_EQ(cli::cmd_classify(d.path().string(), ScanConfig{}, std::nullopt, all.io()), 0);
  EXPECT_EQ(all.out.str().rfind("id,category,labels,signature\n", 0), 0u);
  Capture only;
  EXPECT_EQ(cli::cmd_classify(d.path().string(), ScanConfig{}, std::string("{identifier:3, ternary_expression:1}"),
                              only.io()),
            0);
  auto out = only.out.str();
  EXPECT_EQ(count_lines(out), 1u);
  EXPECT_NE(out.find("12_TEROP/"), std::string::npos);
  Capture bad;
  EXPECT_EQ(cli::cmd_classify(d.path().string(), ScanConfig{}, std::string("{identifier}"), bad.io()),
            cli::kExitFatal);
}

TEST(CliReport, Views) {
  TempDir d;
  ScanConfig c;
  c.output = (d.path() / "r.jsonl").string();
  Capture scan;
  ASSERT_EQ(cli::cmd_scan(fixture("").string(), c, scan.io()), 0);
  std::string path = (d.path() / "r.jsonl").string();

  Capture prev, findings, catalog, strata;
  EXPECT_EQ(cli::cmd_report(path, cli::ReportView::kPrevalence, ScanConfig{}, prev.io()), 0);
  EXPECT_NE(prev.out.str().find("STRBUF"), std::string::npos);
  EXPECT_EQ(cli::cmd_report(path, cli::ReportView::kFindings, ScanConfig{}, findings.io()), 0);
  auto tool = parse_tool_report(findings.out.str());
  EXPECT_EQ(tool.tool, "cryptolens");
  EXPECT_FALSE(tool.rows.empty());
  EXPECT_EQ(cli::cmd_report(path, cli::ReportView::kCatalog, ScanConfig{}, catalog.io()), 0);
  EXPECT_NO_THROW((void)nlohmann::json::parse(catalog.out.str()));
  EXPECT_EQ(cli::cmd_report(path, cli::ReportView::kStrata, ScanConfig{}, strata.io()), 0);
  EXPECT_EQ(strata.out.str().rfind("category,", 0), 0u);
}

TEST(CliBench, GenerateThenGradeSelfAndCsv) {
  TempDir d;
  Capture gen;
  ASSERT_EQ(cli::cmd_bench_gen(d.path().string(), 7, gen.io()), 0);
  EXPECT_NE(gen.out.str().find("generated 23 cases"), std::string::npos);

  ScanConfig c;
  c.csv_output = (d.path() / "matrix.csv").string();
  Capture run;
  EXPECT_EQ(cli::cmd_bench_run(d.path().string(), {"self"}, c, run.io()), 0);
  EXPECT_NE(run.out.str().find("cryptolens: 23/23 detected"), std::string::npos);
  auto matrix = slurp(d.path() / "matrix.csv");
  EXPECT_EQ(count_lines(matrix), 24u);

  // An external report with one useful row.
  auto cases = load_corpus(d.path());
  const auto& v = cases[14].variants.front();  // empty trust manager
  spit(d.path() / "ext.csv", "tool,file,start_line,end_line,rule,message\next," + v.file + "," +
                                 std::to_string(v.expected[0].start_line) + "," +
                                 std::to_string(v.expected[0].end_line) + ",INSECURE_TM,TrustManager accepts everything\n");
  Capture ext;
  EXPECT_EQ(cli::cmd_bench_run(d.path().string(), {(d.path() / "ext.csv").string()}, ScanConfig{}, ext.io()), 0);
  EXPECT_NE(ext.out.str().find("ext: 1/23 detected"), std::string::npos) << ext.out.str();

  Capture missing;
  EXPECT_EQ(cli::cmd_bench_run(d.path().string(), {(d.path() / "nope.csv").string()}, ScanConfig{}, missing.io()),
            cli::kExitFatal);
}

}  // namespace
}  // namespace cryptolens
