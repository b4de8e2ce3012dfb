#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_commands.h"

namespace {

using namespace cryptolens;

// Flags override the config file, which overrides the defaults.
struct Flags {
  std::optional<std::string> config_path;
  std::vector<std::string> apis;
  std::optional<int> max_indirection, max_candidates;
  std::optional<long> max_steps;
  std::optional<double> confidence, margin;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> fail_on, mode;
  std::optional<unsigned> jobs;
  std::optional<std::string> output, csv;

  ScanConfig resolve() const {
    ScanConfig c;
    if (config_path) c = load_config(*config_path, c);
    std::string extra;
    for (const auto& a : apis) extra += "api = " + a + "\n";
    if (max_indirection) extra += "max_indirection = " + std::to_string(*max_indirection) + "\n";
    if (max_candidates) extra += "max_candidates = " + std::to_string(*max_candidates) + "\n";
    if (max_steps) extra += "max_steps = " + std::to_string(*max_steps) + "\n";
    if (fail_on) extra += "fail_on = " + *fail_on + "\n";
    if (mode) extra += "mode = " + *mode + "\n";
    apply_config_text(extra, c);
    if (confidence) c.confidence = *confidence;
    if (margin) c.margin = *margin;
    if (seed) c.seed = *seed;
    if (jobs) c.jobs = *jobs;
    if (output) c.output = *output;
    if (csv) c.csv_output = *csv;
    return c;
  }
};

void add_config_flags(CLI::App* sub, Flags& f, bool sampling) {
  sub->add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--api", f.apis, "extra API: Class.method, methodName(arity) or a builtin kind");
  sub->add_option("--max-indirection", f.max_indirection, "resolver hop depth (default 2)");
  sub->add_option("--max-candidates", f.max_candidates, "resolver candidate cap (default 16)");
  sub->add_option("--max-steps", f.max_steps, "resolver step budget (default 10000)");
  sub->add_option("--jobs,-j", f.jobs, "worker threads");
  sub->add_option("--output,-o", f.output, "primary output file (default stdout)");
  sub->add_option("--csv", f.csv, "tabular side output file");
  sub->add_option("--mode", f.mode, "strata mode: exact or ranged");
  if (sampling) {
    sub->add_option("--confidence", f.confidence, "confidence level (default 0.95)");
    sub->add_option("--margin", f.margin, "margin of error (default 0.05)");
    sub->add_option("--seed", f.seed, "sampling seed (default 0)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crypto API misuse scanner for Java sources"};
  app.require_subcommand(1);
  Flags flags;
  std::string input;
  cli::Streams io{std::cout, std::cerr};

  auto* scan = app.add_subcommand("scan", "scan a source tree and emit a JSON-lines report");
  scan->add_option("dir", input, "source directory")->required();
  add_config_flags(scan, flags, true);
  scan->add_option("--fail-on", flags.fail_on, "exit 1 when a finding reaches error, warning, info or none");

  auto* stratify = app.add_subcommand("stratify", "complexity strata with sample sizes as CSV");
  stratify->add_option("input", input, "JSON-lines report or source directory")->required();
  add_config_flags(stratify, flags, true);

  auto* sample = app.add_subcommand("sample", "stratified random sample plan as JSON");
  sample->add_option("input", input, "JSON-lines report or source directory")->required();
  add_config_flags(sample, flags, true);

  std::optional<std::string> signature;
  auto* classify = app.add_subcommand("classify", "per-site labels as CSV");
  classify->add_option("dir", input, "source directory")->required();
  classify->add_option("--signature", signature, "list sites with this argument signature, e.g. {identifier:3}");
  add_config_flags(classify, flags, false);

  std::string view = "prevalence";
  auto* report = app.add_subcommand("report", "tables derived from a JSON-lines report");
  report->add_option("report", input, "JSON-lines report (not needed for --view catalog)");
  report->add_option("--view", view, "prevalence, strata, findings or catalog")
      ->check(CLI::IsMember({"prevalence", "strata", "findings", "catalog"}));
  add_config_flags(report, flags, true);

  auto* bench = app.add_subcommand("bench", "benchmark corpus generation and grading");
  bench->require_subcommand(1);
  std::uint64_t bench_seed = 7;
  auto* gen = bench->add_subcommand("gen", "write the 23-case corpus and manifest");
  gen->add_option("outdir", input, "output directory")->required();
  gen->add_option("--seed", bench_seed, "generation seed (default 7)");
  std::vector<std::string> reports;
  auto* run = bench->add_subcommand("run", "grade tool reports against a generated corpus");
  run->add_option("dir", input, "corpus directory")->required()->check(CLI::ExistingDirectory);
  run->add_option("--report", reports, "\"self\" or a tool report CSV; repeatable")->required();
  run->add_option("--csv", flags.csv, "write the verdict matrix as CSV");
  run->add_option("--jobs,-j", flags.jobs, "worker threads for the self report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitFatal;
  }

  ScanConfig config;
  try {
    config = flags.resolve();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFatal;
  }

  if (*scan) return cli::cmd_scan(input, config, io);
  if (*stratify) return cli::cmd_stratify(input, config, io);
  if (*sample) return cli::cmd_sample(input, config, io);
  if (*classify) return cli::cmd_classify(input, config, signature, io);
  if (*report) {
    auto v = view == "strata"     ? cli::ReportView::kStrata
             : view == "findings" ? cli::ReportView::kFindings
             : view == "catalog"  ? cli::ReportView::kCatalog
                                  : cli::ReportView::kPrevalence;
    if (input.empty() && v != cli::ReportView::kCatalog) {
      std::cerr << "error: report path required\n";
      return cli::kExitFatal;
    }
    return cli::cmd_report(input, v, config, io);
  }
  if (*gen) return cli::cmd_bench_gen(input, bench_seed, io);
  if (*run) return cli::cmd_bench_run(input, reports, config, io);
  return cli::kExitFatal;
}
