#include "cli_commands.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cryptolens/bench.h"

namespace cryptolens::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Empty path means the stream.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

int guarded(Streams io, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

void report_warnings(const ScanReport& r, std::ostream& err) {
  for (const auto& w : r.scan.warnings) err << "warning: " << w.path << ": " << w.message << '\n';
}

std::vector<ReportSite> load_sites(const std::string& input, const ScanConfig& config, Streams io) {
  if (fs::is_directory(input)) {
    ScanReport r = run_scan(input, config);
    report_warnings(r, io.err);
    return parse_report(report_jsonl(r, config));
  }
  return parse_report(read_text(input));
}

}  // namespace

int cmd_scan(const std::string& dir, const ScanConfig& config, Streams io) {
  return guarded(io, [&] {
    ScanReport r = run_scan(dir, config);
    report_warnings(r, io.err);
    emit(report_jsonl(r, config), config.output, io.out);
    if (!config.csv_output.empty()) {
      auto sites = parse_report(report_jsonl(r, config));
      emit(strata_csv(plan_sample(sites, config.mode, config.confidence, config.margin, config.seed, false),
                      config.mode),
           config.csv_output, io.out);
    }
    return exit_code(r, config.fail_on);
  });
}

int cmd_stratify(const std::string& input, const ScanConfig& config, Streams io) {
  return guarded(io, [&] {
    auto sites = load_sites(input, config, io);
    auto plans = plan_sample(sites, config.mode, config.confidence, config.margin, config.seed, false);
    emit(strata_csv(plans, config.mode), config.csv_output.empty() ? config.output : config.csv_output, io.out);
    return 0;
  });
}

int cmd_sample(const std::string& input, const ScanConfig& config, Streams io) {
  return guarded(io, [&] {
    auto sites = load_sites(input, config, io);
    auto plans = plan_sample(sites, config.mode, config.confidence, config.margin, config.seed, true);
    emit(plan_json(plans, config.mode), config.output, io.out);
    if (!config.csv_output.empty()) emit(strata_csv(plans, config.mode), config.csv_output, io.out);
    return 0;
  });
}

int cmd_classify(const std::string& dir, const ScanConfig& config,
                 const std::optional<std::string>& signature, Streams io) {
  return guarded(io, [&] {
    ScanReport r = run_scan(dir, config);
    report_warnings(r, io.err);
    std::ostringstream os;
    if (signature) {
      for (const auto& id : match_signature(r.scan.sites, parse_signature(*signature))) os << id << '\n';
    } else {
      os << "id,category,labels,signature\n";
      for (const auto& a : r.analyses) {
        os << csv_cell(a.site->id) << ',' << to_string(a.site->category()) << ','
           << csv_cell(composite_name(a.labels)) << ',' << csv_cell(to_string(a.signature)) << '\n';
      }
    }
    emit(os.str(), config.output, io.out);
    if (!config.csv_output.empty()) {
      std::vector<LabelSet> sets;
      for (const auto& a : r.analyses) sets.push_back(a.labels);
      emit(prevalence_csv(prevalence_report(sets)), config.csv_output, io.out);
    }
    return 0;
  });
}

int cmd_report(const std::string& report_path, ReportView view, const ScanConfig& config, Streams io) {
  return guarded(io, [&] {
    if (view == ReportView::kCatalog) {
      RuleCatalog catalog = config.extra_oids.empty() ? RuleCatalog::builtin()
                                                      : RuleCatalog::with_extra_oids(config.extra_oids);
      emit(catalog.to_json(), config.output, io.out);
      return 0;
    }
    auto sites = parse_report(read_text(report_path));
    std::string text;
    switch (view) {
      case ReportView::kPrevalence: text = prevalence_csv(prevalence_of(sites)); break;
      case ReportView::kStrata:
        text = strata_csv(plan_sample(sites, config.mode, config.confidence, config.margin, config.seed, false),
                          config.mode);
        break;
      case ReportView::kFindings: text = findings_csv(sites); break;
      case ReportView::kCatalog: break;
    }
    emit(text, config.output, io.out);
    return 0;
  });
}

int cmd_bench_gen(const std::string& outdir, std::uint64_t seed, Streams io) {
  return guarded(io, [&] {
    auto cases = generate_corpus(outdir, seed);
    std::size_t variants = 0;
    for (const auto& c : cases) variants += c.variants.size();
    io.out << "generated " << cases.size() << " cases, " << variants << " variants in " << outdir << '\n';
    return 0;
  });
}

int cmd_bench_run(const std::string& dir, const std::vector<std::string>& reports,
                  const ScanConfig& config, Streams io) {
  return guarded(io, [&] {
    auto cases = load_corpus(dir);
    std::vector<ToolColumn> columns;
    for (const auto& spec : reports) {
      ToolReport report = spec == "self" ? self_report(dir, config.jobs) : parse_tool_report(read_text(spec));
      if (report.tool.empty()) report.tool = fs::path(spec).stem().string();
      columns.push_back({report.tool, grade(cases, report)});
    }
    if (!config.csv_output.empty()) emit(summary_csv(columns), config.csv_output, io.out);
    io.out << summary_text(columns);
    for (const auto& c : columns) {
      std::size_t detected = 0;
      for (const auto& v : c.verdicts) detected += v.verdict == Verdict::kDetected;
      io.out << c.tool << ": " << detected << "/" << c.verdicts.size() << " detected\n";
    }
    return 0;
  });
}

}  // namespace cryptolens::cli
