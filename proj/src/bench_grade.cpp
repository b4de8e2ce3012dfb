#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "cryptolens/bench.h"
#include "cryptolens/pipeline.h"

namespace cryptolens {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_path(std::string_view p) {
  std::string s(p);
  std::replace(s.begin(), s.end(), '\\', '/');
  while (s.rfind("./", 0) == 0) s.erase(0, 2);
  return s;
}

bool same_file(std::string_view reported, const std::string& file) {
  std::string r = normalize_path(reported);
  return r == file || (r.size() > file.size() && r.compare(r.size() - file.size(), file.size(), file) == 0 &&
                       r[r.size() - file.size() - 1] == '/');
}

// RFC 4180 records. Quoted fields may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw ReportFormatError("unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::optional<std::uint32_t> parse_line(const std::string& s) {
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  return static_cast<std::uint32_t>(std::stoul(s));
}

}  // namespace

ToolReport parse_tool_report(std::string_view csv) {
  auto rows = parse_csv(csv);
  static const std::vector<std::string> kHeader = {"tool", "file", "start_line", "end_line", "rule", "message"};
  if (rows.empty() || rows.front() != kHeader) {
    throw ReportFormatError("row 1: header must be tool,file,start_line,end_line,rule,message");
  }
  ToolReport report;
  std::set<std::string> errors;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != kHeader.size()) {
      throw ReportFormatError("row " + std::to_string(i + 1) + ": expected 6 columns, found " +
                              std::to_string(r.size()));
    }
    if (report.tool.empty()) report.tool = r[0];
    std::string file = normalize_path(r[1]);
    auto start = parse_line(r[2]);
    auto end = r[3].empty() ? start : parse_line(r[3]);
    if (!start || !end || r[4] == "TOOL_ERROR") {
      errors.insert(file);
      continue;
    }
    report.rows.push_back({file, *start, std::max(*start, *end), r[4], r[5]});
  }
  report.error_files.assign(errors.begin(), errors.end());
  return report;
}

std::string tool_report_csv(const ToolReport& report) {
  std::ostringstream os;
  os << "tool,file,start_line,end_line,rule,message\n";
  for (const auto& r : report.rows) {
    os << csv_field(report.tool) << ',' << csv_field(r.file) << ',' << r.start_line << ',' << r.end_line << ','
       << csv_field(r.rule) << ',' << csv_field(r.message) << '\n';
  }
  for (const auto& f : report.error_files) {
    os << csv_field(report.tool) << ',' << csv_field(f) << ",0,0,TOOL_ERROR,\n";
  }
  return os.str();
}

ToolReport self_report(const std::filesystem::path& corpus_dir, unsigned jobs) {
  ScanResult scan = scan_corpus(corpus_dir, ApiSet::canonical(), jobs);
  AnalysisOptions opts;
  opts.jobs = jobs;
  ToolReport report;
  report.tool = "cryptolens";
  for (const auto& w : scan.warnings) report.error_files.push_back(w.path);
  for (const auto& a : analyze_sites(scan.sites, opts)) {
    for (const auto& f : a.findings) {
      std::string msg = f.message;
      if (f.effective_value) msg += " [" + *f.effective_value + "]";
      report.rows.push_back({a.site->path(), f.start_line, f.end_line, f.rule_id, msg});
    }
  }
  return report;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kDetected: return "DETECTED";
    case Verdict::kPartial: return "PARTIAL";
    case Verdict::kUndetected: return "UNDETECTED";
    case Verdict::kToolError: return "TOOL_ERROR";
  }
  return "UNDETECTED";
}

std::string_view to_string(PartialReason r) {
  switch (r) {
    case PartialReason::kNone: return "";
    case PartialReason::kWrongMisuse: return "wrong-misuse";
    case PartialReason::kSubsetOfMisuses: return "subset-of-misuses";
    case PartialReason::kSomeInstances: return "some-instances";
  }
  return "";
}

std::string_view glyph(Verdict v) {
  switch (v) {
    case Verdict::kDetected: return "✓";
    case Verdict::kPartial: return "◐";
    case Verdict::kUndetected: return "✗";
    case Verdict::kToolError: return "⊘";
  }
  return "?";
}

bool row_matches(const ReportRow& row, const std::string& file, const ExpectedFinding& e) {
  if (!same_file(row.file, file)) return false;
  if (row.end_line < e.start_line || e.end_line < row.start_line) return false;
  if (lower(row.rule) == lower(e.rule_id)) return true;
  std::string text = lower(row.rule + " " + row.message);
  return std::any_of(e.keywords.begin(), e.keywords.end(),
                     [&](const std::string& k) { return !k.empty() && text.find(k) != std::string::npos; });
}

std::vector<DetectionVerdict> grade(const std::vector<BenchmarkCase>& cases, const ToolReport& report) {
  std::vector<DetectionVerdict> out;
  for (const auto& c : cases) {
    DetectionVerdict v;
    v.case_id = c.case_id;
    bool errored = false, subset = false, wrong = false;
    std::size_t full_variants = 0;
    for (const auto& var : c.variants) {
      errored = errored || std::any_of(report.error_files.begin(), report.error_files.end(),
                                       [&](const std::string& f) { return same_file(f, var.file); });
      std::size_t hit = 0;
      for (const auto& e : var.expected) {
        bool m = std::any_of(report.rows.begin(), report.rows.end(),
                             [&](const ReportRow& r) { return row_matches(r, var.file, e); });
        if (m) ++hit;
      }
      v.expected += var.expected.size();
      v.matched += hit;
      if (hit == var.expected.size()) ++full_variants;
      if (hit > 0 && hit < var.expected.size()) subset = true;
      // A warning on the site that names none of the actual misuses.
      for (const auto& r : report.rows) {
        if (!same_file(r.file, var.file)) continue;
        bool on_site = std::any_of(var.expected.begin(), var.expected.end(), [&](const ExpectedFinding& e) {
          return !(r.end_line < e.start_line || e.end_line < r.start_line);
        });
        bool names_one = std::any_of(var.expected.begin(), var.expected.end(),
                                     [&](const ExpectedFinding& e) { return row_matches(r, var.file, e); });
        if (on_site && !names_one) wrong = true;
      }
    }
    if (errored) {
      v.verdict = Verdict::kToolError;
    } else if (v.matched == v.expected) {
      v.verdict = Verdict::kDetected;
    } else if (subset) {
      v.verdict = Verdict::kPartial;
      v.reason = PartialReason::kSubsetOfMisuses;
    } else if (full_variants > 0) {
      v.verdict = Verdict::kPartial;
      v.reason = PartialReason::kSomeInstances;
    } else if (wrong) {
      v.verdict = Verdict::kPartial;
      v.reason = PartialReason::kWrongMisuse;
    } else {
      v.verdict = Verdict::kUndetected;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string summary_csv(const std::vector<ToolColumn>& columns) {
  std::ostringstream os;
  os << "row,case";
  for (const auto& c : columns) os << ',' << csv_field(c.tool);
  os << '\n';
  if (columns.empty()) return os.str();
  const auto& ids = bench_case_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    os << (i + 1) << ',' << ids[i];
    for (const auto& c : columns) {
      os << ',' << (i < c.verdicts.size() ? to_string(c.verdicts[i].verdict) : std::string_view(""));
    }
    os << '\n';
  }
  return os.str();
}

std::string summary_text(const std::vector<ToolColumn>& columns) {
  std::ostringstream os;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  os << pad("#", 4) << pad("case", 12);
  for (const auto& c : columns) os << pad(c.tool, std::max<std::size_t>(c.tool.size(), 4) + 2);
  os << '\n';
  if (!columns.empty()) {
    const auto& ids = bench_case_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      os << pad(std::to_string(i + 1) + ".", 4) << pad(ids[i], 12);
      for (const auto& c : columns) {
        std::string g = i < c.verdicts.size() ? std::string(glyph(c.verdicts[i].verdict)) : " ";
        // Glyphs are one column wide but several bytes long.
        os << g << std::string(std::max<std::size_t>(c.tool.size(), 4) + 1, ' ');
      }
      os << '\n';
    }
  }
  os << glyph(Verdict::kDetected) << " = detected, " << glyph(Verdict::kPartial) << " = partial, "
     << glyph(Verdict::kUndetected) << " = undetected, " << glyph(Verdict::kToolError)
     << " = tool error\n";
  return os.str();
}

}  // namespace cryptolens
