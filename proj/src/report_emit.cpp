#include <nlohmann/json.hpp>

#include "cryptolens/report.h"
#include "json_obj.h"

namespace cryptolens {

namespace {

using ojson = nlohmann::ordered_json;
using Obj = detail::JsonObj;

std::string fixed(double v) { return format_score(v); }

ojson finding_json(const MisuseFinding& f) {
  ojson j;
  j["rule_id"] = f.rule_id;
  j["severity"] = std::string(to_string(f.severity));
  j["effective_value"] = f.effective_value ? ojson(*f.effective_value) : ojson(nullptr);
  j["message"] = f.message;
  j["evidence"] = f.evidence;
  j["evasive"] = f.evasive;
  j["start_line"] = f.start_line;
  j["end_line"] = f.end_line;
  return j;
}

ojson resolved_json(const ResolvedValue& r) {
  ojson j;
  j["candidates"] = r.candidates;
  ojson res = ojson::array();
  for (Residual x : r.residuals) res.push_back(std::string(to_string(x)));
  j["residuals"] = res;
  j["fragments"] = r.fragments;
  j["encrypted_param"] = r.encrypted_param;
  j["secure_random"] = r.secure_random;
  ojson trace = ojson::array();
  for (const auto& t : r.trace) {
    ojson s;
    s["rule"] = t.rule;
    s["detail"] = t.detail;
    s["line"] = t.line;
    s["span"] = {t.span.start, t.span.end};
    s["intermediate"] = t.intermediate;
    trace.push_back(s);
  }
  j["trace"] = trace;
  return j;
}

}  // namespace

ScanReport run_scan(const std::filesystem::path& dir, const ScanConfig& config) {
  ScanReport r;
  r.scan = scan_corpus(dir, config.apis, config.jobs);
  AnalysisOptions opts;
  opts.budget = config.budget;
  opts.jobs = config.jobs;
  if (!config.extra_oids.empty()) opts.catalog = RuleCatalog::with_extra_oids(config.extra_oids);
  r.analyses = analyze_sites(r.scan.sites, opts);
  return r;
}

std::string site_json(const SiteAnalysis& a) {
  const InvocationSite& s = *a.site;
  ojson labels = ojson::array();
  for (const auto& l : a.labels.labels) labels.push_back(l);
  ojson sig = ojson::object();
  for (const auto& [k, n] : a.signature) sig[k] = n;
  ojson findings = ojson::array();
  for (const auto& f : a.findings) findings.push_back(finding_json(f));
  Obj o;
  o.add("id", s.id)
      .add("path", s.path())
      .add("offset", s.offset())
      .add("line", s.node->start_line)
      .add("api", std::string(to_string(s.api)))
      .add("category", std::string(to_string(s.category())))
      .add("class", s.enclosing_class)
      .raw("method", s.enclosing_method ? ojson(*s.enclosing_method).dump() : "null")
      .add("d", a.d)
      .raw("score", fixed(a.score))
      .raw("labels", labels.dump())
      .add("composite", composite_name(a.labels))
      .raw("signature", sig.dump())
      .raw("resolved", a.resolved ? resolved_json(*a.resolved).dump() : "null")
      .raw("findings", findings.dump());
  return o.str();
}

std::string summary_json(const ScanReport& report, const ScanConfig& config) {
  ojson warnings = ojson::array();
  for (const auto& w : report.scan.warnings) warnings.push_back({{"path", w.path}, {"message", w.message}});
  std::size_t counts[3] = {0, 0, 0};
  std::vector<ReportSite> sites;
  for (const auto& a : report.analyses) {
    for (const auto& f : a.findings) ++counts[static_cast<int>(f.severity)];
    ReportSite rs;
    rs.id = a.site->id;
    rs.category = a.site->category();
    rs.d = a.d;
    rs.labels.assign(a.labels.labels.begin(), a.labels.labels.end());
    sites.push_back(std::move(rs));
  }
  std::string strata = "[";
  for (const auto& cp : plan_sample(sites, config.mode, config.confidence, config.margin, config.seed, false)) {
    for (const auto& st : cp.plan.strata) {
      Obj o;
      o.add("category", std::string(to_string(cp.category))).add("key", st.key);
      if (config.mode == StrataMode::kExact) o.raw("score", fixed(score(st.key)));
      o.add("population", st.population).add("sample_size", st.sample_size);
      strata += (strata.size() > 1 ? "," : "") + o.str();
    }
  }
  strata += "]";
  ojson prevalence = ojson::array();
  for (const auto& row : prevalence_of(sites)) {
    prevalence.push_back({{"label", row.label}, {"category", row.category}, {"count", row.count}});
  }
  ojson findings = {{"ERROR", counts[2]}, {"WARNING", counts[1]}, {"INFO", counts[0]}};
  Obj o;
  o.add("summary", true)
      .add("files", report.scan.units.size())
      .add("sites", report.analyses.size())
      .raw("warnings", warnings.dump())
      .raw("findings", findings.dump())
      .add("fail_on", fail_on_name(config.fail_on))
      .add("mode", std::string(config.mode == StrataMode::kExact ? "exact" : "ranged"))
      .raw("confidence", fixed(config.confidence))
      .raw("margin", fixed(config.margin))
      .raw("strata", strata)
      .raw("prevalence", prevalence.dump());
  return o.str();
}

std::string report_jsonl(const ScanReport& report, const ScanConfig& config) {
  std::string out;
  for (const auto& a : report.analyses) out += site_json(a) + "\n";
  out += summary_json(report, config) + "\n";
  return out;
}

int exit_code(const std::vector<MisuseFinding>& findings, const std::optional<Severity>& fail_on) {
  if (!fail_on) return 0;
  for (const auto& f : findings) {
    if (static_cast<int>(f.severity) >= static_cast<int>(*fail_on)) return 1;
  }
  return 0;
}

int exit_code(const ScanReport& report, const std::optional<Severity>& fail_on) {
  for (const auto& a : report.analyses) {
    if (exit_code(a.findings, fail_on) != 0) return 1;
  }
  return 0;
}

}  // namespace cryptolens
