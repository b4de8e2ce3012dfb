#include <sstream>

#include <nlohmann/json.hpp>

#include "cryptolens/bench.h"
#include "cryptolens/report.h"
#include "json_obj.h"

namespace cryptolens {

namespace {

using ojson = nlohmann::ordered_json;

MisuseFinding finding_from(const ojson& j) {
  MisuseFinding f;
  f.rule_id = j.at("rule_id").get<std::string>();
  auto sev = parse_severity(j.at("severity").get<std::string>());
  if (!sev) throw ReportError("unknown severity " + j.at("severity").get<std::string>());
  f.severity = *sev;
  if (j.contains("effective_value") && !j["effective_value"].is_null()) {
    f.effective_value = j["effective_value"].get<std::string>();
  }
  f.message = j.value("message", std::string());
  f.evasive = j.value("evasive", false);
  f.start_line = j.at("start_line").get<std::uint32_t>();
  f.end_line = j.value("end_line", f.start_line);
  return f;
}

ReportSite site_from(const ojson& j) {
  ReportSite s;
  s.id = j.at("id").get<std::string>();
  s.path = j.at("path").get<std::string>();
  std::string cat = j.at("category").get<std::string>();
  if (cat != "restrictive" && cat != "flexible") throw ReportError("unknown category " + cat);
  s.category = cat == "flexible" ? ApiCategory::kFlexible : ApiCategory::kRestrictive;
  s.d = j.at("d").get<std::size_t>();
  s.labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& f : j.at("findings")) s.findings.push_back(finding_from(f));
  return s;
}

std::string score_text(int key, StrataMode mode) {
  if (mode == StrataMode::kExact) return format_score(score(key));
  return format_score(key < 0 ? -1.0 : key / 10.0);  // lower edge of the bucket
}

}  // namespace

std::vector<ReportSite> parse_report(std::string_view jsonl) {
  std::vector<ReportSite> sites;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  bool footer = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = "report line " + std::to_string(lineno) + ": ";
    if (footer) throw ReportError(where + "content after the summary line");
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ReportError(where + "not JSON");
    }
    if (!j.is_object()) throw ReportError(where + "not an object");
    if (j.value("summary", false)) {
      footer = true;
      continue;
    }
    try {
      sites.push_back(site_from(j));
    } catch (const nlohmann::json::exception& e) {
      throw ReportError(where + e.what());
    } catch (const ReportError& e) {
      throw ReportError(where + e.what());
    }
  }
  if (!footer) throw ReportError("report has no summary line");
  return sites;
}

std::vector<CategoryPlan> plan_sample(const std::vector<ReportSite>& sites, StrataMode mode,
                                      double confidence, double margin, std::uint64_t seed,
                                      bool draw) {
  std::vector<CategoryPlan> out;
  for (ApiCategory cat : {ApiCategory::kRestrictive, ApiCategory::kFlexible}) {
    std::vector<ScoredSite> scored_sites;
    for (const auto& s : sites) {
      if (s.category == cat) scored_sites.push_back(scored(s.id, s.d));
    }
    if (scored_sites.empty()) continue;
    auto strata = stratify(scored_sites, mode);
    assign_sample_sizes(strata, confidence, margin);
    CategoryPlan cp;
    cp.category = cat;
    if (draw) {
      cp.plan = draw_sample(std::move(strata), seed, confidence, margin);
    } else {
      cp.plan.confidence = confidence;
      cp.plan.margin = margin;
      cp.plan.seed = seed;
      cp.plan.strata = std::move(strata);
    }
    out.push_back(std::move(cp));
  }
  return out;
}

std::string strata_csv(const std::vector<CategoryPlan>& plans, StrataMode mode) {
  std::ostringstream os;
  os << "category,stratum_key,score,population,sample_size\n";
  for (const auto& cp : plans) {
    for (const auto& st : cp.plan.strata) {
      os << to_string(cp.category) << ',' << st.key << ',' << score_text(st.key, mode) << ','
         << st.population << ',' << st.sample_size << '\n';
    }
  }
  return os.str();
}

std::string plan_json(const std::vector<CategoryPlan>& plans, StrataMode mode) {
  double confidence = plans.empty() ? 0.95 : plans.front().plan.confidence;
  double margin = plans.empty() ? 0.05 : plans.front().plan.margin;
  std::uint64_t seed = plans.empty() ? 0 : plans.front().plan.seed;
  std::string cats = "[";
  ojson all = ojson::array();
  for (const auto& cp : plans) {
    std::string strata = "[";
    for (const auto& st : cp.plan.strata) {
      detail::JsonObj o;
      o.add("key", st.key)
          .raw("score", score_text(st.key, mode))
          .add("population", st.population)
          .add("sample_size", st.sample_size)
          .add("selected", st.selected_ids);
      strata += (strata.size() > 1 ? "," : "") + o.str();
    }
    strata += "]";
    for (const auto& id : cp.plan.selected_ids) all.push_back(id);
    detail::JsonObj c;
    c.add("category", std::string(to_string(cp.category))).raw("strata", strata);
    cats += (cats.size() > 1 ? "," : "") + c.str();
  }
  cats += "]";
  detail::JsonObj o;
  o.raw("confidence", format_score(confidence))
      .raw("margin", format_score(margin))
      .add("seed", seed)
      .add("mode", std::string(mode == StrataMode::kExact ? "exact" : "ranged"))
      .raw("categories", cats)
      .raw("selected", all.dump());
  return o.str() + "\n";
}

std::vector<PrevalenceRow> prevalence_of(const std::vector<ReportSite>& sites) {
  std::vector<LabelSet> sets;
  sets.reserve(sites.size());
  for (const auto& s : sites) {
    LabelSet l;
    l.category = s.category;
    l.labels.insert(s.labels.begin(), s.labels.end());
    sets.push_back(std::move(l));
  }
  return prevalence_report(sets);
}

std::string findings_csv(const std::vector<ReportSite>& sites) {
  ToolReport r;
  r.tool = "cryptolens";
  for (const auto& s : sites) {
    for (const auto& f : s.findings) {
      std::string msg = f.message;
      if (f.effective_value) msg += " [" + *f.effective_value + "]";
      r.rows.push_back({s.path, f.start_line, f.end_line, f.rule_id, msg});
    }
  }
  return tool_report_csv(r);
}

}  // namespace cryptolens
