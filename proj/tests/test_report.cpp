#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cryptolens/bench.h"
#include "cryptolens/report.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using testing::fixture;
using testing::spit;
using testing::TempDir;

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Config, Defaults) {
  ScanConfig c;
  EXPECT_EQ(c.apis.kinds, ApiSet::canonical().kinds);
  EXPECT_EQ(c.budget.max_indirection, 2);
  EXPECT_EQ(c.budget.max_candidates, 16);
  EXPECT_EQ(c.budget.max_steps, 10000);
  EXPECT_DOUBLE_EQ(c.confidence, 0.95);
  EXPECT_DOUBLE_EQ(c.margin, 0.05);
  EXPECT_FALSE(c.fail_on);
  EXPECT_EQ(fail_on_name(c.fail_on), "NONE");
}

TEST(Config, EveryKey) {
  ScanConfig c;
  apply_config_text(
      "# comment line\n"
      "api = SecretKeySpec\n"
      "api = com.example.Vault.open   # trailing comment\n"
      "oid.1.2.3.4 = DES\n"
      "max_indirection = 3\nmax_candidates = 8\nmax_steps = 500\n"
      "confidence = 0.99\nmargin = 0.03\nseed = 42\n"
      "fail_on = Warning\nmode = ranged\njobs = 4\n"
      "output = out.jsonl\ncsv_output = strata.csv\n\n",
      c);
  EXPECT_TRUE(c.apis.kinds.count(ApiKind::kSecretKeySpec));
  EXPECT_TRUE(c.apis.kinds.count(ApiKind::kCipherGetInstance));
  EXPECT_TRUE(c.apis.kinds.count(ApiKind::kCustomRestrictive));
  ASSERT_EQ(c.apis.extra.size(), 1u);
  EXPECT_EQ(c.apis.extra[0].to_string(), "Vault.open");
  EXPECT_EQ(c.extra_oids.at("1.2.3.4"), "DES");
  EXPECT_EQ(c.budget.max_indirection, 3);
  EXPECT_EQ(c.budget.max_candidates, 8);
  EXPECT_EQ(c.budget.max_steps, 500);
  EXPECT_DOUBLE_EQ(c.confidence, 0.99);
  EXPECT_DOUBLE_EQ(c.margin, 0.03);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.fail_on, Severity::kWarning);
  EXPECT_EQ(c.mode, StrataMode::kRanged);
  EXPECT_EQ(c.jobs, 4u);
  EXPECT_EQ(c.output, "out.jsonl");
  EXPECT_EQ(c.csv_output, "strata.csv");
}

TEST(Config, ErrorsNameTheLine) {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"colour = blue\n", "line 1"},
      {"\n\nmax_steps = lots\n", "line 3"},
      {"seed\n", "line 1"},
      {"confidence =\n", "line 1"},
      {"mode = fuzzy\n", "line 1"},
      {"# ok\napi = noDot\n", "line 2"},
  };
  for (const auto& [text, where] : bad) {
    ScanConfig c;
    try {
      apply_config_text(text, c);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  }
  ScanConfig c;
  EXPECT_THROW(apply_config_text("max_candidates = 0\n", c), std::exception);
  EXPECT_THROW(apply_config_text("fail_on = fatal\n", c), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cryptolens.conf"), std::exception);
}

TEST(Config, LoadFileOverBase) {
  TempDir d;
  spit(d.path() / "c.conf", "seed = 9\n");
  ScanConfig base;
  base.margin = 0.1;
  auto c = load_config(d.path() / "c.conf", base);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_DOUBLE_EQ(c.margin, 0.1);
}

TEST(FailOn, Names) {
  EXPECT_EQ(parse_fail_on("ERROR"), std::optional<Severity>(Severity::kError));
  EXPECT_EQ(parse_fail_on("info"), std::optional<Severity>(Severity::kInfo));
  EXPECT_THROW(parse_fail_on("loud"), ConfigError);
  EXPECT_FALSE(parse_fail_on("none"));
  EXPECT_EQ(fail_on_name(Severity::kWarning), "WARNING");
}

TEST(SignatureText, Parse) {
  ArgumentSignature want = {{"identifier", 3}, {"ternary_expression", 1}};
  EXPECT_EQ(parse_signature("{identifier:3, ternary_expression:1}"), want);
  EXPECT_EQ(parse_signature("identifier:3,ternary_expression:1"), want);
  EXPECT_EQ(parse_signature(to_string(want)), want);
  EXPECT_TRUE(parse_signature("{}").empty());
  EXPECT_THROW(parse_signature("{identifier}"), std::exception);
  EXPECT_THROW(parse_signature("{identifier:x}"), std::exception);
}

// Severity order restated: INFO < WARNING < ERROR.
int rank(Severity s) { return s == Severity::kInfo ? 0 : s == Severity::kWarning ? 1 : 2; }

TEST(ExitCode, AnyFindingAtOrAboveThreshold) {
  std::mt19937_64 rng(8);
  const std::vector<std::optional<Severity>> thresholds = {std::nullopt, Severity::kInfo, Severity::kWarning,
                                                           Severity::kError};
  for (int round = 0; round < 500; ++round) {
    std::vector<MisuseFinding> fs(rng() % 5);
    for (auto& f : fs) f.severity = static_cast<Severity>(rng() % 3);
    for (const auto& t : thresholds) {
      bool hit = t && std::any_of(fs.begin(), fs.end(), [&](const MisuseFinding& f) {
                   return rank(f.severity) >= rank(*t);
                 });
      EXPECT_EQ(exit_code(fs, t), hit ? 1 : 0);
    }
  }
}

class FixtureReport : public ::testing::Test {
 protected:
  static std::string scan_text(unsigned jobs) {
    ScanConfig c;
    c.apis = ApiSet::all_builtin();
    c.jobs = jobs;
    auto r = run_scan(fixture(""), c);
    return report_jsonl(r, c);
  }
};

TEST_F(FixtureReport, DeterministicAcrossRunsAndJobs) {
  auto a = scan_text(1);
  EXPECT_EQ(a, scan_text(1));
  EXPECT_EQ(a, scan_text(4));
}

TEST_F(FixtureReport, LinesAreOrderedJsonWithSummaryLast) {
  auto lines = lines_of(scan_text(1));
  ASSERT_GE(lines.size(), 2u);
  std::vector<std::pair<std::string, long>> keys;
  std::map<std::string, int> by_severity;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    auto j = nlohmann::json::parse(lines[i]);
    EXPECT_FALSE(j.contains("summary"));
    for (const char* k : {"id", "api", "d", "score", "labels", "signature", "resolved", "findings"}) {
      EXPECT_TRUE(j.contains(k)) << k;
    }
    keys.emplace_back(j["path"].get<std::string>(), j["offset"].get<long>());
    for (const auto& f : j["findings"]) ++by_severity[f["severity"].get<std::string>()];
  }
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  auto s = nlohmann::json::parse(lines.back());
  EXPECT_EQ(s["summary"], true);
  EXPECT_EQ(s["sites"].get<std::size_t>(), lines.size() - 1);
  for (const char* sev : {"ERROR", "WARNING", "INFO"}) EXPECT_EQ(s["findings"][sev].get<int>(), by_severity[sev]);
  std::size_t strata_total = 0;
  for (const auto& st : s["strata"]) strata_total += st["population"].get<std::size_t>();
  EXPECT_EQ(strata_total, lines.size() - 1);
}

TEST_F(FixtureReport, ScoresAreFixedSixDecimals) {
  auto text = scan_text(1);
  EXPECT_NE(text.find("\"d\":33,\"score\":0.908438"), std::string::npos);
  EXPECT_NE(text.find("\"score\":-1.000000"), std::string::npos);
}

TEST_F(FixtureReport, ParseRoundTrip) {
  ScanConfig c;
  c.apis = ApiSet::all_builtin();
  auto r = run_scan(fixture(""), c);
  auto sites = parse_report(report_jsonl(r, c));
  ASSERT_EQ(sites.size(), r.analyses.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& a = r.analyses[i];
    EXPECT_EQ(sites[i].id, a.site->id);
    EXPECT_EQ(sites[i].path, a.site->path());
    EXPECT_EQ(sites[i].category, a.site->category());
    EXPECT_EQ(sites[i].d, a.d);
    EXPECT_EQ(std::set<std::string>(sites[i].labels.begin(), sites[i].labels.end()), a.labels.labels);
    ASSERT_EQ(sites[i].findings.size(), a.findings.size());
    for (std::size_t k = 0; k < a.findings.size(); ++k) {
      EXPECT_EQ(sites[i].findings[k].rule_id, a.findings[k].rule_id);
      EXPECT_EQ(sites[i].findings[k].severity, a.findings[k].severity);
      EXPECT_EQ(sites[i].findings[k].effective_value, a.findings[k].effective_value);
      EXPECT_EQ(sites[i].findings[k].evasive, a.findings[k].evasive);
      EXPECT_EQ(sites[i].findings[k].start_line, a.findings[k].start_line);
    }
  }
  // Prevalence from the report equals prevalence from the live labels.
  std::vector<LabelSet> sets;
  for (const auto& a : r.analyses) sets.push_back(a.labels);
  auto live = prevalence_report(sets);
  auto read = prevalence_of(sites);
  ASSERT_EQ(live.size(), read.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    EXPECT_EQ(live[i].label, read[i].label);
    EXPECT_EQ(live[i].count, read[i].count);
  }
}

TEST(ReportParse, Errors) {
  const std::string summary = "{\"summary\":true}";
  EXPECT_THROW(parse_report(""), ReportError);
  EXPECT_THROW(parse_report("{\"id\":\"a\"}\n"), ReportError);
  try {
    parse_report("{\"summary\":true}\n{oops\n");
    FAIL();
  } catch (const ReportError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_report(summary + "\n" + summary + "\n"), ReportError);
  EXPECT_TRUE(parse_report(summary + "\n").empty());
}

TEST(ExitCodeReport, FollowsFindings) {
  ScanConfig c;
  auto r = run_scan(fixture("flexible"), c);
  EXPECT_EQ(exit_code(r, std::nullopt), 0);
  EXPECT_EQ(exit_code(r, Severity::kError), 1);
  TempDir clean;
  spit(clean.path() / "G.java", "class G { Object f() throws Exception { return Cipher.getInstance(\"AES/GCM/NoPadding\"); } }");
  auto ok = run_scan(clean.path(), c);
  EXPECT_EQ(exit_code(ok, Severity::kInfo), 0);
}

ReportSite make_site(const std::string& id, ApiCategory cat, std::size_t d) {
  ReportSite s;
  s.id = id;
  s.path = id;
  s.category = cat;
  s.d = d;
  return s;
}

TEST(PlanSample, SmallStratumIsACensus) {
  std::vector<ReportSite> sites;
  for (int i = 0; i < 16; ++i) sites.push_back(make_site("s" + std::to_string(i), ApiCategory::kRestrictive, 1));
  auto plans = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 1, true);
  ASSERT_EQ(plans.size(), 1u);
  ASSERT_EQ(plans[0].plan.strata.size(), 1u);
  EXPECT_EQ(plans[0].plan.strata[0].selected_ids.size(), 16u);
  EXPECT_EQ(plans[0].plan.selected_ids.size(), 16u);
}

TEST(PlanSample, SeedChangesMembersNotSizes) {
  std::vector<ReportSite> sites;
  for (int i = 0; i < 1500; ++i) sites.push_back(make_site("r" + std::to_string(i), ApiCategory::kRestrictive, 1 + i % 3));
  for (int i = 0; i < 40; ++i) sites.push_back(make_site("f" + std::to_string(i), ApiCategory::kFlexible, i % 2 ? 0 : 12));
  auto a = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 1, true);
  auto b = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 2, true);
  auto a2 = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 1, true);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].category, ApiCategory::kRestrictive);
  EXPECT_EQ(a[1].category, ApiCategory::kFlexible);
  for (std::size_t c = 0; c < 2; ++c) {
    ASSERT_EQ(a[c].plan.strata.size(), b[c].plan.strata.size());
    for (std::size_t i = 0; i < a[c].plan.strata.size(); ++i) {
      const auto& st = a[c].plan.strata[i];
      EXPECT_EQ(st.sample_size, sample_size(st.population, 0.95, 0.05));
      EXPECT_EQ(st.sample_size, b[c].plan.strata[i].sample_size);
      EXPECT_EQ(st.selected_ids.size(), st.sample_size);
      EXPECT_EQ(st.selected_ids, a2[c].plan.strata[i].selected_ids);
    }
  }
  EXPECT_NE(a[0].plan.selected_ids, b[0].plan.selected_ids);
  auto sizes_only = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 1, false);
  for (const auto& st : sizes_only[0].plan.strata) EXPECT_TRUE(st.selected_ids.empty());
}

TEST(PlanSample, EmptyCategoryIsDropped) {
  std::vector<ReportSite> sites = {make_site("x", ApiCategory::kFlexible, 0)};
  auto plans = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 0, true);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_EQ(plans[0].category, ApiCategory::kFlexible);
  EXPECT_TRUE(plan_sample({}, StrataMode::kExact, 0.95, 0.05, 0, true).empty());
}

TEST(PlanSample, StrataCsv) {
  std::vector<ReportSite> sites;
  for (std::size_t d : {0u, 1u, 1u, 2u, 33u}) {
    sites.push_back(make_site("s" + std::to_string(sites.size()), ApiCategory::kRestrictive, d));
  }
  auto exact = plan_sample(sites, StrataMode::kExact, 0.95, 0.05, 0, false);
  auto rows = lines_of(strata_csv(exact, StrataMode::kExact));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "category,stratum_key,score,population,sample_size");
  EXPECT_EQ(rows[1], "restrictive,0,-1.000000,1,1");
  EXPECT_EQ(rows[2], "restrictive,1,0.000000,2,2");
  EXPECT_EQ(rows[3], "restrictive,2,0.292255,1,1");  // tanh(log10 2)
  EXPECT_EQ(rows[4], "restrictive,33,0.908438,1,1");
  auto ranged = plan_sample(sites, StrataMode::kRanged, 0.95, 0.05, 0, false);
  auto rr = lines_of(strata_csv(ranged, StrataMode::kRanged));
  ASSERT_EQ(rr.size(), 5u);
  EXPECT_EQ(rr[4], "restrictive,9,0.900000,1,1");
  auto j = nlohmann::json::parse(plan_json(exact, StrataMode::kExact));
  EXPECT_FALSE(j.empty());
}

TEST(FindingsCsv, GradesTheBenchmark) {
  TempDir d;
  auto cases = generate_corpus(d.path(), 7);
  ScanConfig c;
  auto r = run_scan(d.path(), c);
  auto sites = parse_report(report_jsonl(r, c));
  auto tool = parse_tool_report(findings_csv(sites));
  EXPECT_EQ(tool.tool, "cryptolens");
  for (const auto& v : grade(cases, tool)) EXPECT_EQ(v.verdict, Verdict::kDetected) << v.case_id;
}

}  // namespace
}  // namespace cryptolens
