#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "cryptolens/bench.h"
#include "test_support.h"

namespace cryptolens {
namespace {

using testing::slurp;
using testing::TempDir;

const std::vector<std::string> kTableRows = {
    "STRING/OID", "ID",    "METHOD", "METHOD*", "NATIVE", "STROP",  "STRBUF",   "STRBL*",
    "CONCT",      "BAS64", "ID+METHOD", "TEROP", "STATIC", "ENUM",  "EMPTY",    "LOG",
    "CLIENT",     "VAL",   "HASH",   "GETSUB",  "LEN/AUTH", "GETPUB", "STROP"};

TEST(BenchCases, TwentyThreeRowsInTableOrder) {
  EXPECT_EQ(bench_case_ids(), kTableRows);
  auto cases = build_cases(7);
  ASSERT_EQ(cases.size(), 23u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_EQ(cases[i].case_id, kTableRows[i]);
    EXPECT_EQ(cases[i].category, i < 14 ? ApiCategory::kRestrictive : ApiCategory::kFlexible);
    EXPECT_EQ(cases[i].dir, bench_dir_name(i, kTableRows[i]));
    EXPECT_FALSE(cases[i].variants.empty());
  }
  EXPECT_EQ(bench_dir_name(0, "STRING/OID"), "01_STRING_OID");
  EXPECT_EQ(bench_dir_name(3, "METHOD*"), "04_METHOD_MULTI");
  // The ID row has several vulnerable variants.
  EXPECT_GT(cases[1].variants.size(), 1u);
}

TEST(BenchCases, VariantsParseAndCarryACatalogRule) {
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    for (const auto& c : build_cases(seed)) {
      for (const auto& v : c.variants) {
        EXPECT_EQ(v.file.rfind(c.dir + "/", 0), 0u) << v.file;
        auto unit = parse_unit(v.file, v.source);
        EXPECT_FALSE(unit->parse_failed()) << v.file;
        ASSERT_FALSE(v.expected.empty()) << v.file;
        for (const auto& e : v.expected) {
          const Rule* r = RuleCatalog::builtin().find(e.rule_id);
          ASSERT_NE(r, nullptr) << e.rule_id;
          EXPECT_EQ(r->severity, e.severity) << v.file << " " << e.rule_id;
          EXPECT_EQ(r->category, c.category);
          EXPECT_GE(e.start_line, 1u);
          EXPECT_LE(e.start_line, e.end_line);
        }
      }
    }
  }
}

TEST(BenchCases, SameSeedSameCorpus) {
  auto a = build_cases(11), b = build_cases(11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].variants.size(), b[i].variants.size());
    for (std::size_t j = 0; j < a[i].variants.size(); ++j) {
      EXPECT_EQ(a[i].variants[j].source, b[i].variants[j].source);
      EXPECT_EQ(a[i].variants[j].file, b[i].variants[j].file);
    }
  }
  EXPECT_EQ(manifest_json(a, 11), manifest_json(b, 11));
}

TEST(BenchCorpusFiles, ByteIdenticalAcrossRuns) {
  TempDir d1, d2;
  generate_corpus(d1.path(), 5);
  generate_corpus(d2.path(), 5);
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(d1.path())) {
    if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), d1.path()).generic_string());
  }
  std::sort(files.begin(), files.end());
  ASSERT_FALSE(files.empty());
  EXPECT_TRUE(std::count(files.begin(), files.end(), "manifest.json"));
  for (const auto& f : files) EXPECT_EQ(slurp(d1.path() / f), slurp(d2.path() / f)) << f;
}

TEST(BenchManifest, RoundTrip) {
  auto cases = build_cases(3);
  auto back = parse_manifest(manifest_json(cases, 3));
  ASSERT_EQ(back.size(), cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_EQ(back[i].case_id, cases[i].case_id);
    EXPECT_EQ(back[i].dir, cases[i].dir);
    EXPECT_EQ(back[i].category, cases[i].category);
    ASSERT_EQ(back[i].variants.size(), cases[i].variants.size());
    for (std::size_t j = 0; j < cases[i].variants.size(); ++j) {
      const auto& x = back[i].variants[j];
      const auto& y = cases[i].variants[j];
      EXPECT_EQ(x.file, y.file);
      EXPECT_TRUE(x.source.empty());
      EXPECT_EQ(x.labels, y.labels);
      ASSERT_EQ(x.expected.size(), y.expected.size());
      for (std::size_t k = 0; k < x.expected.size(); ++k) {
        EXPECT_EQ(x.expected[k].rule_id, y.expected[k].rule_id);
        EXPECT_EQ(x.expected[k].severity, y.expected[k].severity);
        EXPECT_EQ(x.expected[k].start_line, y.expected[k].start_line);
        EXPECT_EQ(x.expected[k].end_line, y.expected[k].end_line);
        EXPECT_EQ(x.expected[k].keywords, y.expected[k].keywords);
        EXPECT_EQ(x.expected[k].effective_value, y.expected[k].effective_value);
        EXPECT_EQ(x.expected[k].evasive, y.expected[k].evasive);
      }
    }
  }
  EXPECT_THROW(parse_manifest("{\"cases\": 3}"), std::exception);
  EXPECT_THROW(parse_manifest("not json"), std::exception);
}

TEST(BenchCorpusFiles, LoadMatchesGenerate) {
  TempDir d;
  auto cases = generate_corpus(d.path(), 7);
  auto loaded = load_corpus(d.path());
  ASSERT_EQ(loaded.size(), cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (std::size_t j = 0; j < cases[i].variants.size(); ++j) {
      EXPECT_EQ(slurp(d.path() / cases[i].variants[j].file), cases[i].variants[j].source);
    }
  }
  EXPECT_THROW(load_corpus(d.path() / "missing"), std::exception);
}

// Corpus and self-report shared by the grading tests.
class Generated : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir;
    cases_ = new std::vector<BenchmarkCase>(generate_corpus(dir_->path(), 7));
    self_ = new ToolReport(self_report(dir_->path()));
  }
  static void TearDownTestSuite() {
    delete self_;
    delete cases_;
    delete dir_;
  }
  static const BenchmarkCase& row(const std::string& id) {
    for (const auto& c : *cases_) {
      if (c.case_id == id) return c;
    }
    throw std::runtime_error("no case " + id);
  }
  static std::size_t index_of(const std::string& id) {
    for (std::size_t i = 0; i < cases_->size(); ++i) {
      if ((*cases_)[i].case_id == id) return i;
    }
    throw std::runtime_error("no case " + id);
  }
  static TempDir* dir_;
  static std::vector<BenchmarkCase>* cases_;
  static ToolReport* self_;
};
TempDir* Generated::dir_ = nullptr;
std::vector<BenchmarkCase>* Generated::cases_ = nullptr;
ToolReport* Generated::self_ = nullptr;

TEST_F(Generated, SelfDetectionIsComplete) {
  auto verdicts = grade(*cases_, *self_);
  ASSERT_EQ(verdicts.size(), 23u);
  for (const auto& v : verdicts) {
    EXPECT_EQ(v.verdict, Verdict::kDetected) << v.case_id;
    EXPECT_EQ(v.matched, v.expected);
  }
  EXPECT_TRUE(self_->error_files.empty());
}

TEST_F(Generated, EachCaseGetsItsOwnLabels) {
  auto a = testing::analyze_dir(dir_->path(), ApiSet::canonical());
  for (const auto& c : *cases_) {
    for (const auto& v : c.variants) {
      auto sites = a.in(v.file);
      ASSERT_FALSE(sites.empty()) << v.file;
      std::set<std::string> got;
      for (const auto* s : sites) got.insert(s->labels.labels.begin(), s->labels.labels.end());
      for (const auto& l : v.labels) EXPECT_TRUE(got.count(l)) << v.file << " missing " << l;
    }
  }
}

// String literal texts of a Java source, decoded for the simple escapes.
std::set<std::string> literal_texts(const std::string& src) {
  static const std::regex re(R"re("((?:[^"\\\n]|\\.)*)")re");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(src.begin(), src.end(), re); it != std::sregex_iterator(); ++it) {
    out.insert(std::regex_replace((*it)[1].str(), std::regex(R"(\\(.))"), "$1"));
  }
  return out;
}

TEST_F(Generated, EvasiveFlagsFollowVisibleLiterals) {
  auto a = testing::analyze_dir(dir_->path(), ApiSet::canonical());
  std::size_t evasive = 0, plain = 0;
  for (const auto& c : *cases_) {
    for (const auto& v : c.variants) {
      auto literals = literal_texts(v.source);
      for (const auto& e : v.expected) {
        if (!e.effective_value) continue;
        ASSERT_TRUE(e.evasive) << v.file;
        // Independent check: is the value spelled out as a literal? For the
        // OID rule the dotted literal itself is what a reader sees.
        bool visible = literals.count(*e.effective_value) > 0;
        if (e.rule_id == "R2") {
          visible = std::any_of(literals.begin(), literals.end(), [](const std::string& l) {
            return std::regex_match(l, std::regex(R"(\d+(\.\d+)+)"));
          });
        }
        EXPECT_EQ(*e.evasive, !visible) << v.file << " " << *e.effective_value;
        bool found = false;
        for (const auto* s : a.in(v.file)) {
          for (const auto& f : s->findings) {
            if (f.rule_id != e.rule_id || f.effective_value != e.effective_value) continue;
            found = true;
            EXPECT_EQ(f.evasive, *e.evasive) << v.file << " " << e.rule_id;
          }
        }
        EXPECT_TRUE(found) << v.file << " " << e.rule_id;
        (*e.evasive ? evasive : plain) += 1;
      }
    }
  }
  EXPECT_GT(evasive, 5u);
  EXPECT_GT(plain, 5u);
}

TEST_F(Generated, EmptyReportIsUndetectedEverywhere) {
  ToolReport empty;
  empty.tool = "none";
  for (const auto& v : grade(*cases_, empty)) {
    EXPECT_EQ(v.verdict, Verdict::kUndetected) << v.case_id;
    EXPECT_EQ(v.matched, 0u);
  }
}

TEST_F(Generated, PartialConditions) {
  ToolReport r;
  r.tool = "t";
  // Subset: one of the two misuses of a Base64 variant.
  const auto& b64 = row("BAS64").variants.front();
  for (const auto& e : b64.expected) {
    if (e.rule_id == "R1") r.rows.push_back({b64.file, e.start_line, e.end_line, "R1", "des"});
  }
  // Some instances: only the first ID variant.
  const auto& id0 = row("ID").variants.front();
  for (const auto& e : id0.expected) r.rows.push_back({id0.file, e.start_line, e.end_line, e.rule_id, ""});
  // Wrong misuse: a warning on the site naming something else.
  const auto& st = row("STATIC").variants.front();
  r.rows.push_back({st.file, st.expected[0].start_line, st.expected[0].end_line, "HARDCODED_IV", "static iv"});
  auto v = grade(*cases_, r);
  EXPECT_EQ(v[index_of("BAS64")].verdict, Verdict::kPartial);
  EXPECT_EQ(v[index_of("BAS64")].reason, PartialReason::kSubsetOfMisuses);
  EXPECT_EQ(v[index_of("ID")].verdict, Verdict::kPartial);
  EXPECT_EQ(v[index_of("ID")].reason, PartialReason::kSomeInstances);
  EXPECT_EQ(v[index_of("STATIC")].verdict, Verdict::kPartial);
  EXPECT_EQ(v[index_of("STATIC")].reason, PartialReason::kWrongMisuse);
  EXPECT_EQ(v[index_of("EMPTY")].verdict, Verdict::kUndetected);
}

TEST_F(Generated, ToolErrorPoisonsItsCase) {
  const auto& log = row("LOG").variants.front();
  std::string csv = "tool,file,start_line,end_line,rule,message\n"
                    "ext," + log.file + ",0,0,TOOL_ERROR,crashed\n"
                    "ext," + row("EMPTY").variants.front().file + ",abc,,F1,bad line\n";
  auto r = parse_tool_report(csv);
  EXPECT_EQ(r.tool, "ext");
  EXPECT_EQ(r.error_files.size(), 2u);
  auto v = grade(*cases_, r);
  EXPECT_EQ(v[index_of("LOG")].verdict, Verdict::kToolError);
  EXPECT_EQ(v[index_of("EMPTY")].verdict, Verdict::kToolError);
  EXPECT_EQ(v[index_of("VAL")].verdict, Verdict::kUndetected);
}

TEST_F(Generated, ExternalKeywordsAndPathPrefixes) {
  // An external tool reports with its own vocabulary and absolute paths.
  const auto& ecb = row("STATIC").variants.front();
  const auto& e = ecb.expected.front();
  ASSERT_EQ(e.rule_id, "R3");
  ReportRow rr{"/abs/corpus/" + ecb.file, e.start_line, e.end_line, "CRYPTO-001", "Cipher uses ECB mode"};
  EXPECT_TRUE(row_matches(rr, ecb.file, e));
  rr.file = "/abs/corpus/x" + ecb.file;
  EXPECT_FALSE(row_matches(rr, ecb.file, e));
  rr.file = ecb.file;
  rr.start_line = rr.end_line = e.end_line + 5;
  EXPECT_FALSE(row_matches(rr, ecb.file, e));
}

TEST_F(Generated, ReportCsvRoundTrip) {
  auto csv = tool_report_csv(*self_);
  auto back = parse_tool_report(csv);
  EXPECT_EQ(back.tool, self_->tool);
  ASSERT_EQ(back.rows.size(), self_->rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].file, self_->rows[i].file);
    EXPECT_EQ(back.rows[i].start_line, self_->rows[i].start_line);
    EXPECT_EQ(back.rows[i].message, self_->rows[i].message);
  }
  ToolReport odd;
  odd.tool = "a,b";
  odd.rows.push_back({"x/Y.java", 3, 4, "R\"1", "line1\nline2, with comma"});
  auto o = parse_tool_report(tool_report_csv(odd));
  ASSERT_EQ(o.rows.size(), 1u);
  EXPECT_EQ(o.tool, "a,b");
  EXPECT_EQ(o.rows[0].rule, "R\"1");
  EXPECT_EQ(o.rows[0].message, "line1\nline2, with comma");
}

TEST(ToolReportCsv, MalformedIsFatal) {
  EXPECT_THROW(parse_tool_report(""), ReportFormatError);
  EXPECT_THROW(parse_tool_report("tool,file,line,rule\n"), ReportFormatError);
  EXPECT_THROW(parse_tool_report("tool,file,start_line,end_line,rule,message\nt,f,1,2,R1\n"), ReportFormatError);
  EXPECT_THROW(parse_tool_report("tool,file,start_line,end_line,rule,message\nt,f,1,2,R1,\"open\n"),
               ReportFormatError);
  try {
    parse_tool_report("tool,file,start_line,end_line,rule,message\nt,f,1,2,R1,m\nt,f,1\n");
    FAIL();
  } catch (const ReportFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
  auto ok = parse_tool_report("tool,file,start_line,end_line,rule,message\r\nt,./a/B.java,5,,R1,m\r\n");
  ASSERT_EQ(ok.rows.size(), 1u);
  EXPECT_EQ(ok.rows[0].file, "a/B.java");
  EXPECT_EQ(ok.rows[0].end_line, 5u);
}

TEST(Summary, ZeroToolsIsHeaderOnly) {
  EXPECT_EQ(summary_csv({}), "row,case\n");
  auto text = summary_text({});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Summary, RowsFollowTableOrder) {
  ToolColumn all{"mine", {}};
  ToolColumn mixed{"other", {}};
  for (std::size_t i = 0; i < kTableRows.size(); ++i) {
    all.verdicts.push_back({kTableRows[i], Verdict::kDetected});
    mixed.verdicts.push_back({kTableRows[i], static_cast<Verdict>(i % 4)});
  }
  auto csv = summary_csv({all, mixed});
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t p; (p = csv.find('\n', start)) != std::string::npos; start = p + 1) {
    lines.push_back(csv.substr(start, p - start));
  }
  ASSERT_EQ(lines.size(), 24u);
  EXPECT_EQ(lines[0], "row,case,mine,other");
  for (std::size_t i = 0; i < kTableRows.size(); ++i) {
    EXPECT_EQ(lines[i + 1], std::to_string(i + 1) + "," + kTableRows[i] + ",DETECTED," +
                                std::string(to_string(static_cast<Verdict>(i % 4))));
  }
  auto text = summary_text({all});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 25);
  std::size_t ticks = 0;
  for (std::size_t p = text.find(glyph(Verdict::kDetected)); p != std::string::npos;
       p = text.find(glyph(Verdict::kDetected), p + 1)) {
    ++ticks;
  }
  EXPECT_EQ(ticks, 23u + 1u);  // one per row plus the legend
}

}  // namespace
}  // namespace cryptolens
