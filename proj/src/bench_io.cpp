#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cryptolens/bench.h"

namespace cryptolens {

namespace {

using ojson = nlohmann::ordered_json;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ojson expected_json(const ExpectedFinding& e) {
  ojson j;
  j["rule_id"] = e.rule_id;
  j["severity"] = std::string(to_string(e.severity));
  j["start_line"] = e.start_line;
  j["end_line"] = e.end_line;
  j["keywords"] = e.keywords;
  if (e.effective_value) j["effective_value"] = *e.effective_value;
  if (e.evasive) j["evasive"] = *e.evasive;
  return j;
}

ExpectedFinding expected_from(const ojson& j) {
  ExpectedFinding e;
  e.rule_id = j.at("rule_id").get<std::string>();
  auto sev = parse_severity(j.at("severity").get<std::string>());
  if (!sev) throw std::invalid_argument("bad severity in manifest");
  e.severity = *sev;
  e.start_line = j.value("start_line", 0u);
  e.end_line = j.value("end_line", e.start_line);
  e.keywords = j.value("keywords", std::vector<std::string>{});
  if (j.contains("effective_value")) e.effective_value = j["effective_value"].get<std::string>();
  if (j.contains("evasive")) e.evasive = j["evasive"].get<bool>();
  return e;
}

}  // namespace

std::string manifest_json(const std::vector<BenchmarkCase>& cases, std::uint64_t seed) {
  ojson root;
  root["version"] = 1;
  root["seed"] = seed;
  root["cases"] = ojson::array();
  for (const auto& c : cases) {
    ojson jc;
    jc["case_id"] = c.case_id;
    jc["category"] = std::string(to_string(c.category));
    jc["dir"] = c.dir;
    jc["variants"] = ojson::array();
    for (const auto& v : c.variants) {
      ojson jv;
      jv["file"] = v.file;
      jv["note"] = v.note;
      jv["labels"] = v.labels;
      jv["expected"] = ojson::array();
      for (const auto& e : v.expected) jv["expected"].push_back(expected_json(e));
      ojson comp = ojson::array();
      for (const auto& [path, text] : v.companions) comp.push_back(path);
      jv["companions"] = comp;
      jc["variants"].push_back(jv);
    }
    root["cases"].push_back(jc);
  }
  return root.dump(2) + "\n";
}

std::vector<BenchmarkCase> parse_manifest(std::string_view json_text) {
  ojson root;
  try {
    root = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest is not JSON: ") + e.what());
  }
  std::vector<BenchmarkCase> out;
  try {
    for (const auto& jc : root.at("cases")) {
      BenchmarkCase c;
      c.case_id = jc.at("case_id").get<std::string>();
      std::string cat = jc.value("category", std::string("restrictive"));
      c.category = cat == "flexible" ? ApiCategory::kFlexible : ApiCategory::kRestrictive;
      c.dir = jc.value("dir", std::string());
      for (const auto& jv : jc.at("variants")) {
        BenchVariant v;
        v.file = jv.at("file").get<std::string>();
        v.note = jv.value("note", std::string());
        v.labels = jv.value("labels", std::vector<std::string>{});
        for (const auto& je : jv.at("expected")) v.expected.push_back(expected_from(je));
        for (const auto& p : jv.value("companions", std::vector<std::string>{})) v.companions.push_back({p, ""});
        c.variants.push_back(std::move(v));
      }
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
  return out;
}

std::vector<BenchmarkCase> generate_corpus(const std::filesystem::path& outdir, std::uint64_t seed) {
  auto cases = build_cases(seed);
  for (const auto& c : cases) {
    for (const auto& v : c.variants) {
      write_file(outdir / v.file, v.source);
      for (const auto& [path, text] : v.companions) write_file(outdir / path, text);
    }
  }
  write_file(outdir / "manifest.json", manifest_json(cases, seed));
  return cases;
}

std::vector<BenchmarkCase> load_corpus(const std::filesystem::path& dir) {
  auto cases = parse_manifest(read_file(dir / "manifest.json"));
  for (auto& c : cases) {
    for (auto& v : c.variants) v.source = read_file(dir / v.file);
  }
  return cases;
}

}  // namespace cryptolens
