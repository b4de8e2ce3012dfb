#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cryptolens/ingest.h"
#include "cryptolens/pipeline.h"

namespace cryptolens::testing {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(CRYPTOLENS_FIXTURES) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cryptolens_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Scan result that owns the trees the analyses point into.
struct Analyzed {
  ScanResult scan;
  std::vector<SiteAnalysis> analyses;

  // Sites of one file, in offset order.
  std::vector<const SiteAnalysis*> in(const std::string& file) const {
    std::vector<const SiteAnalysis*> out;
    for (const auto& a : analyses) {
      if (a.site->path() == file) out.push_back(&a);
    }
    return out;
  }
  const SiteAnalysis& first(const std::string& file) const {
    auto v = in(file);
    if (v.empty()) throw std::runtime_error("no site in " + file);
    return *v.front();
  }
};

inline Analyzed analyze_dir(const std::filesystem::path& dir, const ApiSet& apis = ApiSet::all_builtin()) {
  Analyzed a;
  a.scan = scan_corpus(dir, apis);
  a.analyses = analyze_sites(a.scan.sites, AnalysisOptions{});
  return a;
}

// One Java file in a fresh directory.
inline Analyzed analyze_source(const std::string& java, const ApiSet& apis = ApiSet::all_builtin()) {
  TempDir dir;
  spit(dir.path() / "Snippet.java", java);
  return analyze_dir(dir.path(), apis);
}

}  // namespace cryptolens::testing
