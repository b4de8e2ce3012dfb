#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/syntax.h"

namespace cryptolens {

enum class ApiKind {
  kCipherGetInstance,
  kSecretKeySpec,
  kCheckServerTrusted,
  kHostnameVerifier,
  // Signatures added through the config file.
  kCustomRestrictive,
  kCustomFlexible,
};

enum class ApiCategory { kRestrictive, kFlexible };

ApiCategory category_of(ApiKind kind);
std::string_view to_string(ApiKind kind);
std::string_view to_string(ApiCategory category);
std::optional<ApiKind> parse_api_kind(std::string_view name);

// One extra signature from the config file. `Class.method` describes a call
// whose receiver text contains `receiver`; `method(arity)` describes a
// method declaration with that many parameters.
struct ApiSignature {
  ApiKind kind = ApiKind::kCustomRestrictive;
  std::string receiver;
  std::string method;
  int arity = -1;

  static ApiSignature parse(std::string_view text);
  std::string to_string() const;
  friend bool operator<(const ApiSignature& a, const ApiSignature& b) {
    return a.to_string() < b.to_string();
  }
};

struct ApiSet {
  std::set<ApiKind> kinds;
  std::vector<ApiSignature> extra;

  // Cipher.getInstance and checkServerTrusted.
  static ApiSet canonical();
  static ApiSet all_builtin();
  bool has(ApiKind kind) const { return kinds.count(kind) > 0; }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SourceUnit {
 public:
  SourceUnit(std::string path, std::string text);
  SourceUnit(const SourceUnit&) = delete;
  SourceUnit& operator=(const SourceUnit&) = delete;

  const std::string& path() const { return path_; }
  const std::string& text() const { return text_; }
  const SyntaxNode& root() const { return root_; }
  bool parse_failed() const { return parse_failed_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  friend std::shared_ptr<const SourceUnit> parse_unit(std::string path,
                                                      std::string text);
  std::string path_;
  std::string text_;
  SyntaxNode root_;
  bool parse_failed_ = false;
  std::vector<std::string> diagnostics_;
};

using UnitPtr = std::shared_ptr<const SourceUnit>;

// Parse Java source into a normalized named-node tree. Error recovery is
// tolerated; a unit whose content is entirely unrecoverable is flagged
// parse_failed() with a diagnostic.
UnitPtr parse_unit(std::string path, std::string text);
UnitPtr parse_file(const std::filesystem::path& file,
                   const std::string& display_path);

struct InvocationSite {
  std::string id;  // "<path>:<byte offset>"
  ApiKind api = ApiKind::kCipherGetInstance;
  UnitPtr unit;
  const SyntaxNode* node = nullptr;     // call expression or declaration
  const SyntaxNode* subtree = nullptr;  // argument_list or block
  bool no_body = false;                 // abstract/native declaration
  std::string enclosing_class;
  std::optional<std::string> enclosing_method;
  std::vector<const SyntaxNode*> context;  // declarations in the class body
  std::string signature;  // matched custom signature, if any

  ApiCategory category() const { return category_of(api); }
  const std::string& path() const { return unit->path(); }
  std::uint32_t offset() const { return node->span.start; }
};

std::vector<InvocationSite> extract_sites(const UnitPtr& unit,
                                          const ApiSet& apis);

struct ScanWarning {
  std::string path;
  std::string message;
};

struct ScanResult {
  std::vector<UnitPtr> units;
  std::vector<InvocationSite> sites;
  std::vector<ScanWarning> warnings;
};

// Recursively scan `*.java` under root_dir. Paths in the result are relative
// to root_dir with forward slashes. Per-file failures become warnings.
ScanResult scan_corpus(const std::filesystem::path& root_dir,
                       const ApiSet& apis, unsigned jobs = 1);

}  // namespace cryptolens
