#include "cryptolens/ingest.h"

#include <tree_sitter/api.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

extern "C" const TSLanguage* tree_sitter_java(void);

namespace cryptolens {

namespace fs = std::filesystem;

ApiCategory category_of(ApiKind kind) {
  switch (kind) {
    case ApiKind::kCipherGetInstance:
    case ApiKind::kSecretKeySpec:
    case ApiKind::kCustomRestrictive:
      return ApiCategory::kRestrictive;
    default:
      return ApiCategory::kFlexible;
  }
}

std::string_view to_string(ApiKind kind) {
  switch (kind) {
    case ApiKind::kCipherGetInstance: return "RESTRICTIVE_CIPHER_GETINSTANCE";
    case ApiKind::kSecretKeySpec: return "RESTRICTIVE_SECRETKEYSPEC";
    case ApiKind::kCheckServerTrusted: return "FLEXIBLE_CHECK_SERVER_TRUSTED";
    case ApiKind::kHostnameVerifier: return "FLEXIBLE_HOSTNAME_VERIFIER";
    case ApiKind::kCustomRestrictive: return "RESTRICTIVE_CUSTOM";
    case ApiKind::kCustomFlexible: return "FLEXIBLE_CUSTOM";
  }
  return "?";
}

std::string_view to_string(ApiCategory category) {
  return category == ApiCategory::kRestrictive ? "restrictive" : "flexible";
}

std::optional<ApiKind> parse_api_kind(std::string_view name) {
  std::string lower;
  for (char c : name) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  static const std::pair<std::string_view, ApiKind> kNames[] = {
      {"restrictive_cipher_getinstance", ApiKind::kCipherGetInstance},
      {"cipher", ApiKind::kCipherGetInstance},
      {"cipher.getinstance", ApiKind::kCipherGetInstance},
      {"restrictive_secretkeyspec", ApiKind::kSecretKeySpec},
      {"secretkeyspec", ApiKind::kSecretKeySpec},
      {"flexible_check_server_trusted", ApiKind::kCheckServerTrusted},
      {"checkservertrusted", ApiKind::kCheckServerTrusted},
      {"flexible_hostname_verifier", ApiKind::kHostnameVerifier},
      {"hostnameverifier", ApiKind::kHostnameVerifier},
  };
  for (const auto& [n, k] : kNames) {
    if (lower == n) {
      return k;
    }
  }
  return std::nullopt;
}

ApiSignature ApiSignature::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto is_ident = [](std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
    });
  };
  text = trim(text);
  ApiSignature sig;
  auto open = text.find('(');
  if (open != std::string_view::npos) {
    if (text.back() != ')') {
      throw std::invalid_argument("bad api signature: " + std::string(text));
    }
    auto name = trim(text.substr(0, open));
    auto arity_text = trim(text.substr(open + 1, text.size() - open - 2));
    if (!is_ident(name) || arity_text.empty() ||
        !std::all_of(arity_text.begin(), arity_text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw std::invalid_argument("bad api signature: " + std::string(text));
    }
    sig.kind = ApiKind::kCustomFlexible;
    sig.method = std::string(name);
    sig.arity = std::stoi(std::string(arity_text));
    return sig;
  }
  auto dot = text.rfind('.');
  if (dot == std::string_view::npos || !is_ident(trim(text.substr(dot + 1)))) {
    throw std::invalid_argument("bad api signature: " + std::string(text));
  }
  auto receiver = trim(text.substr(0, dot));
  // The receiver match is on the last dotted segment.
  if (auto d = receiver.rfind('.'); d != std::string_view::npos) {
    receiver = receiver.substr(d + 1);
  }
  if (!is_ident(receiver)) {
    throw std::invalid_argument("bad api signature: " + std::string(text));
  }
  sig.kind = ApiKind::kCustomRestrictive;
  sig.receiver = std::string(receiver);
  sig.method = std::string(trim(text.substr(dot + 1)));
  return sig;
}

std::string ApiSignature::to_string() const {
  if (kind == ApiKind::kCustomFlexible) {
    return method + "(" + std::to_string(arity) + ")";
  }
  return receiver + "." + method;
}

ApiSet ApiSet::canonical() {
  ApiSet s;
  s.kinds = {ApiKind::kCipherGetInstance, ApiKind::kCheckServerTrusted};
  return s;
}

ApiSet ApiSet::all_builtin() {
  ApiSet s;
  s.kinds = {ApiKind::kCipherGetInstance, ApiKind::kSecretKeySpec,
             ApiKind::kCheckServerTrusted, ApiKind::kHostnameVerifier};
  return s;
}

SourceUnit::SourceUnit(std::string path, std::string text)
    : path_(std::move(path)), text_(std::move(text)) {
  root_.kind = "program";
  root_.span = {0, static_cast<std::uint32_t>(text_.size())};
  root_.text = text_;
}

namespace {

struct ParserDeleter {
  void operator()(TSParser* p) const { ts_parser_delete(p); }
};
struct TreeDeleter {
  void operator()(TSTree* t) const { ts_tree_delete(t); }
};

bool is_comment(std::string_view kind) {
  return kind == "comment" || kind == "line_comment" || kind == "block_comment";
}

class Normalizer {
 public:
  Normalizer(std::string_view text, std::vector<std::string>& diagnostics)
      : text_(text), diagnostics_(diagnostics) {}

  // Fills `out` from the node under the cursor and recurses over children.
  void build(TSTreeCursor* cursor, SyntaxNode& out) {
    TSNode node = ts_tree_cursor_current_node(cursor);
    fill(node, out);
    if (!ts_tree_cursor_goto_first_child(cursor)) {
      return;
    }
    do {
      TSNode c = ts_tree_cursor_current_node(cursor);
      std::string_view kind = ts_node_type(c);
      if (ts_node_is_missing(c)) {
        TSPoint p = ts_node_start_point(c);
        diagnostics_.push_back("missing " + std::string(kind) + " at line " +
                               std::to_string(p.row + 1));
        continue;
      }
      if (!ts_node_is_named(c)) {
        const char* field = ts_tree_cursor_current_field_name(cursor);
        if (field != nullptr && std::string_view(field) == "operator") {
          out.op = std::string(kind);
        } else if ((kind == "++" || kind == "--") && out.kind == "update_expression") {
          out.op = std::string(kind);
        }
        continue;
      }
      if (is_comment(kind)) {
        continue;
      }
      SyntaxNode child;
      if (const char* field = ts_tree_cursor_current_field_name(cursor)) {
        child.field = field;
      }
      build(cursor, child);
      out.children.push_back(std::move(child));
    } while (ts_tree_cursor_goto_next_sibling(cursor));
    ts_tree_cursor_goto_parent(cursor);
  }

 private:
  void fill(TSNode node, SyntaxNode& out) {
    out.kind = ts_node_type(node);
    out.span = {ts_node_start_byte(node), ts_node_end_byte(node)};
    out.start_line = ts_node_start_point(node).row + 1;
    out.end_line = ts_node_end_point(node).row + 1;
    out.error = out.kind == "ERROR";
    if (out.error) {
      diagnostics_.push_back("syntax error at line " + std::to_string(out.start_line));
    }
    out.text = text_.substr(out.span.start, out.span.end - out.span.start);
  }

  std::string_view text_;
  std::vector<std::string>& diagnostics_;
};

void link_parents(SyntaxNode& node) {
  for (auto& c : node.children) {
    c.parent = &node;
    link_parents(c);
  }
}

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

UnitPtr parse_unit(std::string path, std::string text) {
  auto unit = std::make_shared<SourceUnit>(std::move(path), std::move(text));
  std::unique_ptr<TSParser, ParserDeleter> parser(ts_parser_new());
  ts_parser_set_language(parser.get(), tree_sitter_java());
  ts_parser_set_timeout_micros(parser.get(), 30'000'000);
  const std::string& src = unit->text_;
  std::unique_ptr<TSTree, TreeDeleter> tree(ts_parser_parse_string(
      parser.get(), nullptr, src.data(), static_cast<std::uint32_t>(src.size())));
  if (!tree) {
    unit->parse_failed_ = true;
    unit->diagnostics_.push_back("parser gave up (timeout)");
    return unit;
  }
  TSNode root = ts_tree_root_node(tree.get());
  TSTreeCursor cursor = ts_tree_cursor_new(root);
  Normalizer norm(src, unit->diagnostics_);
  SyntaxNode built;
  norm.build(&cursor, built);
  ts_tree_cursor_delete(&cursor);
  // Root always covers the whole file, even with leading/trailing trivia.
  built.span = {0, static_cast<std::uint32_t>(src.size())};
  built.text = src;
  built.start_line = 1;
  unit->root_ = std::move(built);
  link_parents(unit->root_);

  const SyntaxNode& r = unit->root_;
  bool all_error = !r.children.empty() &&
                   std::all_of(r.children.begin(), r.children.end(),
                               [](const SyntaxNode& c) { return c.error; });
  if (r.error || (!is_blank(src) && (all_error || r.children.empty()))) {
    unit->parse_failed_ = true;
    unit->diagnostics_.push_back("PARSE_FAILED: no recoverable Java structure");
  }
  return unit;
}

UnitPtr parse_file(const fs::path& file, const std::string& display_path) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read error on " + file.string());
  }
  return parse_unit(display_path, buf.str());
}

namespace {

std::string_view last_segment(std::string_view dotted) {
  // Drop generic arguments, then take the part after the final dot.
  if (auto lt = dotted.find('<'); lt != std::string_view::npos) {
    dotted = dotted.substr(0, lt);
  }
  while (!dotted.empty() && std::isspace(static_cast<unsigned char>(dotted.back()))) {
    dotted.remove_suffix(1);
  }
  if (auto d = dotted.rfind('.'); d != std::string_view::npos) {
    return dotted.substr(d + 1);
  }
  return dotted;
}

std::vector<const SyntaxNode*> parameters_of(const SyntaxNode& decl) {
  std::vector<const SyntaxNode*> out;
  if (const SyntaxNode* params = decl.child("parameters")) {
    for (const auto& p : params->children) {
      if (p.kind == "formal_parameter" || p.kind == "spread_parameter") {
        out.push_back(&p);
      }
    }
  }
  return out;
}

std::string_view param_type_text(const SyntaxNode& p) {
  if (const SyntaxNode* t = p.child("type")) {
    return t->text;
  }
  if (!p.children.empty()) {
    return p.children.front().text;
  }
  return {};
}

bool is_array_param(const SyntaxNode& p) {
  if (p.kind == "spread_parameter") {
    return true;
  }
  const SyntaxNode* t = p.child("type");
  if (t != nullptr && t->kind == "array_type") {
    return true;
  }
  // `X509Certificate chain[]` puts the dimensions on the parameter itself.
  return p.child("dimensions") != nullptr || p.first_child_of_kind("dimensions") != nullptr;
}

bool is_check_server_trusted(const SyntaxNode& decl) {
  const SyntaxNode* name = decl.child("name");
  if (name == nullptr || name->text != "checkServerTrusted") {
    return false;
  }
  auto params = parameters_of(decl);
  if (params.size() < 2 || params.size() > 3) {
    return false;
  }
  return is_array_param(*params[0]) && last_segment(param_type_text(*params[1])) == "String";
}

bool is_hostname_verify(const SyntaxNode& decl) {
  const SyntaxNode* name = decl.child("name");
  if (name == nullptr || name->text != "verify") {
    return false;
  }
  auto params = parameters_of(decl);
  return params.size() == 2 && last_segment(param_type_text(*params[0])) == "String" &&
         last_segment(param_type_text(*params[1])) == "SSLSession";
}

const SyntaxNode* class_body_of(const SyntaxNode& decl) {
  if (const SyntaxNode* b = decl.child("body")) {
    return b;
  }
  return decl.first_child_of_kind("class_body");
}

bool is_class_like(const SyntaxNode& n) {
  return n.kind == "class_declaration" || n.kind == "enum_declaration" ||
         n.kind == "interface_declaration" ||
         (n.kind == "object_creation_expression" && n.first_child_of_kind("class_body"));
}

void describe_enclosing(const SyntaxNode* node, InvocationSite& site) {
  const SyntaxNode* cls = nullptr;
  for (const SyntaxNode* p = node->parent; p != nullptr; p = p->parent) {
    if (is_class_like(*p)) {
      cls = p;
      break;
    }
  }
  if (cls == nullptr) {
    return;
  }
  std::string name;
  const SyntaxNode* c = cls;
  std::string suffix;
  // Anonymous classes are named after the nearest named class plus the type.
  while (c != nullptr && c->kind == "object_creation_expression") {
    const SyntaxNode* t = c->child("type");
    suffix = "$" + std::string(t ? last_segment(t->text) : "") + suffix;
    const SyntaxNode* up = c->parent;
    c = nullptr;
    for (; up != nullptr; up = up->parent) {
      if (is_class_like(*up)) {
        c = up;
        break;
      }
    }
  }
  if (c != nullptr) {
    if (const SyntaxNode* n = c->child("name")) {
      name = std::string(n->text);
    }
  }
  site.enclosing_class = name + suffix;
  if (const SyntaxNode* body = class_body_of(*cls)) {
    for (const auto& d : body->children) {
      site.context.push_back(&d);
    }
  }
}

void describe_method(const SyntaxNode* node, InvocationSite& site) {
  const SyntaxNode* m = node;
  if (m->kind != "method_declaration" && m->kind != "constructor_declaration") {
    m = enclosing(node, {"method_declaration", "constructor_declaration",
                         "class_body", "enum_body", "interface_body"});
  }
  if (m == nullptr || (m->kind != "method_declaration" && m->kind != "constructor_declaration")) {
    return;
  }
  if (m->kind == "constructor_declaration") {
    site.enclosing_method = "<init>";
  } else if (const SyntaxNode* n = m->child("name")) {
    site.enclosing_method = std::string(n->text);
  }
}

}  // namespace

std::vector<InvocationSite> extract_sites(const UnitPtr& unit, const ApiSet& apis) {
  std::vector<InvocationSite> sites;
  if (!unit || unit->parse_failed()) {
    return sites;
  }
  auto emit = [&](ApiKind kind, const SyntaxNode& node, const SyntaxNode* subtree,
                  std::string signature) {
    for (const auto& s : sites) {
      if (s.node == &node) {
        return;
      }
    }
    InvocationSite site;
    site.api = kind;
    site.unit = unit;
    site.node = &node;
    site.subtree = subtree;
    site.no_body = subtree == nullptr;
    site.signature = std::move(signature);
    site.id = unit->path() + ":" + std::to_string(node.span.start);
    describe_enclosing(&node, site);
    describe_method(&node, site);
    sites.push_back(std::move(site));
  };

  unit->root().walk([&](const SyntaxNode& n) {
    if (n.kind == "method_invocation") {
      const SyntaxNode* name = n.child("name");
      const SyntaxNode* object = n.child("object");
      const SyntaxNode* args = n.child("arguments");
      if (name == nullptr || object == nullptr || args == nullptr) {
        return;
      }
      std::string_view recv = last_segment(object->text);
      if (apis.has(ApiKind::kCipherGetInstance) && name->text == "getInstance" &&
          recv.find("Cipher") != std::string_view::npos) {
        emit(ApiKind::kCipherGetInstance, n, args, {});
      }
      for (const auto& sig : apis.extra) {
        if (sig.kind == ApiKind::kCustomRestrictive && name->text == sig.method &&
            recv.find(sig.receiver) != std::string_view::npos) {
          emit(sig.kind, n, args, sig.to_string());
        }
      }
    } else if (n.kind == "object_creation_expression") {
      const SyntaxNode* type = n.child("type");
      const SyntaxNode* args = n.child("arguments");
      if (apis.has(ApiKind::kSecretKeySpec) && type != nullptr && args != nullptr &&
          last_segment(type->text) == "SecretKeySpec") {
        emit(ApiKind::kSecretKeySpec, n, args, {});
      }
    } else if (n.kind == "method_declaration") {
      const SyntaxNode* body = n.child("body");
      if (apis.has(ApiKind::kCheckServerTrusted) && is_check_server_trusted(n)) {
        emit(ApiKind::kCheckServerTrusted, n, body, {});
      } else if (apis.has(ApiKind::kHostnameVerifier) && is_hostname_verify(n)) {
        emit(ApiKind::kHostnameVerifier, n, body, {});
      }
      const SyntaxNode* name = n.child("name");
      for (const auto& sig : apis.extra) {
        if (sig.kind == ApiKind::kCustomFlexible && name != nullptr &&
            name->text == sig.method &&
            static_cast<int>(parameters_of(n).size()) == sig.arity) {
          emit(sig.kind, n, body, sig.to_string());
        }
      }
    }
  });
  std::stable_sort(sites.begin(), sites.end(),
                   [](const InvocationSite& a, const InvocationSite& b) {
                     return a.offset() < b.offset();
                   });
  return sites;
}

ScanResult scan_corpus(const fs::path& root_dir, const ApiSet& apis, unsigned jobs) {
  std::error_code ec;
  if (!fs::exists(root_dir, ec)) {
    throw IoError("no such directory: " + root_dir.string());
  }
  std::vector<std::pair<std::string, fs::path>> files;
  if (fs::is_regular_file(root_dir, ec)) {
    files.emplace_back(root_dir.filename().generic_string(), root_dir);
  } else {
    fs::recursive_directory_iterator it(root_dir, fs::directory_options::skip_permission_denied,
                                        ec);
    if (ec) {
      throw IoError("cannot read directory " + root_dir.string() + ": " + ec.message());
    }
    for (const auto& entry : it) {
      if (entry.is_regular_file(ec) && entry.path().extension() == ".java") {
        files.emplace_back(fs::relative(entry.path(), root_dir).generic_string(), entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());

  struct PerFile {
    UnitPtr unit;
    std::vector<InvocationSite> sites;
    std::optional<ScanWarning> warning;
  };
  std::vector<PerFile> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      PerFile& r = results[i];
      try {
        r.unit = parse_file(files[i].second, files[i].first);
        if (r.unit->parse_failed()) {
          r.warning = ScanWarning{files[i].first, r.unit->diagnostics().back()};
        } else {
          r.sites = extract_sites(r.unit, apis);
        }
      } catch (const std::exception& e) {
        r.warning = ScanWarning{files[i].first, e.what()};
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  ScanResult out;
  for (auto& r : results) {
    if (r.warning) {
      out.warnings.push_back(std::move(*r.warning));
    }
    if (r.unit && !r.unit->parse_failed()) {
      out.units.push_back(r.unit);
    }
    for (auto& s : r.sites) {
      out.sites.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace cryptolens
