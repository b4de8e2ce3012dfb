#include "cryptolens/classify.h"

#include <algorithm>
#include <regex>
#include <sstream>

#include "tree_query.h"

namespace cryptolens {

namespace {

using detail::any_node;
using detail::call_name;
using detail::call_object;
using detail::method_decl_named;
using detail::param_names;

bool is_oid(std::string_view s) {
  static const std::regex re(R"(\d+(\.\d+)+)");
  return std::regex_match(s.begin(), s.end(), re);
}

// Type or identifier text naming a class anywhere in the body.
bool mentions_type(const SyntaxNode* root, std::string_view type) {
  return any_node(root, [&](const SyntaxNode& n) {
    return (n.kind == "type_identifier" || n.kind == "identifier") && n.text == type;
  });
}

bool step_inside(const TraceStep& s, const SyntaxNode* subtree) {
  return subtree != nullptr && subtree->span.contains(s.span);
}

bool has_step(const ResolvedValue* r, std::initializer_list<std::string_view> rules,
              const SyntaxNode* within = nullptr) {
  if (r == nullptr) return false;
  return std::any_of(r->trace.begin(), r->trace.end(), [&](const TraceStep& s) {
    bool rule_ok = std::find(rules.begin(), rules.end(), s.rule) != rules.end();
    return rule_ok && (within == nullptr || step_inside(s, within));
  });
}

bool is_logging_call(const SyntaxNode& call) {
  auto obj = call_object(call);
  auto name = call_name(call);
  if (name == "printStackTrace") return true;
  if (obj == "Log" || obj == "android.util.Log" || obj == "Timber") return true;
  if (obj == "System.out" || obj == "System.err") return true;
  if (obj.size() >= 3 && (obj.substr(obj.size() - 3) == "LOG" || obj.substr(obj.size() - 3) == "log" ||
                          obj.substr(obj.size() - 3) == "Log")) {
    return true;
  }
  if (obj == "logger" || obj == "LOGGER" || obj == "Logger") return true;
  return false;
}

bool throws_type(const SyntaxNode* root, std::string_view suffix, bool outside_catch) {
  return any_node(root, [&](const SyntaxNode& n) {
    if (n.kind != "throw_statement" || n.children.empty()) return false;
    if (outside_catch && enclosing(&n, {"catch_clause"}) != nullptr) return false;
    const SyntaxNode& e = n.children.front();
    std::string_view t;
    if (e.kind == "object_creation_expression") {
      if (const SyntaxNode* ty = e.child("type")) t = ty->text;
    }
    return t.size() >= suffix.size() && t.substr(t.size() - suffix.size()) == suffix;
  });
}

// Statements that reach a logging call or are pure structure around one.
bool only_logging(const SyntaxNode& block, bool& saw_log) {
  for (const auto& s : block.children) {
    if (s.kind == "expression_statement") {
      if (s.children.empty() || s.children.front().kind != "method_invocation" ||
          !is_logging_call(s.children.front())) {
        return false;
      }
      saw_log = true;
    } else if (s.kind == "enhanced_for_statement" || s.kind == "for_statement") {
      const SyntaxNode* body = s.child("body");
      if (body == nullptr) return false;
      if (body->kind == "block") {
        if (!only_logging(*body, saw_log)) return false;
      } else {
        SyntaxNode wrapper;
        wrapper.children.push_back(*body);
        if (!only_logging(wrapper, saw_log)) return false;
      }
    } else if (s.kind == "block") {
      if (!only_logging(s, saw_log)) return false;
    } else if (s.kind == "try_statement") {
      const SyntaxNode* body = s.child("body");
      if (body == nullptr || !only_logging(*body, saw_log)) return false;
    } else {
      return false;
    }
  }
  return true;
}

void classify_restrictive(const InvocationSite& site, const ResolvedValue* r,
                          std::set<std::string>& out) {
  const SyntaxNode* args = site.subtree;
  std::size_t d = args ? args->descendant_count() : 0;
  if (d == 0) {
    out.insert("EMPTY");
    return;
  }
  for (const auto& a : args->children) {
    if (a.kind == "string_literal") out.insert("STRING");
  }
  if (r != nullptr &&
      std::any_of(r->candidates.begin(), r->candidates.end(), [](const std::string& c) { return is_oid(c); })) {
    out.insert("OID");
  }
  if (any_node(args, [](const SyntaxNode& n) { return n.kind == "ternary_expression"; })) {
    out.insert("TEROP");
  }
  if (any_node(args, [](const SyntaxNode& n) { return n.kind == "this"; }) ||
      has_step(r, {rule::kThisField}, args)) {
    out.insert("THIS");
  }
  bool syntactic_concat = any_node(args, [](const SyntaxNode& n) {
    if (n.kind != "binary_expression" || n.op != "+") return false;
    return std::any_of(n.children.begin(), n.children.end(),
                       [](const SyntaxNode& c) { return c.kind == "string_literal"; });
  });
  if (syntactic_concat || has_step(r, {rule::kConcat}, args)) out.insert("CONCT");
  if (r == nullptr) {
    // Syntax only.
    for (const auto& a : args->children) {
      if (a.kind == "identifier") out.insert("ID");
      if (a.kind == "method_invocation") out.insert("METHOD");
    }
  } else {
    if (has_step(r, {rule::kBuilderAppend, rule::kBuilderToString})) out.insert("STRBUF");
    if (has_step(r, {rule::kBase64})) out.insert("BAS64");
    if (has_step(r, {rule::kNativeCall}) || r->has(Residual::kNative)) out.insert("NATIVE");
    if (has_step(r, {rule::kSeparator})) out.insert("SEPRT");
    if (has_step(r, {rule::kLocal, rule::kField}, args)) out.insert("ID");
    if (has_step(r, {rule::kMethodInline, rule::kUnresolvedCall})) out.insert("METHOD");
    if (has_step(r, {rule::kStringOp, rule::kFormat}, args)) out.insert("STROP");
    if (has_step(r, {rule::kStaticFinal})) out.insert("STATIC");
    if (has_step(r, {rule::kEnumConstant})) out.insert("ENUM");
  }
}

void classify_flexible(const InvocationSite& site, std::set<std::string>& out) {
  const SyntaxNode* body = site.subtree;
  const SyntaxNode* decl = site.node;
  if (site.no_body && decl != nullptr) {
    if (has_modifier(*decl, "native")) {
      out.insert("NATIVD");
    } else {
      out.insert("ABS");
    }
  }
  std::size_t d = body ? body->descendant_count() : 0;
  if (d == 0) {
    out.insert("EMPTY");
    return;
  }
  auto params = param_names(decl);
  const std::string chain = params.size() > 0 ? params[0] : std::string();
  const std::string auth = params.size() > 1 ? params[1] : std::string();
  const SyntaxNode& root = site.unit->root();

  if (throws_type(body, "IllegalArgumentException", false)) out.insert("ILL");
  if (throws_type(body, "CertificateException", true)) out.insert("CEXP");
  {
    // Only statement is an unconditional NPE/AssertionError throw.
    if (body->children.size() == 1 && body->children.front().kind == "throw_statement") {
      const SyntaxNode& t = body->children.front();
      if (!t.children.empty()) {
        const SyntaxNode& e = t.children.front();
        const SyntaxNode* ty = e.kind == "object_creation_expression" ? e.child("type") : nullptr;
        if (e.kind == "null_literal" ||
            (ty && (ty->text == "NullPointerException" || ty->text == "AssertionError"))) {
          out.insert("NEXP");
        }
      }
    }
  }
  bool saw_log = false;
  if (only_logging(*body, saw_log) && saw_log) out.insert("LOG");

  body->walk([&](const SyntaxNode& n) {
    if (n.kind == "this") out.insert("THIS");
    if (n.kind == "null_literal" && n.parent && n.parent->kind == "binary_expression" &&
        (n.parent->op == "==" || n.parent->op == "!=")) {
      out.insert("NULL");
    }
    if (n.kind == "field_access") {
      const SyntaxNode* f = n.child("field");
      const SyntaxNode* o = n.child("object");
      if (f && f->text == "length" && o && !chain.empty() && o->text == chain) out.insert("LEN");
    }
    if (!auth.empty() && n.kind == "identifier" && n.text == auth && n.parent) {
      const SyntaxNode* p = n.parent;
      bool as_receiver = p->kind == "method_invocation" && p->child("object") == &n;
      bool as_arg = p->kind == "argument_list" && p->parent &&
                    (call_name(*p->parent) == "equals" || call_name(*p->parent) == "equalsIgnoreCase" ||
                     call_name(*p->parent) == "isEmpty");
      bool compared = p->kind == "binary_expression";
      if (as_receiver || as_arg || compared) out.insert("AUTH");
    }
    if (n.kind != "method_invocation") return;
    auto name = call_name(n);
    auto obj = call_object(n);
    const SyntaxNode* object = n.child("object");
    if (name == "checkClientTrusted") out.insert("CLIENT");
    if (name == "isTrusted") out.insert("ISTRST");
    if (name == "checkValidity") out.insert("VAL");
    if (name == "verify") out.insert("VER");
    if (name == "getEncoded") out.insert("ENCOD");
    if (name == "getPublicKey") out.insert("GETPUB");
    if (name == "getIssuerDN") out.insert("GETISR");
    if (name == "getSubjectDN") out.insert("GETSUB");
    if (obj == "Arrays" || obj == "java.util.Arrays") out.insert("ARR");
    if (name == "asList" || name == "add" || name == "addAll" || name == "remove" ||
        name == "removeAll" || name == "retainAll") {
      out.insert("LIST");
    }
    if (name == "contains" || name == "equals" || name == "equalsIgnoreCase" ||
        name == "startsWith" || name == "endsWith" || name == "matches" || name == "compareTo" ||
        name == "indexOf" || name == "toLowerCase" || name == "toUpperCase" || name == "trim" ||
        name == "substring" || name == "split" || name == "replace") {
      // Arrays.equals is ARR, not a string operation.
      if (obj != "Arrays" && obj != "java.util.Arrays") out.insert("STROP");
    }
    bool local_call = object == nullptr || object->kind == "this" || object->kind == "super";
    if (local_call && name != "checkClientTrusted") {
      const SyntaxNode* target = method_decl_named(root, name, &n);
      bool native = (target && has_modifier(*target, "native")) || name.substr(0, 2) == "n_";
      out.insert(native ? "NATIVE" : "METHOD");
    } else if (local_call) {
      out.insert("METHOD");
    } else if (const SyntaxNode* target = method_decl_named(root, name, &n);
               target && has_modifier(*target, "native")) {
      out.insert("NATIVE");
    }
  });
  if (mentions_type(body, "CertificateFactory")) out.insert("CERFAC");
  if (mentions_type(body, "BigInteger")) out.insert("BIGINT");
  if (mentions_type(body, "TrustManagerFactory")) out.insert("TMFAC");
  if (mentions_type(body, "CertPathValidator")) out.insert("CERPAT");
  if (mentions_type(body, "PKIXParameters") || mentions_type(body, "PKIXBuilderParameters")) {
    out.insert("PKIX");
  }
  bool hash = mentions_type(body, "MessageDigest") ||
              any_node(body, [](const SyntaxNode& n) {
                if (n.kind != "string_literal") return false;
                std::string s = decode_java_literal(n.text);
                std::string u;
                for (char c : s) {
                  if (c != '-') u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
                }
                return u == "SHA1" || u == "SHA256" || u == "SHA384" || u == "SHA512" || u == "MD5";
              });
  if (hash) out.insert("HASH");
}

}  // namespace

const std::vector<std::string>& restrictive_labels() {
  static const std::vector<std::string> v = {"STROP", "TEROP", "ENUM", "ID", "THIS",
                                             "METHOD", "STATIC", "NATIVE", "BAS64", "STRBUF",
                                             "CONCT", "SEPRT", "OID", "STRING", "EMPTY"};
  return v;
}

const std::vector<std::string>& flexible_labels() {
  static const std::vector<std::string> v = {
      "ABS",   "NATIVD", "ILL",    "CEXP",   "NEXP",   "LOG",    "NATIVE", "METHOD",
      "THIS",  "ISTRST", "VAL",    "LEN",    "NULL",   "LIST",   "CERFAC", "VER",
      "STROP", "AUTH",   "ENCOD",  "ARR",    "BIGINT", "TMFAC",  "GETPUB", "GETISR",
      "GETSUB", "HASH",  "CERPAT", "PKIX",   "CLIENT", "EMPTY"};
  return v;
}

bool is_label(std::string_view name, ApiCategory category) {
  const auto& v = category == ApiCategory::kRestrictive ? restrictive_labels() : flexible_labels();
  return std::find(v.begin(), v.end(), name) != v.end();
}

std::string composite_name(const LabelSet& set) {
  const std::set<std::string>& l = set.labels;
  if (l == std::set<std::string>{"STRING", "OID"}) return "STRING/OID";
  if (l == std::set<std::string>{"LEN", "AUTH"}) return "LEN/AUTH";
  // Catalog order keeps names stable, e.g. ID+METHOD.
  const auto& order = set.category == ApiCategory::kRestrictive ? restrictive_labels() : flexible_labels();
  std::vector<std::string> names(l.begin(), l.end());
  auto rank = [&](const std::string& s) {
    auto it = std::find(order.begin(), order.end(), s);
    return it == order.end() ? order.size() : static_cast<std::size_t>(it - order.begin());
  };
  std::stable_sort(names.begin(), names.end(),
                   [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += "+";
    out += n;
  }
  return out;
}

LabelSet classify(const InvocationSite& site, const ResolvedValue* resolved) {
  LabelSet out;
  out.category = site.category();
  if (out.category == ApiCategory::kRestrictive) {
    classify_restrictive(site, resolved, out.labels);
  } else {
    classify_flexible(site, out.labels);
  }
  if (out.labels.empty()) out.labels.insert(std::string(kUnknownApi));
  return out;
}

ArgumentSignature signature_of(const InvocationSite& site) {
  ArgumentSignature sig;
  if (site.subtree == nullptr) return sig;
  for (const auto& c : site.subtree->children) {
    c.walk([&](const SyntaxNode& n) { ++sig[n.kind]; });
  }
  return sig;
}

std::string to_string(const ArgumentSignature& sig) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : sig) {
    if (!first) os << ", ";
    first = false;
    os << k << ":" << v;
  }
  os << "}";
  return os.str();
}

std::vector<std::string> match_signature(const std::vector<InvocationSite>& sites,
                                         const ArgumentSignature& pattern) {
  std::vector<std::string> out;
  for (const auto& s : sites) {
    if (signature_of(s) == pattern) out.push_back(s.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrevalenceRow> prevalence_report(const std::vector<LabelSet>& sets) {
  std::vector<PrevalenceRow> rows;
  auto add_rows = [&](ApiCategory cat, const std::vector<std::string>& names) {
    for (const auto& n : names) {
      PrevalenceRow r;
      r.label = n;
      r.category = std::string(to_string(cat));
      for (const auto& s : sets) {
        if (s.category == cat && s.has(n)) ++r.count;
      }
      rows.push_back(std::move(r));
    }
    PrevalenceRow u;
    u.label = std::string(kUnknownApi);
    u.category = std::string(to_string(cat));
    for (const auto& s : sets) {
      if (s.category == cat && s.unknown()) ++u.count;
    }
    rows.push_back(std::move(u));
  };
  add_rows(ApiCategory::kRestrictive, restrictive_labels());
  add_rows(ApiCategory::kFlexible, flexible_labels());
  return rows;
}

std::string prevalence_csv(const std::vector<PrevalenceRow>& rows) {
  std::ostringstream os;
  os << "category,label,count\n";
  for (const auto& r : rows) os << r.category << "," << r.label << "," << r.count << "\n";
  return os.str();
}

}  // namespace cryptolens
