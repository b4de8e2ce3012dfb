#include <algorithm>
#include <cctype>

#include "cryptolens/rules.h"
#include "tree_query.h"

namespace cryptolens {

namespace {

using detail::any_node;
using detail::call_name;
using detail::is_local_call;
using detail::method_decl_named;
using detail::param_names;

MisuseFinding flex_finding(const InvocationSite& site, const RuleCatalog& catalog,
                           std::string_view id, std::string message) {
  const Rule* rule = catalog.find(id);
  MisuseFinding f;
  f.site_id = site.id;
  f.rule_id = rule->id;
  f.severity = rule->severity;
  f.message = std::move(message);
  if (site.node != nullptr) {
    f.start_line = site.node->start_line;
    f.end_line = site.node->end_line;
  }
  return f;
}

bool is_trivially_accepting(const SyntaxNode* body) {
  if (body == nullptr) return false;
  if (body->children.empty()) return true;
  if (body->children.size() != 1) return false;
  const SyntaxNode& s = body->children.front();
  if (s.kind != "return_statement") return false;
  return s.children.empty() || s.children.front().kind == "true";
}

// Follows local calls up to `hops` deep; true when one ends in an empty or
// always-true method.
bool delegates_to_empty(const SyntaxNode& body, const SyntaxNode& root, int hops,
                        std::vector<const SyntaxNode*>& seen) {
  if (hops <= 0) return false;
  bool found = false;
  body.walk([&](const SyntaxNode& n) {
    if (found || n.kind != "method_invocation" || !is_local_call(n)) return;
    const SyntaxNode* target = method_decl_named(root, call_name(n), &n);
    if (target == nullptr || std::find(seen.begin(), seen.end(), target) != seen.end()) return;
    if (has_modifier(*target, "native") || has_modifier(*target, "abstract")) return;
    const SyntaxNode* tb = target->child("body");
    if (tb == nullptr) return;
    if (is_trivially_accepting(tb)) {
      found = true;
      return;
    }
    seen.push_back(target);
    // Only pure delegation chains are followed.
    bool only_calls = std::all_of(tb->children.begin(), tb->children.end(), [](const SyntaxNode& s) {
      return s.kind == "expression_statement" && !s.children.empty() &&
             s.children.front().kind == "method_invocation";
    });
    if (only_calls && delegates_to_empty(*tb, root, hops - 1, seen)) found = true;
  });
  return found;
}

bool mentions_identifier(const SyntaxNode& n, std::string_view name) {
  return any_node(&n, [&](const SyntaxNode& x) { return x.kind == "identifier" && x.text == name; });
}

bool is_sha1_literal(const SyntaxNode& n) {
  if (n.kind != "string_literal") return false;
  std::string s = decode_java_literal(n.text);
  std::string u;
  for (char c : s) {
    if (c != '-') u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return u == "SHA1";
}

// `x.equals("...")`-style comparison where one side is a string literal and
// the other is derived from something other than the auth-type parameter.
bool hardcoded_comparison(const SyntaxNode& body, std::string_view auth) {
  static const std::string_view kCmp[] = {"equals", "equalsIgnoreCase", "contains",
                                          "startsWith", "endsWith", "matches", "contentEquals"};
  return any_node(&body, [&](const SyntaxNode& n) {
    auto name = call_name(n);
    if (name.empty() || std::find(std::begin(kCmp), std::end(kCmp), name) == std::end(kCmp)) {
      return false;
    }
    const SyntaxNode* object = n.child("object");
    const SyntaxNode* args = n.child("arguments");
    if (object == nullptr || args == nullptr || args->children.size() != 1) return false;
    const SyntaxNode& arg = args->children.front();
    const SyntaxNode* other = nullptr;
    if (arg.kind == "string_literal") {
      other = object;
    } else if (object->kind == "string_literal") {
      other = &arg;
    }
    if (other == nullptr || other->kind == "string_literal") return false;
    if (!auth.empty() && mentions_identifier(*other, auth)) return false;
    return true;
  });
}

}  // namespace

std::vector<MisuseFinding> check_flexible(const InvocationSite& site, const LabelSet& labels,
                                          const RuleCatalog& catalog) {
  std::vector<MisuseFinding> out;
  const SyntaxNode* body = site.subtree;
  auto params = param_names(site.node);
  const std::string chain = params.empty() ? std::string() : params[0];
  const std::string auth = params.size() > 1 ? params[1] : std::string();
  auto add = [&](std::string_view id, std::string msg) {
    out.push_back(flex_finding(site, catalog, id, std::move(msg)));
  };
  // Body shape only, so it also covers bodies no label predicate matched
  // (a bare `return;` or `return true;`).
  auto ineffectual = [&] {
    if (body == nullptr || body->children.size() != 1) return;
    const SyntaxNode& s = body->children.front();
    if (s.kind == "throw_statement") {
      add("F10", "body always throws");
    } else if (s.kind == "return_statement" && (chain.empty() || !mentions_identifier(s, chain))) {
      add("F10", "returns without examining the certificate");
    }
  };
  if (labels.unknown()) {
    ineffectual();
    return out;
  }

  if (labels.has("ABS") || labels.has("NATIVD")) {
    add("F9", labels.has("NATIVD") ? "native declaration" : "abstract declaration");
    return out;
  }
  if (labels.has("EMPTY")) {
    add("F1", "empty body accepts every certificate");
    return out;
  }
  if (labels.has("LOG")) add("F2", "body only logs");

  std::vector<const SyntaxNode*> seen;
  if (body && delegates_to_empty(*body, site.unit->root(), 2, seen)) {
    add("F3", "delegates to a method that accepts everything");
  }

  const bool strong = labels.has("VER") || labels.has("CERPAT") || labels.has("TMFAC") ||
                      labels.has("ISTRST") || labels.has("STROP") ||
                      (labels.has("HASH") && labels.has("ARR"));
  if (labels.has("VAL") && !strong) add("F4", "only the validity period is checked");
  if (labels.has("ISTRST")) add("F5", "isTrusted does not consult the trust manager");
  if (labels.has("GETSUB") || labels.has("GETISR")) {
    add("F6", labels.has("GETSUB") ? "getSubjectDN is deprecated" : "getIssuerDN is deprecated");
  }
  if (labels.has("HASH") && (labels.has("STROP") || labels.has("ARR")) &&
      any_node(body, is_sha1_literal)) {
    add("F7", "SHA-1 fingerprint comparison");
  }
  if (body && hardcoded_comparison(*body, auth)) add("F8", "comparison against a hard-coded value");

  ineffectual();

  static const char* kVerifying[] = {"VER",    "CERPAT", "HASH",   "STROP",  "TMFAC", "ISTRST",
                                     "VAL",    "CLIENT", "METHOD", "NATIVE", "GETPUB", "ENCOD",
                                     "CERFAC", "PKIX",   "GETSUB", "GETISR"};
  bool structural = labels.has("LEN") || labels.has("NULL") || labels.has("AUTH") || labels.has("ILL");
  bool verifies = std::any_of(std::begin(kVerifying), std::end(kVerifying),
                              [&](const char* l) { return labels.has(l); });
  if (structural && !verifies) add("F11", "only the shape of the chain is checked");
  return out;
}

std::vector<MisuseFinding> check_site(const InvocationSite& site, const ResolvedValue* resolved,
                                      const LabelSet& labels, const RuleCatalog& catalog) {
  if (site.category() == ApiCategory::kFlexible) return check_flexible(site, labels, catalog);
  if (labels.unknown()) return {};
  if (site.api == ApiKind::kSecretKeySpec) return check_key_material(site, resolved, catalog);
  return check_restrictive(site, resolved, labels, catalog);
}

}  // namespace cryptolens
