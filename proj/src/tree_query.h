#pragma once

// Small read-only queries over normalized trees, shared by classify and rules.

#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/syntax.h"

namespace cryptolens::detail {

template <typename Pred>
bool any_node(const SyntaxNode* root, Pred&& pred) {
  if (root == nullptr) return false;
  bool hit = false;
  root->walk([&](const SyntaxNode& n) {
    if (!hit && pred(n)) hit = true;
  });
  return hit;
}

inline std::string_view call_name(const SyntaxNode& n) {
  if (n.kind != "method_invocation") return {};
  const SyntaxNode* name = n.child("name");
  return name ? name->text : std::string_view{};
}

inline std::string_view call_object(const SyntaxNode& n) {
  const SyntaxNode* o = n.child("object");
  return o ? o->text : std::string_view{};
}

// Unqualified, this. or super. call.
inline bool is_local_call(const SyntaxNode& n) {
  const SyntaxNode* o = n.child("object");
  return o == nullptr || o->kind == "this" || o->kind == "super";
}

inline std::vector<std::string> param_names(const SyntaxNode* method) {
  std::vector<std::string> out;
  if (method == nullptr) return out;
  const SyntaxNode* ps = method->child("parameters");
  if (ps == nullptr) return out;
  for (const auto& p : ps->children) {
    const SyntaxNode* n = nullptr;
    if (p.kind == "formal_parameter") {
      n = p.child("name");
    } else if (p.kind == "spread_parameter") {
      if (const SyntaxNode* d = p.first_child_of_kind("variable_declarator")) n = d->child("name");
    }
    if (n) out.emplace_back(n->text);
  }
  return out;
}

// First method declaration with this name, preferring the class of `near`.
inline const SyntaxNode* method_decl_named(const SyntaxNode& root, std::string_view name,
                                           const SyntaxNode* near = nullptr) {
  const SyntaxNode* cls = near ? enclosing(near, {"class_declaration", "enum_declaration",
                                                  "object_creation_expression",
                                                  "interface_declaration"})
                               : nullptr;
  const SyntaxNode* first = nullptr;
  const SyntaxNode* same = nullptr;
  root.walk([&](const SyntaxNode& n) {
    if (n.kind != "method_declaration") return;
    const SyntaxNode* nm = n.child("name");
    if (!nm || nm->text != name) return;
    if (first == nullptr) first = &n;
    if (same == nullptr && cls != nullptr && cls->span.contains(n.span)) same = &n;
  });
  return same ? same : first;
}

}  // namespace cryptolens::detail
