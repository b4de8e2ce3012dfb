#include "cryptolens/resolve.h"

#include "resolve_interp.h"

namespace cryptolens {

namespace detail {

namespace {

const SyntaxNode* container_of(const SyntaxNode* n) {
  return enclosing(n, {"lambda_expression", "method_declaration", "constructor_declaration",
                       "static_initializer", "field_declaration", "constant_declaration"});
}

}  // namespace

ValSet Interp::run(const SyntaxNode& expr) {
  const SyntaxNode* container = container_of(&expr);
  if (container == nullptr) {
    return eval(expr);
  }
  const SyntaxNode* cls = class_of(container);
  // The outermost non-lambda container decides static-ness.
  const SyntaxNode* owner = container;
  while (owner && owner->kind == "lambda_expression") owner = container_of(owner);
  std::optional<int> self;
  bool is_static = owner == nullptr || owner->kind == "static_initializer" ||
                   (owner->kind != "constructor_declaration" && has_modifier(*owner, "static")) ||
                   (cls && cls->kind == "interface_declaration");
  if (!is_static && cls) {
    HeapObj o;
    o.kind = HeapObj::Kind::kInstance;
    o.cls = cls;
    self = new_obj(std::move(o));
  }
  return eval_in_context(container, expr, cls, self, 0);
}

}  // namespace detail

ResolvedValue resolve(const SyntaxNode& expr, const InvocationSite& site,
                      const ResolutionBudget& budget) {
  detail::Interp interp(site, budget);
  detail::ValSet v = interp.run(expr);
  ResolvedValue out = interp.finish(v);
  if (out.candidates.size() > static_cast<std::size_t>(budget.max_candidates)) {
    out.candidates.resize(static_cast<std::size_t>(budget.max_candidates));
    out.residuals.insert(Residual::kUnknown);
  }
  return out;
}

std::optional<ResolvedValue> resolve_site(const InvocationSite& site,
                                          const ResolutionBudget& budget) {
  if (site.category() != ApiCategory::kRestrictive || site.subtree == nullptr ||
      site.subtree->children.empty()) {
    return std::nullopt;
  }
  return resolve(site.subtree->children.front(), site, budget);
}

std::set<std::string> visible_literals(const InvocationSite& site, const ResolvedValue* resolved) {
  std::set<std::string> out;
  const SyntaxNode* scope =
      site.node ? enclosing(site.node, {"method_declaration", "constructor_declaration",
                                        "field_declaration", "static_initializer"})
                : nullptr;
  if (scope == nullptr) scope = &site.unit->root();
  scope->walk([&](const SyntaxNode& n) {
    if (n.kind == "string_literal") out.insert(decode_java_literal(n.text));
  });
  if (resolved != nullptr) {
    for (const auto& st : resolved->trace) {
      if (st.rule == rule::kLiteral) out.insert(st.intermediate);
    }
  }
  return out;
}

}  // namespace cryptolens
