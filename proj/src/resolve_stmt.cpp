#include <algorithm>

#include "resolve_interp.h"

namespace cryptolens::detail {

namespace {

bool contains(const SyntaxNode& outer, const SyntaxNode& inner) {
  return outer.span.contains(inner.span);
}

const SyntaxNode* body_of(const SyntaxNode* container) {
  if (container->kind == "static_initializer") {
    return container->first_child_of_kind("block");
  }
  return container->child("body");
}

}  // namespace

void Interp::declare(const SyntaxNode& decl) {
  const SyntaxNode* type = decl.child("type");
  char et = type ? elem_type_of(type->text) : 'O';
  char prim = type ? prim_type(type->text) : 0;
  for (const SyntaxNode* d : decl.children_with_field("declarator")) {
    const SyntaxNode* name = d->child("name");
    if (name == nullptr) continue;
    const SyntaxNode* init = d->child("value");
    ValSet v;
    if (init == nullptr) {
      v = residual(Residual::kUnknown);
    } else if (init->kind == "array_initializer") {
      v = eval_array_initializer(*init, et);
    } else {
      v = eval(*init);
      // Implicit narrowing of constants, e.g. `char c = 65;`.
      if (prim != 0 && prim != 'Z' && type->text.find('[') == std::string_view::npos) {
        v = map1(v, [&](const Value& x) -> std::optional<Value> {
          if (auto* i = std::get_if<IntV>(&x)) return make_int(i->v, prim);
          return x;
        });
      }
    }
    st_.locals[std::string(name->text)] = std::move(v);
  }
}

Interp::Flow Interp::exec_block(const SyntaxNode& s) {
  for (const auto& c : s.children) {
    Flow f = exec(c);
    if (f != Flow::kNormal) return f;
  }
  return Flow::kNormal;
}

Interp::Flow Interp::exec_if(const SyntaxNode& s) {
  const SyntaxNode* cond = s.child("condition");
  const SyntaxNode* then_s = s.child("consequence");
  const SyntaxNode* else_s = s.child("alternative");
  std::optional<bool> c;
  if (cond) c = as_bool(eval(*cond));
  if (c) {
    if (*c) return then_s ? exec(*then_s) : Flow::kNormal;
    return else_s ? exec(*else_s) : Flow::kNormal;
  }
  State base = st_;
  Flow fa = then_s ? exec(*then_s) : Flow::kNormal;
  State a = std::move(st_);
  st_ = std::move(base);
  Flow fb = else_s ? exec(*else_s) : Flow::kNormal;
  auto ends = [](Flow f) { return f == Flow::kReturn || f == Flow::kThrow; };
  if (ends(fa) && ends(fb)) return fa == Flow::kReturn || fb == Flow::kReturn ? Flow::kReturn : Flow::kThrow;
  if (ends(fa)) return fb;
  if (ends(fb)) {
    st_ = std::move(a);
    return fa;
  }
  st_ = join(a, st_);
  return fa == fb ? fa : Flow::kUnknownJump;
}

Interp::Flow Interp::exec_loop(const SyntaxNode& s) {
  const bool is_do = s.kind == "do_statement";
  const SyntaxNode* cond = s.child("condition");
  const SyntaxNode* body = s.child("body");
  for (const SyntaxNode* i : s.children_with_field("init")) {
    if (i->kind == "local_variable_declaration") declare(*i);
    else eval(*i);
  }
  auto undecidable = [&]() {
    havoc(s);
    State base = st_;
    if (body) exec(*body);
    st_ = join(base, st_);
    havoc(s);
    return Flow::kNormal;
  };
  bool first = true;
  while (!exhausted_) {
    if (!(is_do && first)) {
      if (cond != nullptr) {
        auto c = as_bool(eval(*cond));
        if (!c) return undecidable();
        if (!*c) break;
      }
    }
    first = false;
    Flow f = body ? exec(*body) : Flow::kNormal;
    if (f == Flow::kBreak) break;
    if (f == Flow::kReturn || f == Flow::kThrow) return f;
    if (f == Flow::kUnknownJump) {
      havoc(s);
      return Flow::kNormal;
    }
    for (const SyntaxNode* u : s.children_with_field("update")) eval(*u);
  }
  return Flow::kNormal;
}

Interp::Flow Interp::exec_enhanced_for(const SyntaxNode& s) {
  const SyntaxNode* name = s.child("name");
  const SyntaxNode* value = s.child("value");
  const SyntaxNode* body = s.child("body");
  if (name == nullptr || value == nullptr || body == nullptr) {
    havoc(s);
    return Flow::kNormal;
  }
  std::string var(name->text);
  ValSet coll = eval(*value);
  std::vector<ValSet> items;
  bool concrete = false;
  if (coll.concrete_single()) {
    if (const HeapObj* o = obj(coll.vals.front()); o && o->kind == HeapObj::Kind::kArray && !o->havoc) {
      items = o->elems;
      concrete = true;
    } else if (auto* str = std::get_if<StrV>(&coll.vals.front())) {
      // for (char c : s.toCharArray()) arrives here only via a string; unlikely but cheap.
      for (unsigned char ch : str->s) items.push_back(one(make_int(ch, 'C')));
      concrete = true;
    }
  }
  if (!concrete) {
    havoc(s);
    State base = st_;
    st_.locals[var] = residual(Residual::kUnknown, coll.prov);
    exec(*body);
    st_ = join(base, st_);
    havoc(s);
    st_.locals.erase(var);
    return Flow::kNormal;
  }
  for (const auto& it : items) {
    if (exhausted_) break;
    st_.locals[var] = it;
    Flow f = exec(*body);
    if (f == Flow::kBreak) break;
    if (f == Flow::kReturn || f == Flow::kThrow) return f;
    if (f == Flow::kUnknownJump) {
      havoc(s);
      return Flow::kNormal;
    }
  }
  st_.locals.erase(var);
  return Flow::kNormal;
}

Interp::Flow Interp::exec_switch(const SyntaxNode& s) {
  const SyntaxNode* cond = s.child("condition");
  const SyntaxNode* block = s.child("body");
  if (cond == nullptr || block == nullptr) {
    havoc(s);
    return Flow::kNormal;
  }
  ValSet v = eval(*cond);
  const auto& items = block->children;
  // Index of the first statement after each label.
  auto matches = [&](const SyntaxNode& label) -> std::optional<bool> {
    if (label.children.empty()) return std::nullopt;  // default
    const Value& x = v.vals.front();
    for (const auto& e : label.children) {
      if (const HeapObj* o = obj(x); o && !o->enum_name.empty()) {
        if (e.text == o->enum_name) return true;
        continue;
      }
      ValSet lv = eval(e);
      if (lv.concrete_single() && lv.vals.front() == x) return true;
      if (lv.concrete_single()) {
        auto* a = std::get_if<IntV>(&lv.vals.front());
        auto* b = std::get_if<IntV>(&x);
        if (a && b && a->v == b->v) return true;
      }
    }
    return false;
  };
  auto run_from = [&](std::size_t start) {
    for (std::size_t i = start; i < items.size(); ++i) {
      if (items[i].kind == "switch_label") continue;
      Flow f = exec(items[i]);
      if (f == Flow::kBreak) return Flow::kNormal;
      if (f != Flow::kNormal) return f;
    }
    return Flow::kNormal;
  };
  if (v.concrete_single()) {
    std::optional<std::size_t> hit, fallback;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].kind != "switch_label") continue;
      auto m = matches(items[i]);
      if (!m) fallback = i;
      else if (*m && !hit) hit = i;
    }
    if (!hit) hit = fallback;
    if (!hit) return Flow::kNormal;
    return run_from(*hit);
  }
  havoc(s);
  State base = st_;
  State acc = st_;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].kind != "switch_label") continue;
    st_ = base;
    Flow f = run_from(i);
    if (f == Flow::kReturn || f == Flow::kThrow) continue;
    acc = join(acc, st_);
  }
  st_ = std::move(acc);
  return Flow::kNormal;
}

Interp::Flow Interp::exec(const SyntaxNode& s) {
  if (!tick()) return Flow::kNormal;
  const std::string& k = s.kind;
  if (k == "local_variable_declaration") {
    declare(s);
    return Flow::kNormal;
  }
  if (k == "expression_statement") {
    if (!s.children.empty()) eval(s.children.front());
    return Flow::kNormal;
  }
  if (k == "block" || k == "constructor_body") return exec_block(s);
  if (k == "explicit_constructor_invocation") {
    const SyntaxNode* which = s.child("constructor");
    const SyntaxNode* cls = frame_ ? frame_->cls : nullptr;
    if (which && which->kind == "super") cls = superclass_of(cls);
    std::vector<ValSet> args;
    if (const SyntaxNode* al = s.child("arguments")) {
      for (const auto& a : al->children) args.push_back(eval(a));
    }
    for (const SyntaxNode* m : members(cls)) {
      if (m->kind != "constructor_declaration" || m == (frame_ ? frame_->method : nullptr)) continue;
      std::size_t arity = 0;
      if (const SyntaxNode* ps = m->child("parameters")) {
        for (const auto& p : ps->children) {
          if (p.kind == "formal_parameter" || p.kind == "spread_parameter") ++arity;
        }
      }
      if (arity == args.size()) {
        call_user(m, cls, frame_ ? frame_->self : std::nullopt, args, s, false);
        break;
      }
    }
    return Flow::kNormal;
  }
  if (k == "return_statement") {
    ValSet v = s.children.empty() ? residual(Residual::kUnknown) : eval(s.children.front());
    if (frame_) {
      merge_into(frame_->ret, v);
      frame_->returned = true;
    }
    return Flow::kReturn;
  }
  if (k == "if_statement") return exec_if(s);
  if (k == "for_statement" || k == "while_statement" || k == "do_statement") return exec_loop(s);
  if (k == "enhanced_for_statement") return exec_enhanced_for(s);
  if (k == "switch_statement") return exec_switch(s);
  if (k == "try_statement" || k == "try_with_resources_statement") {
    if (const SyntaxNode* rs = s.child("resources")) {
      for (const auto& r : rs->children) {
        const SyntaxNode* name = r.child("name");
        const SyntaxNode* value = r.child("value");
        if (name && value) st_.locals[std::string(name->text)] = eval(*value);
      }
    }
    Flow f = Flow::kNormal;
    if (const SyntaxNode* body = s.child("body")) {
      State before = st_;
      f = exec(*body);
      if (s.first_child_of_kind("catch_clause")) {
        // Any statement may throw into a handler; the handler's effects are not modelled.
        st_ = join(before, st_);
        if (f == Flow::kThrow) f = Flow::kNormal;
      }
    }
    if (const SyntaxNode* fin = s.first_child_of_kind("finally_clause")) {
      if (const SyntaxNode* b = fin->first_child_of_kind("block")) {
        Flow ff = exec(*b);
        if (ff != Flow::kNormal) return ff;
      }
    }
    return f;
  }
  if (k == "throw_statement") {
    if (!s.children.empty()) eval(s.children.front());
    return Flow::kThrow;
  }
  if (k == "break_statement") return Flow::kBreak;
  if (k == "continue_statement") return s.children.empty() ? Flow::kContinue : Flow::kUnknownJump;
  if (k == "synchronized_statement") {
    if (const SyntaxNode* b = s.child("body")) return exec(*b);
    if (const SyntaxNode* b = s.first_child_of_kind("block")) return exec(*b);
    return Flow::kNormal;
  }
  if (k == "labeled_statement") {
    if (s.children.empty()) return Flow::kNormal;
    Flow f = exec(s.children.back());
    return f == Flow::kBreak ? Flow::kNormal : f;
  }
  if (k == "assert_statement" || k == "class_declaration" || k == "local_class_declaration" ||
      k == "interface_declaration" || k == "enum_declaration") {
    return Flow::kNormal;
  }
  havoc(s);
  return Flow::kNormal;
}

void Interp::run_to(const SyntaxNode& s, const SyntaxNode& target) {
  if (exhausted_ || !contains(s, target) || &s == &target) return;
  const std::string& k = s.kind;
  if (k == "block" || k == "constructor_body" || k == "switch_block") {
    for (const auto& c : s.children) {
      if (contains(c, target)) {
        run_to(c, target);
        return;
      }
      if (c.kind == "switch_label") continue;
      exec(c);
    }
    return;
  }
  if (k == "if_statement") {
    const SyntaxNode* cond = s.child("condition");
    if (cond && contains(*cond, target)) return;
    if (cond) eval(*cond);
    for (const char* f : {"consequence", "alternative"}) {
      if (const SyntaxNode* b = s.child(f); b && contains(*b, target)) run_to(*b, target);
    }
    return;
  }
  if (k == "for_statement" || k == "while_statement" || k == "do_statement") {
    for (const SyntaxNode* i : s.children_with_field("init")) {
      if (contains(*i, target)) return;
      if (i->kind == "local_variable_declaration") declare(*i);
      else eval(*i);
    }
    havoc(s);
    if (const SyntaxNode* b = s.child("body"); b && contains(*b, target)) run_to(*b, target);
    return;
  }
  if (k == "enhanced_for_statement") {
    const SyntaxNode* value = s.child("value");
    if (value && contains(*value, target)) return;
    havoc(s);
    if (const SyntaxNode* name = s.child("name")) {
      st_.locals[std::string(name->text)] = residual(Residual::kUnknown);
    }
    if (const SyntaxNode* b = s.child("body"); b && contains(*b, target)) run_to(*b, target);
    return;
  }
  if (k == "try_statement" || k == "try_with_resources_statement") {
    if (const SyntaxNode* rs = s.child("resources")) {
      for (const auto& r : rs->children) {
        if (contains(r, target)) return;
        const SyntaxNode* name = r.child("name");
        const SyntaxNode* value = r.child("value");
        if (name && value) st_.locals[std::string(name->text)] = eval(*value);
      }
    }
    const SyntaxNode* body = s.child("body");
    if (body && contains(*body, target)) {
      run_to(*body, target);
      return;
    }
    if (body) exec(*body);
    for (const auto& c : s.children) {
      if (!contains(c, target)) continue;
      if (c.kind == "catch_clause") {
        havoc(*body);
        if (const SyntaxNode* p = c.first_child_of_kind("catch_formal_parameter")) {
          if (const SyntaxNode* n = p->child("name")) {
            st_.locals[std::string(n->text)] = residual(Residual::kUnknown);
          }
        }
        if (const SyntaxNode* b = c.child("body")) run_to(*b, target);
      } else if (c.kind == "finally_clause") {
        if (const SyntaxNode* b = c.first_child_of_kind("block")) run_to(*b, target);
      }
    }
    return;
  }
  if (k == "switch_statement") {
    const SyntaxNode* cond = s.child("condition");
    if (cond && contains(*cond, target)) return;
    if (cond) eval(*cond);
    havoc(s);
    const SyntaxNode* block = s.child("body");
    if (block == nullptr) return;
    // Statements between the case label and the target run in order.
    std::size_t start = 0;
    for (std::size_t i = 0; i < block->children.size(); ++i) {
      const auto& c = block->children[i];
      if (c.kind == "switch_label") start = i + 1;
      if (contains(c, target)) break;
    }
    for (std::size_t i = start; i < block->children.size(); ++i) {
      const auto& c = block->children[i];
      if (contains(c, target)) {
        run_to(c, target);
        return;
      }
      if (c.kind != "switch_label") exec(c);
    }
    return;
  }
  if (k == "synchronized_statement" || k == "labeled_statement") {
    for (const auto& c : s.children) {
      if (contains(c, target)) {
        run_to(c, target);
        return;
      }
      if (c.kind == "parenthesized_expression") eval(c);
    }
    return;
  }
  // Expression statements, declarations, returns: the target is evaluated by the caller.
}

void Interp::bind_params_external(const SyntaxNode* container) {
  const SyntaxNode* ps = container->child("parameters");
  if (ps == nullptr) return;
  auto bind = [&](const SyntaxNode& at, std::string_view name) {
    std::string n(name);
    st_.locals[n] = residual(Residual::kExternalInput,
                             {step(rule::kParameter, n, at, "EXTERNAL_INPUT")});
  };
  if (ps->kind == "identifier") {
    bind(*ps, ps->text);
    return;
  }
  for (const auto& p : ps->children) {
    if (p.kind == "identifier") {
      bind(p, p.text);
    } else if (p.kind == "formal_parameter") {
      if (const SyntaxNode* n = p.child("name")) bind(p, n->text);
    } else if (p.kind == "spread_parameter") {
      if (const SyntaxNode* d = p.first_child_of_kind("variable_declarator")) {
        if (const SyntaxNode* n = d->child("name")) bind(p, n->text);
      }
    }
  }
}

ValSet Interp::eval_in_context(const SyntaxNode* container, const SyntaxNode& target,
                               const SyntaxNode* cls, std::optional<int> self, int depth) {
  Frame f;
  f.cls = cls;
  f.method = container;
  f.self = self;
  f.depth = depth;
  Frame* saved_frame = frame_;
  auto saved_locals = std::move(st_.locals);
  st_.locals.clear();
  frame_ = &f;

  // A lambda sees the locals of the code around it up to its own position.
  std::vector<const SyntaxNode*> chain{container};
  while (chain.back()->kind == "lambda_expression") {
    const SyntaxNode* outer =
        enclosing(chain.back(), {"method_declaration", "constructor_declaration",
                                         "lambda_expression", "static_initializer"});
    if (outer == nullptr) break;
    chain.push_back(outer);
  }
  bool pushed = false;
  if (std::find(call_stack_.begin(), call_stack_.end(), chain.back()) == call_stack_.end()) {
    call_stack_.push_back(chain.back());
    pushed = true;
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const SyntaxNode* c = *it;
    const SyntaxNode& stop = it + 1 == chain.rend() ? target : **(it + 1);
    bind_params_external(c);
    const SyntaxNode* body = c->kind == "field_declaration" ? nullptr : body_of(c);
    if (body && contains(*body, stop)) run_to(*body, stop);
  }
  if (exhausted_) {
    // The prefix ran out of budget. Give up on its state and evaluate the target alone.
    havoc_everything();
    exhausted_ = false;
    steps_used_ = 0;
  }
  ValSet v = eval(target);
  if (pushed) call_stack_.pop_back();
  frame_ = saved_frame;
  st_.locals = std::move(saved_locals);
  return v;
}

}  // namespace cryptolens::detail
