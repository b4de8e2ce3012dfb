#include <algorithm>
#include <cctype>
#include <charconv>

#include "resolve_interp.h"

namespace cryptolens::detail {

namespace {

std::optional<IntV> parse_int_literal(std::string_view text, std::string_view kind) {
  std::string digits;
  char type = 'I';
  for (char c : text) {
    if (c == '_') continue;
    if (c == 'l' || c == 'L') {
      type = 'J';
      continue;
    }
    digits.push_back(c);
  }
  int base = 10;
  std::string_view body = digits;
  if (kind == "hex_integer_literal") {
    base = 16;
    body.remove_prefix(2);
  } else if (kind == "binary_integer_literal") {
    base = 2;
    body.remove_prefix(2);
  } else if (kind == "octal_integer_literal") {
    base = 8;
  }
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v, base);
  if (ec != std::errc() || p != body.data() + body.size()) {
    return std::nullopt;
  }
  return make_int(static_cast<std::int64_t>(v), type);
}

// Declared type of a parameter or local named `name` inside `scope`.
std::optional<std::string> declared_type_of(const SyntaxNode& scope, std::string_view name) {
  std::optional<std::string> out;
  scope.walk([&](const SyntaxNode& d) {
    if (out) return;
    if (d.kind == "formal_parameter") {
      const SyntaxNode* n = d.child("name");
      const SyntaxNode* t = d.child("type");
      if (n && t && n->text == name) out = std::string(t->text);
    } else if (d.kind == "local_variable_declaration") {
      const SyntaxNode* t = d.child("type");
      for (const SyntaxNode* decl : d.children_with_field("declarator")) {
        const SyntaxNode* n = decl->child("name");
        if (n && t && n->text == name) out = std::string(t->text);
      }
    }
  });
  if (out) {
    if (auto d = out->rfind('.'); d != std::string::npos) out = out->substr(d + 1);
  }
  return out;
}

bool is_numeric(const Value& v) {
  auto* i = std::get_if<IntV>(&v);
  return i != nullptr && i->t != 'Z';
}

std::optional<Value> arith(std::string_view op, const IntV& a, const IntV& b) {
  char t = (a.t == 'J' || b.t == 'J') ? 'J' : 'I';
  std::int64_t x = a.v, y = b.v;
  if (op == "+") return make_int(x + y, t);
  if (op == "-") return make_int(x - y, t);
  if (op == "*") return make_int(x * y, t);
  if (op == "/") return y == 0 ? std::nullopt : std::optional<Value>(make_int(x / y, t));
  if (op == "%") return y == 0 ? std::nullopt : std::optional<Value>(make_int(x % y, t));
  if (op == "&") return make_int(x & y, t);
  if (op == "|") return make_int(x | y, t);
  if (op == "^") return make_int(x ^ y, t);
  int mask = t == 'J' ? 63 : 31;
  if (op == "<<") return make_int(x << (y & mask), t);
  if (op == ">>") return make_int(x >> (y & mask), t);
  if (op == ">>>") {
    std::uint64_t ux = t == 'J' ? static_cast<std::uint64_t>(x)
                                : static_cast<std::uint32_t>(static_cast<std::int32_t>(x));
    return make_int(static_cast<std::int64_t>(ux >> (y & mask)), t);
  }
  if (op == "<") return make_int(x < y, 'Z');
  if (op == "<=") return make_int(x <= y, 'Z');
  if (op == ">") return make_int(x > y, 'Z');
  if (op == ">=") return make_int(x >= y, 'Z');
  if (op == "==") return make_int(x == y, 'Z');
  if (op == "!=") return make_int(x != y, 'Z');
  return std::nullopt;
}

}  // namespace

ValSet Interp::eval(const SyntaxNode& n) {
  if (!tick()) {
    return residual(Residual::kDepthExceeded);
  }
  const std::string& k = n.kind;
  if (k == "string_literal") {
    std::string s = decode_java_literal(n.text);
    return one(StrV{s}, {step(rule::kLiteral, {}, n, s)});
  }
  if (k == "character_literal") {
    std::string s = decode_java_literal(n.text);
    std::uint32_t cp = s.empty() ? 0 : static_cast<unsigned char>(s[0]);
    // Multi-byte UTF-8 back to a UTF-16 code unit (BMP only).
    if (cp >= 0xE0 && s.size() >= 3) {
      cp = ((cp & 0x0F) << 12) | ((s[1] & 0x3F) << 6) | (s[2] & 0x3F);
    } else if (cp >= 0xC0 && s.size() >= 2) {
      cp = ((cp & 0x1F) << 6) | (s[1] & 0x3F);
    }
    return one(make_int(cp, 'C'));
  }
  if (k == "decimal_integer_literal" || k == "hex_integer_literal" ||
      k == "octal_integer_literal" || k == "binary_integer_literal") {
    if (auto v = parse_int_literal(n.text, k)) return one(*v);
    return residual(Residual::kUnknown);
  }
  if (k == "true") return one(make_int(1, 'Z'));
  if (k == "false") return one(make_int(0, 'Z'));
  if (k == "null_literal") return one(NullV{});
  if (k == "identifier") return eval_identifier(n);
  if (k == "parenthesized_expression") {
    return n.children.empty() ? residual(Residual::kUnknown) : eval(n.children.front());
  }
  if (k == "binary_expression") return eval_binary(n);
  if (k == "unary_expression") return eval_unary(n);
  if (k == "cast_expression") return eval_cast(n);
  if (k == "ternary_expression") return eval_ternary(n);
  if (k == "assignment_expression") return eval_assignment(n);
  if (k == "update_expression") return eval_update(n);
  if (k == "field_access") return eval_field_access(n);
  if (k == "array_access") return eval_array_access(n);
  if (k == "array_creation_expression") return eval_array_creation(n);
  if (k == "array_initializer") return eval_array_initializer(n, 'O');
  if (k == "object_creation_expression") return eval_object_creation(n);
  if (k == "method_invocation") return eval_invocation(n);
  if (k == "this") {
    if (frame_ && frame_->self) return one(RefV{*frame_->self});
    return residual(Residual::kUnknown);
  }
  return residual(Residual::kUnknown);
}

ValSet Interp::eval_identifier(const SyntaxNode& n) {
  std::string name(n.text);
  if (auto it = st_.locals.find(name); it != st_.locals.end()) {
    ValSet v = it->second;
    prov_merge(v.prov, {step(rule::kLocal, name, n, render(v))});
    return v;
  }
  const SyntaxNode* cls = frame_ ? frame_->cls : nullptr;
  if (frame_ && frame_->self) {
    const HeapObj& self = st_.heap[*frame_->self];
    if (auto it = self.fields.find(name); it != self.fields.end()) {
      ValSet v = it->second;
      prov_merge(v.prov, {step(rule::kField, name, n, render(v))});
      return v;
    }
  }
  for (const SyntaxNode* c : lookup_chain(cls)) {
    auto [decl, declarator] = find_field(c, name);
    if (decl != nullptr) {
      const SyntaxNode* cname = c->child("name");
      std::string key = (cname ? std::string(cname->text) : std::string("?")) + "." + name;
      if (auto it = st_.statics.find(key); it != st_.statics.end()) {
        ValSet v = it->second;
        prov_merge(v.prov, {step(rule::kField, name, n, render(v))});
        return v;
      }
      return resolve_field(c, decl, declarator, n);
    }
    if (const SyntaxNode* ec = find_enum_constant(c, name)) {
      return enum_constant(c, ec, n);
    }
  }
  if (const SyntaxNode* c = find_class(name)) {
    return one(ClassV{c, name});
  }
  if (!name.empty() && std::isupper(static_cast<unsigned char>(name[0]))) {
    return one(ClassV{nullptr, name});
  }
  return residual(Residual::kUnknown);
}

ValSet Interp::eval_binary(const SyntaxNode& n) {
  const SyntaxNode* l = n.child("left");
  const SyntaxNode* r = n.child("right");
  if (l == nullptr || r == nullptr) return residual(Residual::kUnknown);
  const std::string& op = n.op;
  if (op == "&&" || op == "||") {
    ValSet a = eval(*l);
    auto ab = as_bool(a);
    bool is_and = op == "&&";
    if (ab && *ab != is_and) {
      return a;  // short circuit
    }
    ValSet b = eval(*r);
    if (ab) return b;
    auto bb = as_bool(b);
    if (bb && *bb != is_and) {
      ValSet out = one(make_int(is_and ? 0 : 1, 'Z'), b.prov);
      prov_merge(out.prov, a.prov);
      return out;
    }
    ValSet out = residual(Residual::kUnknown, a.prov);
    prov_merge(out.prov, b.prov);
    return out;
  }
  ValSet a = eval(*l);
  ValSet b = eval(*r);
  bool concat = false;
  bool separator = false;
  ValSet out = map2(a, b, [&](const Value& x, const Value& y) -> std::optional<Value> {
    if (op == "+" && (std::holds_alternative<StrV>(x) || std::holds_alternative<StrV>(y))) {
      auto sx = java_string(x);
      auto sy = java_string(y);
      if (!sx || !sy) return std::nullopt;
      concat = true;
      if (*sx == "/" || *sy == "/") separator = true;
      return StrV{*sx + *sy};
    }
    auto* ix = std::get_if<IntV>(&x);
    auto* iy = std::get_if<IntV>(&y);
    if (ix && iy) {
      if (ix->t == 'Z' && iy->t == 'Z') {
        if (op == "&" || op == "^" || op == "|" || op == "==" || op == "!=") {
          bool p = ix->v, q = iy->v;
          bool res = op == "&" ? (p && q) : op == "|" ? (p || q) : op == "^" ? (p != q)
                   : op == "==" ? (p == q) : (p != q);
          return make_int(res, 'Z');
        }
        return std::nullopt;
      }
      if (is_numeric(x) && is_numeric(y)) return arith(op, *ix, *iy);
      return std::nullopt;
    }
    if (op == "==" || op == "!=") {
      bool eq;
      if (std::holds_alternative<NullV>(x) || std::holds_alternative<NullV>(y)) {
        eq = std::holds_alternative<NullV>(x) && std::holds_alternative<NullV>(y);
      } else if (std::holds_alternative<StrV>(x) && std::holds_alternative<StrV>(y)) {
        eq = std::get<StrV>(x).s == std::get<StrV>(y).s;
      } else if (std::holds_alternative<RefV>(x) && std::holds_alternative<RefV>(y)) {
        eq = std::get<RefV>(x).id == std::get<RefV>(y).id;
      } else {
        return std::nullopt;
      }
      return make_int(op == "==" ? eq : !eq, 'Z');
    }
    return std::nullopt;
  });
  if (op == "+") {
    bool string_side = std::any_of(a.vals.begin(), a.vals.end(),
                                   [](const Value& v) { return std::holds_alternative<StrV>(v); }) ||
                       std::any_of(b.vals.begin(), b.vals.end(),
                                   [](const Value& v) { return std::holds_alternative<StrV>(v); });
    if (string_side || concat) {
      prov_merge(out.prov, {step(rule::kConcat, "+", n, render(out))});
      if (separator) prov_merge(out.prov, {step(rule::kSeparator, "/", n, "/")});
      // A concatenation with an unresolvable side keeps its concrete pieces.
      const ValSet* known = nullptr;
      if (a.vals.empty() && !b.vals.empty()) known = &b;
      if (b.vals.empty() && !a.vals.empty()) known = &a;
      if (known != nullptr) {
        for (const auto& v : known->vals) {
          if (auto s = java_string(v)) out.frags.push_back(*s);
        }
      }
      for (const ValSet* side : {&a, &b}) {
        for (const auto& f : side->frags) {
          if (out.frags.size() < static_cast<std::size_t>(budget_.max_candidates)) {
            out.frags.push_back(f);
          }
        }
      }
    }
  }
  if (op == "^" && !out.vals.empty()) {
    prov_merge(out.prov, {step(rule::kXor, "^", n, render(out))});
  }
  return out;
}

ValSet Interp::eval_unary(const SyntaxNode& n) {
  const SyntaxNode* operand = n.child("operand");
  if (operand == nullptr) return residual(Residual::kUnknown);
  ValSet a = eval(*operand);
  const std::string op = n.op;
  return map1(a, [&](const Value& v) -> std::optional<Value> {
    auto* i = std::get_if<IntV>(&v);
    if (i == nullptr) return std::nullopt;
    if (op == "!") {
      if (i->t != 'Z') return std::nullopt;
      return make_int(!i->v, 'Z');
    }
    if (i->t == 'Z') return std::nullopt;
    char t = i->t == 'J' ? 'J' : 'I';
    if (op == "-") return make_int(-i->v, t);
    if (op == "+") return make_int(i->v, t);
    if (op == "~") return make_int(~i->v, t);
    return std::nullopt;
  });
}

ValSet Interp::eval_cast(const SyntaxNode& n) {
  const SyntaxNode* type = n.child("type");
  const SyntaxNode* value = n.child("value");
  if (value == nullptr) return residual(Residual::kUnknown);
  ValSet v = eval(*value);
  char t = type ? prim_type(type->text) : 0;
  if (t == 0 || t == 'Z') {
    return v;  // reference casts do not change the value
  }
  return map1(v, [&](const Value& x) -> std::optional<Value> {
    auto* i = std::get_if<IntV>(&x);
    if (i == nullptr || i->t == 'Z') return std::nullopt;
    return make_int(i->v, t);
  });
}

ValSet Interp::eval_ternary(const SyntaxNode& n) {
  const SyntaxNode* c = n.child("condition");
  const SyntaxNode* a = n.child("consequence");
  const SyntaxNode* b = n.child("alternative");
  if (c == nullptr || a == nullptr || b == nullptr) return residual(Residual::kUnknown);
  ValSet cond = eval(*c);
  if (auto decided = as_bool(cond)) {
    return eval(*decided ? *a : *b);
  }
  // Undecidable condition: both branches are possible.
  ValSet out = eval(*a);
  merge_into(out, eval(*b));
  prov_merge(out.prov, {step(rule::kTernary, "?:", n, render(out))});
  return out;
}

ValSet Interp::eval_assignment(const SyntaxNode& n) {
  const SyntaxNode* left = n.child("left");
  const SyntaxNode* right = n.child("right");
  if (left == nullptr || right == nullptr) return residual(Residual::kUnknown);
  ValSet value;
  if (n.op == "=" || n.op.empty()) {
    value = eval(*right);
  } else {
    std::string op = n.op.substr(0, n.op.size() - 1);
    ValSet cur = eval(*left);
    ValSet rhs = eval(*right);
    char lt = 0;
    if (cur.vals.size() == 1) {
      if (auto* i = std::get_if<IntV>(&cur.vals.front())) lt = i->t;
    }
    value = map2(cur, rhs, [&](const Value& x, const Value& y) -> std::optional<Value> {
      if (op == "+" && std::holds_alternative<StrV>(x)) {
        auto sy = java_string(y);
        if (!sy) return std::nullopt;
        return StrV{std::get<StrV>(x).s + *sy};
      }
      auto* ix = std::get_if<IntV>(&x);
      auto* iy = std::get_if<IntV>(&y);
      if (!ix || !iy) return std::nullopt;
      if (ix->t == 'Z' && iy->t == 'Z') {
        if (op == "&") return make_int(ix->v & iy->v, 'Z');
        if (op == "|") return make_int(ix->v | iy->v, 'Z');
        if (op == "^") return make_int(ix->v ^ iy->v, 'Z');
        return std::nullopt;
      }
      auto r = arith(op, *ix, *iy);
      // Compound assignment narrows back to the left-hand type.
      if (r && lt) {
        if (auto* ri = std::get_if<IntV>(&*r)) return make_int(ri->v, lt);
      }
      return r;
    });
    if (op == "+") prov_merge(value.prov, {step(rule::kConcat, "+=", n, render(value))});
    if (op == "^") prov_merge(value.prov, {step(rule::kXor, "^=", n, render(value))});
  }
  store(*left, value);
  return value;
}

ValSet Interp::eval_update(const SyntaxNode& n) {
  if (n.children.empty()) return residual(Residual::kUnknown);
  const SyntaxNode& target = n.children.front();
  bool prefix = target.span.start > n.span.start;
  ValSet old = eval(target);
  std::int64_t delta = n.op == "--" ? -1 : 1;
  ValSet updated = map1(old, [&](const Value& v) -> std::optional<Value> {
    auto* i = std::get_if<IntV>(&v);
    if (i == nullptr || i->t == 'Z') return std::nullopt;
    return make_int(i->v + delta, i->t);
  });
  store(target, updated);
  return prefix ? updated : old;
}

void Interp::store(const SyntaxNode& target_in, const ValSet& value) {
  const SyntaxNode* target = unwrap_parens(&target_in);
  if (target->kind == "identifier") {
    std::string name(target->text);
    if (auto it = st_.locals.find(name); it != st_.locals.end()) {
      it->second = value;
      return;
    }
    const SyntaxNode* cls = frame_ ? frame_->cls : nullptr;
    for (const SyntaxNode* c : lookup_chain(cls)) {
      auto [decl, declarator] = find_field(c, name);
      if (decl == nullptr) continue;
      if (has_modifier(*decl, "static") || !frame_ || !frame_->self || c != cls) {
        const SyntaxNode* cname = c->child("name");
        st_.statics[(cname ? std::string(cname->text) : std::string("?")) + "." + name] = value;
      } else {
        st_.heap[*frame_->self].fields[name] = value;
      }
      return;
    }
    // Undeclared name: keep it as a local so later reads see the write.
    st_.locals[name] = value;
    return;
  }
  if (target->kind == "field_access") {
    const SyntaxNode* object = target->child("object");
    const SyntaxNode* field = target->child("field");
    if (object == nullptr || field == nullptr) return;
    std::string name(field->text);
    ValSet objv = eval(*object);
    bool strong = objv.concrete_single();
    for (const auto& v : objv.vals) {
      if (HeapObj* o = obj(v); o && o->kind == HeapObj::Kind::kInstance) {
        if (strong) {
          o->fields[name] = value;
        } else {
          merge_into(o->fields[name], value);
        }
      } else if (auto* c = std::get_if<ClassV>(&v); c && c->decl) {
        st_.statics[c->name + "." + name] = value;
      }
    }
    return;
  }
  if (target->kind == "array_access") {
    const SyntaxNode* array = target->child("array");
    const SyntaxNode* index = target->child("index");
    if (array == nullptr || index == nullptr) return;
    ValSet arr = eval(*array);
    ValSet idx = eval(*index);
    auto i = single_int(idx);
    bool strong = arr.concrete_single() && i.has_value();
    for (const auto& v : arr.vals) {
      HeapObj* o = obj(v);
      if (o == nullptr || o->kind != HeapObj::Kind::kArray) continue;
      if (!strong || *i < 0 || *i >= static_cast<std::int64_t>(o->elems.size())) {
        o->havoc = true;
        continue;
      }
      ValSet stored = value;
      if (o->elem_type != 'O') {
        stored = map1(value, [&](const Value& x) -> std::optional<Value> {
          auto* iv = std::get_if<IntV>(&x);
          if (iv == nullptr) return std::nullopt;
          return make_int(iv->v, o->elem_type);
        });
      }
      o->elems[static_cast<std::size_t>(*i)] = stored;
    }
  }
}

// obj.name where obj is a class, an instance, an enum constant or an array.
ValSet Interp::read_member(const ValSet& object, std::string_view name, const SyntaxNode& at) {
  ValSet out;
  out.res = object.res;
  out.prov = object.prov;
  for (const auto& v : object.vals) {
    if (auto* c = std::get_if<ClassV>(&v)) {
      if (c->decl != nullptr) {
        if (const SyntaxNode* ec = find_enum_constant(c->decl, name)) {
          merge_into(out, enum_constant(c->decl, ec, at));
          continue;
        }
        std::string key = c->name + "." + std::string(name);
        if (auto it = st_.statics.find(key); it != st_.statics.end()) {
          merge_into(out, it->second);
          continue;
        }
        bool found = false;
        for (const SyntaxNode* k : lookup_chain(c->decl)) {
          auto [decl, declarator] = find_field(k, name);
          if (decl) {
            merge_into(out, resolve_field(k, decl, declarator, at));
            found = true;
            break;
          }
        }
        if (found) continue;
        if (const SyntaxNode* inner = find_class(name); inner && lexical_outer(inner) == c->decl) {
          add_val(out, ClassV{inner, std::string(name)});
          continue;
        }
        out.res.insert(Residual::kUnknown);
        continue;
      }
      // Nested library classes like Build.VERSION stay class references.
      if (!name.empty() && std::isupper(static_cast<unsigned char>(name[0])) &&
          name.find('_') == std::string_view::npos &&
          !std::all_of(name.begin(), name.end(), [](char ch) {
            return std::isupper(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch));
          })) {
        add_val(out, ClassV{nullptr, std::string(name)});
      } else {
        out.res.insert(Residual::kUnknown);
      }
      continue;
    }
    if (HeapObj* o = obj(v)) {
      if (o->kind == HeapObj::Kind::kArray && name == "length") {
        if (o->havoc) {
          out.res.insert(Residual::kUnknown);
        } else {
          add_val(out, make_int(static_cast<std::int64_t>(o->elems.size()), 'I'));
        }
        continue;
      }
      if (o->kind == HeapObj::Kind::kInstance) {
        std::string key(name);
        if (auto it = o->fields.find(key); it != o->fields.end()) {
          merge_into(out, it->second);
          continue;
        }
        const SyntaxNode* cls = o->cls;
        bool found = false;
        for (const SyntaxNode* k : lookup_chain(cls)) {
          auto [decl, declarator] = find_field(k, name);
          if (decl) {
            merge_into(out, resolve_field(k, decl, declarator, at));
            found = true;
            break;
          }
        }
        if (!found) out.res.insert(Residual::kUnknown);
        continue;
      }
    }
    out.res.insert(Residual::kUnknown);
  }
  if (out.vals.empty() && out.res.empty()) out.res.insert(Residual::kUnknown);
  return out;
}

ValSet Interp::eval_field_access(const SyntaxNode& n) {
  const SyntaxNode* object = n.child("object");
  const SyntaxNode* field = n.child("field");
  if (object == nullptr || field == nullptr) return residual(Residual::kUnknown);
  if (object->kind == "this" || object->kind == "super") {
    if (frame_ && frame_->self) {
      ValSet v = read_member(one(RefV{*frame_->self}), field->text, n);
      prov_merge(v.prov, {step(rule::kThisField, std::string(field->text), n, render(v))});
      return v;
    }
    // Static context: fall back to the declaration.
    ValSet v = eval_identifier(*field);
    prov_merge(v.prov, {step(rule::kThisField, std::string(field->text), n, render(v))});
    return v;
  }
  ValSet objv = eval(*object);
  if (objv.vals.empty() && !field->text.empty() &&
      std::isupper(static_cast<unsigned char>(field->text[0]))) {
    // Package-qualified class name such as android.util.Base64.
    bool dotted = std::all_of(object->text.begin(), object->text.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_';
    });
    if (dotted && std::islower(static_cast<unsigned char>(object->text[0]))) {
      if (const SyntaxNode* c = find_class(field->text)) return one(ClassV{c, std::string(field->text)});
      return one(ClassV{nullptr, std::string(field->text)});
    }
  }
  if (objv.vals.empty() && object->kind == "identifier" && frame_ && frame_->method) {
    // A value of a unit enum type is one of its constants, whatever its origin.
    const SyntaxNode* en = nullptr;
    if (auto t = declared_type_of(*frame_->method, object->text)) {
      if (const SyntaxNode* c = find_class(*t); c && c->kind == "enum_declaration") en = c;
    }
    if (en != nullptr) {
      ValSet all;
      all.prov = objv.prov;
      if (const SyntaxNode* body = en->child("body")) {
        for (const auto& ec : body->children) {
          if (ec.kind != "enum_constant") continue;
          merge_into(all, enum_constant(en, &ec, n));
        }
      }
      if (!all.vals.empty()) return read_member(all, field->text, n);
    }
  }
  return read_member(objv, field->text, n);
}

ValSet Interp::eval_array_access(const SyntaxNode& n) {
  const SyntaxNode* array = n.child("array");
  const SyntaxNode* index = n.child("index");
  if (array == nullptr || index == nullptr) return residual(Residual::kUnknown);
  ValSet arr = eval(*array);
  ValSet idx = eval(*index);
  ValSet out;
  out.res = arr.res;
  out.res.insert(idx.res.begin(), idx.res.end());
  out.prov = arr.prov;
  prov_merge(out.prov, idx.prov);
  for (const auto& a : arr.vals) {
    const HeapObj* o = obj(a);
    if (o == nullptr || o->kind != HeapObj::Kind::kArray) {
      out.res.insert(Residual::kUnknown);
      continue;
    }
    prov_merge(out.prov, o->prov);
    for (const auto& iv : idx.vals) {
      auto* i = std::get_if<IntV>(&iv);
      if (o->havoc || i == nullptr || i->v < 0 ||
          i->v >= static_cast<std::int64_t>(o->elems.size())) {
        out.res.insert(Residual::kUnknown);
        continue;
      }
      merge_into(out, o->elems[static_cast<std::size_t>(i->v)]);
    }
  }
  if (out.vals.empty() && out.res.empty()) out.res.insert(Residual::kUnknown);
  return out;
}

ValSet Interp::eval_array_initializer(const SyntaxNode& n, char elem_type) {
  HeapObj o;
  o.kind = HeapObj::Kind::kArray;
  o.elem_type = elem_type;
  for (const auto& c : n.children) {
    ValSet e = eval(c);
    if (elem_type != 'O') {
      e = map1(e, [&](const Value& x) -> std::optional<Value> {
        auto* i = std::get_if<IntV>(&x);
        if (i == nullptr) return std::nullopt;
        return make_int(i->v, elem_type);
      });
    }
    o.elems.push_back(std::move(e));
  }
  // Primitive element data is constant source material for whatever it decodes to.
  if (elem_type != 'O' && !o.elems.empty()) {
    o.prov = {step(rule::kLiteral, std::string(1, elem_type) + "[]", n)};
  }
  return one(RefV{new_obj(std::move(o))});
}

ValSet Interp::eval_array_creation(const SyntaxNode& n) {
  const SyntaxNode* type = n.child("type");
  char et = type ? elem_type_of(type->text) : 'O';
  auto dims = n.children_with_field("dimensions");
  std::vector<const SyntaxNode*> sized;
  std::size_t empty_dims = 0;
  for (const SyntaxNode* d : dims) {
    if (d->kind == "dimensions_expr") {
      sized.push_back(d);
    } else {
      empty_dims += std::count(d->text.begin(), d->text.end(), '[');
    }
  }
  if (sized.size() + empty_dims > 1) {
    return residual(Residual::kUnknown);  // multi-dimensional arrays are not modelled
  }
  if (const SyntaxNode* init = n.child("value")) {
    return eval_array_initializer(*init, et);
  }
  if (sized.size() != 1 || sized[0]->children.empty()) return residual(Residual::kUnknown);
  ValSet len = eval(sized[0]->children.front());
  auto count = single_int(len);
  HeapObj o;
  o.kind = HeapObj::Kind::kArray;
  o.elem_type = et;
  o.prov = len.prov;
  if (!count || *count < 0 || *count > (1 << 16)) {
    o.havoc = true;
  } else {
    ValSet zero = et == 'O' ? one(NullV{}) : one(make_int(0, et));
    o.elems.assign(static_cast<std::size_t>(*count), zero);
  }
  return one(RefV{new_obj(std::move(o))});
}

ValSet Interp::resolve_field(const SyntaxNode* cls, const SyntaxNode* field_decl,
                             const SyntaxNode* declarator, const SyntaxNode& at) {
  std::string name(declarator->child("name")->text);
  bool is_static = has_modifier(*field_decl, "static") || field_decl->kind == "constant_declaration";
  bool is_final = has_modifier(*field_decl, "final") || field_decl->kind == "constant_declaration";
  std::string_view rule_name = is_static && is_final ? rule::kStaticFinal : rule::kField;
  if (resolving_fields_.count(declarator)) {
    return residual(Residual::kUnknown);
  }
  resolving_fields_.insert(declarator);
  const SyntaxNode* init = declarator->child("value");
  const SyntaxNode* type = field_decl->child("type");
  char et = type ? elem_type_of(type->text) : 'O';

  auto eval_init = [&]() {
    Frame f;
    f.cls = cls;
    f.depth = frame_ ? frame_->depth : 0;
    Frame* saved_frame = frame_;
    auto saved_locals = std::move(st_.locals);
    st_.locals.clear();
    frame_ = &f;
    ValSet v = init->kind == "array_initializer" ? eval_array_initializer(*init, et) : eval(*init);
    frame_ = saved_frame;
    st_.locals = std::move(saved_locals);
    return v;
  };

  ValSet out;
  if (init != nullptr && is_final) {
    out = eval_init();
  } else {
    if (init != nullptr) out = eval_init();
    // Assignments elsewhere in the class, each evaluated in its own method.
    bool any = init != nullptr;
    const SyntaxNode* cname = cls->child("name");
    int depth = frame_ ? frame_->depth : 0;
    cls->walk([&](const SyntaxNode& a) {
      if (a.kind != "assignment_expression" || a.op != "=") return;
      const SyntaxNode* left = unwrap_parens(a.child("left"));
      if (left == nullptr) return;
      bool match = false;
      if (left->kind == "identifier" && left->text == name) {
        match = true;
      } else if (left->kind == "field_access") {
        const SyntaxNode* o = left->child("object");
        const SyntaxNode* f = left->child("field");
        match = f && f->text == name && o &&
                (o->kind == "this" || (cname && o->text == cname->text));
      }
      if (!match) return;
      const SyntaxNode* container = enclosing(&a, {"method_declaration", "constructor_declaration",
                                                    "static_initializer", "lambda_expression"});
      if (container == nullptr) return;
      // A local or parameter of the same name shadows the field.
      bool shadowed = false;
      if (left->kind == "identifier") {
        container->walk([&](const SyntaxNode& d) {
          if ((d.kind == "variable_declarator" || d.kind == "formal_parameter") &&
              d.child("name") && d.child("name")->text == name) {
            shadowed = true;
          }
        });
      }
      if (shadowed) return;
      any = true;
      if (depth >= budget_.max_indirection) {
        ValSet ex = residual(Residual::kDepthExceeded,
                             {step(rule::kDepthExceeded, name, a, "hop limit")});
        merge_into(out, ex);
        return;
      }
      const SyntaxNode* rhs = a.child("right");
      if (rhs == nullptr) return;
      merge_into(out, eval_in_context(container, *rhs, class_of(container), std::nullopt,
                                      depth + 1));
    });
    if (!any) {
      out = residual(Residual::kUnknown);
    }
  }
  resolving_fields_.erase(declarator);
  prov_merge(out.prov, {step(rule_name, name, at, render(out))});
  return out;
}

ValSet Interp::enum_constant(const SyntaxNode* cls, const SyntaxNode* constant,
                             const SyntaxNode& at) {
  std::string name(constant->child("name")->text);
  int st = step(rule::kEnumConstant, name, at, name);
  if (auto it = st_.enum_cache.find(constant); it != st_.enum_cache.end()) {
    return one(RefV{it->second}, {st});
  }
  HeapObj o;
  o.kind = HeapObj::Kind::kInstance;
  o.cls = cls;
  o.enum_name = name;
  int id = new_obj(std::move(o));
  st_.enum_cache[constant] = id;
  std::vector<ValSet> args;
  if (const SyntaxNode* al = constant->child("arguments")) {
    for (const auto& a : al->children) args.push_back(eval(a));
  }
  for (const SyntaxNode* m : members(cls)) {
    if (m->kind != "constructor_declaration") continue;
    std::size_t arity = 0;
    if (const SyntaxNode* ps = m->child("parameters")) {
      for (const auto& p : ps->children) {
        if (p.kind == "formal_parameter" || p.kind == "spread_parameter") ++arity;
      }
    }
    if (arity != args.size()) continue;
    call_user(m, cls, id, args, at, /*hop=*/false);
    break;
  }
  return one(RefV{id}, {st});
}

}  // namespace cryptolens::detail
