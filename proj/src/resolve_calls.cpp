#include <algorithm>
#include <cctype>
#include <regex>

#include "cryptolens/codec.h"
#include "resolve_interp.h"

namespace cryptolens::detail {

namespace {

std::string_view simple_type(std::string_view t) {
  if (auto lt = t.find('<'); lt != std::string_view::npos) t = t.substr(0, lt);
  if (auto d = t.rfind('.'); d != std::string_view::npos) t = t.substr(d + 1);
  return t;
}

bool one_of(std::string_view s, std::initializer_list<std::string_view> names) {
  return std::find(names.begin(), names.end(), s) != names.end();
}

bool is_network_call(std::string_view name) {
  return one_of(name, {"readLine", "read", "readUTF", "readFully", "readObject", "readBytes",
                       "getInputStream", "openStream", "openConnection", "getResponseMessage",
                       "getHeaderField", "receive", "recv", "body", "readText"});
}

// Library calls that neither mutate their arguments nor feed a value.
bool is_side_effect_free(std::string_view receiver, std::string_view name) {
  return receiver == "Log" || receiver == "out" || receiver == "err" ||
         one_of(name, {"println", "print", "printf", "printStackTrace", "equals", "hashCode",
                       "toString", "length", "isEmpty"});
}

std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string ascii_upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  if (from.empty()) {
    // Java inserts the replacement around every char.
    std::string out = to;
    for (char c : s) {
      out.push_back(c);
      out += to;
    }
    return out;
  }
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

const SyntaxNode* Interp::pick_overload(const std::vector<const SyntaxNode*>& methods,
                                        const std::vector<ValSet>& args) const {
  const SyntaxNode* best = nullptr;
  int best_score = -1;
  for (const SyntaxNode* m : methods) {
    int score = 0;
    std::size_t i = 0;
    if (const SyntaxNode* ps = m->child("parameters")) {
      for (const auto& p : ps->children) {
        if (p.kind != "formal_parameter" || i >= args.size()) continue;
        const SyntaxNode* t = p.child("type");
        std::string_view tt = t ? t->text : std::string_view{};
        const ValSet& a = args[i++];
        if (a.vals.empty()) continue;
        const Value& v = a.vals.front();
        bool array = tt.find('[') != std::string_view::npos;
        if (std::holds_alternative<StrV>(v)) {
          score += (tt == "String" || tt == "CharSequence" || tt == "Object") ? 2 : -2;
        } else if (std::holds_alternative<IntV>(v)) {
          score += (!array && std::islower(static_cast<unsigned char>(tt.empty() ? 'x' : tt[0])))
                       ? 2 : -2;
        } else if (const HeapObj* o = obj(v); o && o->kind == HeapObj::Kind::kArray) {
          score += array ? 2 : -2;
        }
      }
    }
    if (score > best_score) {
      best = m;
      best_score = score;
    }
  }
  return best;
}

ValSet Interp::call_user(const SyntaxNode* method, const SyntaxNode* cls, std::optional<int> self,
                         const std::vector<ValSet>& args, const SyntaxNode& at, bool hop) {
  const SyntaxNode* name_node = method->child("name");
  std::string name = name_node ? std::string(name_node->text) : std::string("<init>");
  if (method->kind == "method_declaration" && has_modifier(*method, "native")) {
    return residual(Residual::kNative, {step(rule::kNativeCall, name, at, "NATIVE")});
  }
  const SyntaxNode* body = method->child("body");
  if (body == nullptr) {
    return residual(Residual::kUnknown, {step(rule::kUnresolvedCall, name, at, "no body")});
  }
  int depth = frame_ ? frame_->depth : 0;
  if (hop && depth >= budget_.max_indirection) {
    return residual(Residual::kDepthExceeded,
                    {step(rule::kDepthExceeded, name, at, "hop limit")});
  }
  if (std::count(call_stack_.begin(), call_stack_.end(), method) > 0) {
    return residual(Residual::kDepthExceeded,
                    {step(rule::kDepthExceeded, name, at, "recursion")});
  }
  Frame f;
  f.cls = cls;
  f.method = method;
  f.self = has_modifier(*method, "static") ? std::nullopt : self;
  f.depth = hop ? depth + 1 : depth;
  auto saved_locals = std::move(st_.locals);
  st_.locals.clear();
  std::size_t i = 0;
  if (const SyntaxNode* ps = method->child("parameters")) {
    for (const auto& p : ps->children) {
      if (p.kind == "formal_parameter") {
        if (const SyntaxNode* pn = p.child("name")) {
          st_.locals[std::string(pn->text)] =
              i < args.size() ? args[i] : residual(Residual::kUnknown);
        }
        ++i;
      } else if (p.kind == "spread_parameter") {
        const SyntaxNode* decl = p.first_child_of_kind("variable_declarator");
        const SyntaxNode* pn = decl ? decl->child("name") : nullptr;
        HeapObj arr;
        arr.kind = HeapObj::Kind::kArray;
        arr.elem_type = 'O';
        for (; i < args.size(); ++i) arr.elems.push_back(args[i]);
        if (pn) st_.locals[std::string(pn->text)] = one(RefV{new_obj(std::move(arr))});
      }
    }
  }
  Frame* saved_frame = frame_;
  frame_ = &f;
  call_stack_.push_back(method);
  exec(*body);
  call_stack_.pop_back();
  frame_ = saved_frame;
  st_.locals = std::move(saved_locals);
  ValSet out = std::move(f.ret);
  if (exhausted_) out.res.insert(Residual::kDepthExceeded);
  if (out.vals.empty() && out.res.empty()) out.res.insert(Residual::kUnknown);
  if (hop) prov_merge(out.prov, {step(rule::kMethodInline, name, at, render(out))});
  return out;
}

ValSet Interp::new_instance(const SyntaxNode* cls, const std::vector<ValSet>& args,
                            const SyntaxNode& at) {
  HeapObj o;
  o.kind = HeapObj::Kind::kInstance;
  o.cls = cls;
  int id = new_obj(std::move(o));
  for (const SyntaxNode* m : members(cls)) {
    if (m->kind != "constructor_declaration") continue;
    std::size_t arity = 0;
    if (const SyntaxNode* ps = m->child("parameters")) {
      for (const auto& p : ps->children) {
        if (p.kind == "formal_parameter" || p.kind == "spread_parameter") ++arity;
      }
    }
    if (arity == args.size()) {
      ValSet r = call_user(m, cls, id, args, at);
      ValSet out = one(RefV{id});
      out.res = r.res;
      out.res.erase(Residual::kUnknown);
      return out;
    }
  }
  return one(RefV{id});
}

ValSet Interp::eval_object_creation(const SyntaxNode& n) {
  const SyntaxNode* type = n.child("type");
  std::string tname = type ? std::string(simple_type(type->text)) : std::string();
  std::vector<ValSet> args;
  if (const SyntaxNode* al = n.child("arguments")) {
    for (const auto& a : al->children) args.push_back(eval(a));
  }
  if (n.first_child_of_kind("class_body")) {
    return residual(Residual::kUnknown);
  }
  if (tname == "StringBuilder" || tname == "StringBuffer") {
    HeapObj o;
    o.kind = HeapObj::Kind::kBuilder;
    o.content = one(StrV{""});
    if (!args.empty()) {
      ValSet init = map1(args[0], [&](const Value& v) -> std::optional<Value> {
        if (auto* i = std::get_if<IntV>(&v); i && i->t != 'C') return StrV{""};  // capacity
        auto s = java_string(v);
        if (!s) return std::nullopt;
        return StrV{*s};
      });
      if (!(init.vals.size() == 1 && std::get<StrV>(init.vals[0]).s.empty())) {
        prov_merge(init.prov, {step(rule::kBuilderAppend, "init", n, render(init))});
      }
      o.content = init;
    }
    return one(RefV{new_obj(std::move(o))});
  }
  if (tname == "String") {
    int st = step(rule::kNewString, "String", n);
    if (args.empty()) return one(StrV{""}, {st});
    ValSet out = map1(args[0], [&](const Value& v) -> std::optional<Value> {
      if (std::holds_alternative<StrV>(v)) return v;
      if (auto b = bytes_of(v)) return StrV{*b};
      if (const HeapObj* o = obj(v); o && o->kind == HeapObj::Kind::kBuilder) {
        auto s = java_string(v);
        if (s) return StrV{*s};
      }
      return std::nullopt;
    });
    for (const auto& v : args[0].vals) {
      if (const HeapObj* o = obj(v)) {
        prov_merge(out.prov, o->prov);
        for (const auto& e : o->elems) prov_merge(out.prov, e.prov);
      }
    }
    if (args.size() == 3) {
      out = residual(Residual::kUnknown, out.prov);  // offset/length form
    }
    prov_merge(out.prov, {st});
    return out;
  }
  if (tname == "SecureRandom") {
    return one(LibV{"securerandom"}, {step(rule::kSecureRandom, tname, n)});
  }
  if (const SyntaxNode* cls = find_class(tname); cls && cls->kind == "class_declaration") {
    return new_instance(cls, args, n);
  }
  Prov p;
  for (const auto& a : args) {
    if (!is_side_effect_free(tname, "")) havoc_value(a);
  }
  p.push_back(step(rule::kUnresolvedCall, "new " + tname, n));
  return residual(Residual::kUnknown, p);
}

std::optional<ValSet> Interp::call_string(const std::string& s, std::string_view name,
                                          const std::vector<ValSet>& args,
                                          const SyntaxNode& at) {
  auto str_arg = [&](std::size_t i) -> std::optional<std::string> {
    if (i >= args.size() || !args[i].concrete_single()) return std::nullopt;
    const Value& v = args[i].vals.front();
    if (std::holds_alternative<StrV>(v)) return std::get<StrV>(v).s;
    if (auto* c = std::get_if<IntV>(&v); c && c->t == 'C') return utf8_of(static_cast<std::uint32_t>(c->v));
    return std::nullopt;
  };
  auto int_arg = [&](std::size_t i) -> std::optional<std::int64_t> {
    if (i >= args.size()) return std::nullopt;
    return single_int(args[i]);
  };
  auto str = [](std::string v) -> std::optional<Value> { return StrV{std::move(v)}; };
  auto num = [](std::int64_t v, char t = 'I') -> std::optional<Value> { return make_int(v, t); };
  std::optional<Value> r;
  bool known = true;
  auto n = args.size();
  if (name == "length" && n == 0) r = num(static_cast<std::int64_t>(s.size()));
  else if (name == "isEmpty" && n == 0) r = num(s.empty(), 'Z');
  else if (name == "charAt" && n == 1) {
    auto i = int_arg(0);
    if (i && *i >= 0 && *i < static_cast<std::int64_t>(s.size())) {
      r = num(static_cast<unsigned char>(s[static_cast<std::size_t>(*i)]), 'C');
    }
  } else if ((name == "equals" || name == "equalsIgnoreCase" || name == "contains" ||
              name == "startsWith" || name == "endsWith") && n == 1) {
    if (auto o = str_arg(0)) {
      if (name == "equals") r = num(s == *o, 'Z');
      else if (name == "equalsIgnoreCase") r = num(ascii_lower(s) == ascii_lower(*o), 'Z');
      else if (name == "contains") r = num(s.find(*o) != std::string::npos, 'Z');
      else if (name == "startsWith") r = num(s.rfind(*o, 0) == 0, 'Z');
      else r = num(s.size() >= o->size() && s.compare(s.size() - o->size(), o->size(), *o) == 0, 'Z');
    } else if (name == "equals" && n == 1 && args[0].concrete_single() &&
               std::holds_alternative<NullV>(args[0].vals.front())) {
      r = num(0, 'Z');
    }
  } else if ((name == "indexOf" || name == "lastIndexOf") && n == 1) {
    if (auto o = str_arg(0)) {
      auto p = name == "indexOf" ? s.find(*o) : s.rfind(*o);
      r = num(p == std::string::npos ? -1 : static_cast<std::int64_t>(p));
    }
  } else if (name == "replace" && n == 2) {
    auto a = str_arg(0), b = str_arg(1);
    if (a && b) r = str(replace_all(s, *a, *b));
  } else if ((name == "replaceAll" || name == "replaceFirst") && n == 2) {
    auto a = str_arg(0), b = str_arg(1);
    if (a && b) {
      try {
        std::regex re(*a);
        auto flags = name == "replaceFirst" ? std::regex_constants::format_first_only
                                            : std::regex_constants::format_default;
        r = str(std::regex_replace(s, re, *b, flags));
      } catch (const std::regex_error&) {
      }
    }
  } else if (name == "toLowerCase" && n <= 1) r = str(ascii_lower(s));
  else if (name == "toUpperCase" && n <= 1) r = str(ascii_upper(s));
  else if ((name == "trim" || name == "strip") && n == 0) {
    auto b = s.find_first_not_of(" \t\r\n\f\v");
    auto e = s.find_last_not_of(" \t\r\n\f\v");
    r = str(b == std::string::npos ? std::string() : s.substr(b, e - b + 1));
  } else if (name == "substring" && (n == 1 || n == 2)) {
    auto b = int_arg(0);
    auto e = n == 2 ? int_arg(1) : std::optional<std::int64_t>(static_cast<std::int64_t>(s.size()));
    if (b && e && *b >= 0 && *b <= *e && *e <= static_cast<std::int64_t>(s.size())) {
      r = str(s.substr(static_cast<std::size_t>(*b), static_cast<std::size_t>(*e - *b)));
    }
  } else if (name == "concat" && n == 1) {
    if (auto o = str_arg(0)) r = str(s + *o);
  } else if ((name == "toString" || name == "intern") && n == 0) r = str(s);
  else if (name == "getBytes" && n <= 1) {
    int id = make_byte_array(s, 'B', {});
    r = RefV{id};
  } else if (name == "toCharArray" && n == 0) {
    int id = make_byte_array(s, 'C', {});
    r = RefV{id};
  } else if (name == "hashCode" && n == 0) {
    std::int32_t h = 0;
    for (unsigned char c : s) h = static_cast<std::int32_t>(31u * static_cast<std::uint32_t>(h) + c);
    r = num(h);
  } else {
    known = false;
  }
  if (!known) return std::nullopt;
  ValSet out;
  for (const auto& a : args) {
    out.res.insert(a.res.begin(), a.res.end());
    prov_merge(out.prov, a.prov);
  }
  if (r) {
    add_val(out, *r);
  } else {
    out.res.insert(Residual::kUnknown);
  }
  bool value_op = !one_of(name, {"length", "isEmpty", "equals", "equalsIgnoreCase", "contains",
                                 "startsWith", "endsWith", "indexOf", "lastIndexOf", "hashCode"});
  if (value_op) {
    prov_merge(out.prov, {step(rule::kStringOp, std::string(name), at, render(out))});
  }
  return out;
}

std::optional<ValSet> Interp::call_builder(int id, std::string_view name,
                                           const std::vector<ValSet>& args,
                                           const SyntaxNode& at) {
  auto piece = [&](const ValSet& a) {
    return map1(a, [&](const Value& v) -> std::optional<Value> {
      if (auto bytes = bytes_of(v); bytes && obj(v)->elem_type == 'C') return StrV{*bytes};
      auto s = java_string(v);
      if (!s) return std::nullopt;
      return StrV{*s};
    });
  };
  auto concat = [&](const ValSet& x, const ValSet& y, bool front) {
    return map2(x, y, [&](const Value& p, const Value& q) -> std::optional<Value> {
      const auto& ps = std::get<StrV>(p).s;
      const auto& qs = std::get<StrV>(q).s;
      return StrV{front ? qs + ps : ps + qs};
    });
  };
  if (name == "append" && args.size() == 1) {
    ValSet add = piece(args[0]);
    for (const auto& v : args[0].vals) {
      if (const HeapObj* o = obj(v)) {
        prov_merge(add.prov, o->prov);
        for (const auto& e : o->elems) prov_merge(add.prov, e.prov);
      }
    }
    ValSet next = concat(st_.heap[id].content, add, false);
    prov_merge(next.prov, {step(rule::kBuilderAppend, "append", at, render(add))});
    if (std::any_of(add.vals.begin(), add.vals.end(),
                    [](const Value& v) { return std::get<StrV>(v).s == "/"; })) {
      prov_merge(next.prov, {step(rule::kSeparator, "/", at, "/")});
    }
    st_.heap[id].content = std::move(next);
    return one(RefV{id});
  }
  if (name == "insert" && args.size() == 2) {
    auto pos = single_int(args[0]);
    ValSet add = piece(args[1]);
    ValSet next = map2(st_.heap[id].content, add, [&](const Value& p, const Value& q) -> std::optional<Value> {
      const auto& ps = std::get<StrV>(p).s;
      if (!pos || *pos < 0 || *pos > static_cast<std::int64_t>(ps.size())) return std::nullopt;
      std::string s = ps;
      s.insert(static_cast<std::size_t>(*pos), std::get<StrV>(q).s);
      return StrV{s};
    });
    prov_merge(next.prov, {step(rule::kBuilderAppend, "insert", at, render(add))});
    st_.heap[id].content = std::move(next);
    return one(RefV{id});
  }
  if (name == "reverse" && args.empty()) {
    ValSet next = map1(st_.heap[id].content, [](const Value& p) -> std::optional<Value> {
      std::string s = std::get<StrV>(p).s;
      std::reverse(s.begin(), s.end());
      return StrV{s};
    });
    prov_merge(next.prov, {step(rule::kStringOp, "reverse", at, render(next))});
    st_.heap[id].content = std::move(next);
    return one(RefV{id});
  }
  if (name == "toString" && args.empty()) {
    ValSet out = st_.heap[id].content;
    prov_merge(out.prov, st_.heap[id].prov);
    prov_merge(out.prov, {step(rule::kBuilderToString, "toString", at, render(out))});
    return out;
  }
  if (name == "length" && args.empty()) {
    return map1(st_.heap[id].content, [](const Value& p) -> std::optional<Value> {
      return make_int(static_cast<std::int64_t>(std::get<StrV>(p).s.size()), 'I');
    });
  }
  if (name == "charAt" && args.size() == 1) {
    auto i = single_int(args[0]);
    return map1(st_.heap[id].content, [&](const Value& p) -> std::optional<Value> {
      const auto& s = std::get<StrV>(p).s;
      if (!i || *i < 0 || *i >= static_cast<std::int64_t>(s.size())) return std::nullopt;
      return make_int(static_cast<unsigned char>(s[static_cast<std::size_t>(*i)]), 'C');
    });
  }
  if ((name == "setLength" || name == "deleteCharAt") && args.size() == 1) {
    auto i = single_int(args[0]);
    ValSet next = map1(st_.heap[id].content, [&](const Value& p) -> std::optional<Value> {
      std::string s = std::get<StrV>(p).s;
      if (!i || *i < 0) return std::nullopt;
      auto k = static_cast<std::size_t>(*i);
      if (name == "setLength") {
        s.resize(k, '\0');
      } else {
        if (k >= s.size()) return std::nullopt;
        s.erase(k, 1);
      }
      return StrV{s};
    });
    st_.heap[id].content = std::move(next);
    return one(RefV{id});
  }
  havoc_value(one(RefV{id}));
  return std::nullopt;
}

ValSet Interp::base64(const ValSet& input, bool url_safe, const SyntaxNode& at) {
  ValSet out = map1(input, [&](const Value& v) -> std::optional<Value> {
    std::optional<std::string> text;
    if (auto* s = std::get_if<StrV>(&v)) text = s->s;
    else text = bytes_of(v);
    if (!text) return std::nullopt;
    auto decoded = base64_decode(*text, url_safe);
    if (!decoded) return std::nullopt;
    return RefV{make_byte_array(*decoded, 'B', {})};
  });
  for (const auto& v : out.vals) {
    if (HeapObj* o = obj(v)) {
      o->prov = out.prov;
    }
  }
  int st = step(rule::kBase64, url_safe ? "url" : "standard", at, render(out));
  prov_merge(out.prov, {st});
  for (const auto& v : out.vals) {
    if (HeapObj* o = obj(v)) prov_merge(o->prov, {st});
  }
  return out;
}

ValSet Interp::format(const std::vector<ValSet>& args_in, const SyntaxNode& at) {
  std::vector<ValSet> args = args_in;
  std::size_t first = 0;
  // Locale-first overload: format(Locale, fmt, ...).
  if (!args.empty() && !args[0].vals.empty() && !std::holds_alternative<StrV>(args[0].vals[0])) {
    first = 1;
  }
  if (args.size() <= first) return residual(Residual::kUnknown);
  // Explicit Object[] varargs are expanded.
  if (args.size() == first + 2 && args[first + 1].concrete_single()) {
    if (const HeapObj* o = obj(args[first + 1].vals[0]);
        o && o->kind == HeapObj::Kind::kArray && o->elem_type == 'O' && !o->havoc) {
      std::vector<ValSet> expanded(args.begin(), args.begin() + static_cast<long>(first) + 1);
      for (const auto& e : o->elems) expanded.push_back(e);
      args = expanded;
    }
  }
  ValSet acc;
  acc.prov = args[first].prov;
  acc.res = args[first].res;
  for (const auto& fv : args[first].vals) {
    auto* f = std::get_if<StrV>(&fv);
    if (f == nullptr) {
      acc.res.insert(Residual::kUnknown);
      continue;
    }
    // Expand over the cartesian product of argument candidates.
    std::vector<std::string> partial{""};
    std::size_t argi = first + 1;
    bool ok = true;
    const std::string& s = f->s;
    for (std::size_t i = 0; i < s.size() && ok; ++i) {
      if (s[i] != '%') {
        for (auto& p : partial) p.push_back(s[i]);
        continue;
      }
      if (++i >= s.size()) {
        ok = false;
        break;
      }
      char spec = s[i];
      if (spec == '%') {
        for (auto& p : partial) p.push_back('%');
        continue;
      }
      if (spec == 'n') {
        for (auto& p : partial) p.push_back('\n');
        continue;
      }
      if (argi >= args.size()) {
        ok = false;
        break;
      }
      const ValSet& a = args[argi++];
      prov_merge(acc.prov, a.prov);
      acc.res.insert(a.res.begin(), a.res.end());
      std::vector<std::string> next;
      for (const auto& p : partial) {
        for (const auto& v : a.vals) {
          std::optional<std::string> piece;
          if (spec == 's' || spec == 'S') {
            piece = java_string(v);
            if (piece && spec == 'S') piece = ascii_upper(*piece);
          } else if (spec == 'd') {
            if (auto* iv = std::get_if<IntV>(&v); iv && iv->t != 'Z' && iv->t != 'C') {
              piece = std::to_string(iv->v);
            }
          } else if (spec == 'c') {
            if (auto* iv = std::get_if<IntV>(&v); iv && iv->t != 'Z') {
              piece = utf8_of(static_cast<std::uint32_t>(iv->v));
            }
          }
          if (!piece) {
            acc.res.insert(Residual::kUnknown);
            continue;
          }
          if (next.size() < static_cast<std::size_t>(budget_.max_candidates) + 1) {
            next.push_back(p + *piece);
          }
        }
      }
      partial = std::move(next);
    }
    if (!ok) {
      acc.res.insert(Residual::kUnknown);
      continue;
    }
    for (auto& p : partial) add_val(acc, StrV{p});
  }
  prov_merge(acc.prov, {step(rule::kFormat, "format", at, render(acc))});
  return acc;
}

std::optional<ValSet> Interp::call_static_lib(std::string_view cls, std::string_view name,
                                              const std::vector<ValSet>& args,
                                              const SyntaxNode& at) {
  auto n = args.size();
  if (cls == "String") {
    if (name == "format") return format(args, at);
    if ((name == "valueOf" || name == "copyValueOf") && n == 1) {
      ValSet out = map1(args[0], [&](const Value& v) -> std::optional<Value> {
        if (const HeapObj* o = obj(v); o && o->kind == HeapObj::Kind::kArray && o->elem_type == 'C') {
          auto b = bytes_of(v);
          if (b) return StrV{*b};
          return std::nullopt;
        }
        auto s = java_string(v);
        if (!s) return std::nullopt;
        return StrV{*s};
      });
      prov_merge(out.prov, {step(rule::kStringOp, std::string(name), at, render(out))});
      return out;
    }
    return std::nullopt;
  }
  if (cls == "Character") {
    if (name == "toChars" && n == 1) {
      ValSet out = map1(args[0], [&](const Value& v) -> std::optional<Value> {
        auto* i = std::get_if<IntV>(&v);
        if (i == nullptr || i->v < 0 || i->v > 0xFFFF) return std::nullopt;
        HeapObj o;
        o.kind = HeapObj::Kind::kArray;
        o.elem_type = 'C';
        o.elems.push_back(one(make_int(i->v, 'C')));
        return RefV{new_obj(std::move(o))};
      });
      for (const auto& v : out.vals) {
        if (HeapObj* o = obj(v)) prov_merge(o->prov, args[0].prov);
      }
      prov_merge(out.prov, {step(rule::kStringOp, "toChars", at, render(out))});
      return out;
    }
    if ((name == "toString" || name == "valueOf") && n == 1) {
      ValSet out = map1(args[0], [&](const Value& v) -> std::optional<Value> {
        auto* i = std::get_if<IntV>(&v);
        if (i == nullptr) return std::nullopt;
        if (name == "valueOf") return make_int(i->v, 'C');
        return StrV{utf8_of(static_cast<std::uint32_t>(i->v & 0xFFFF))};
      });
      prov_merge(out.prov, {step(rule::kStringOp, std::string(name), at, render(out))});
      return out;
    }
    return std::nullopt;
  }
  if (cls == "Integer" && n == 1) {
    if (name == "parseInt" || name == "valueOf") {
      return map1(args[0], [&](const Value& v) -> std::optional<Value> {
        if (auto* i = std::get_if<IntV>(&v)) return make_int(i->v, 'I');
        auto* s = std::get_if<StrV>(&v);
        if (s == nullptr) return std::nullopt;
        try {
          std::size_t used = 0;
          long long x = std::stoll(s->s, &used);
          if (used != s->s.size()) return std::nullopt;
          return make_int(x, 'I');
        } catch (...) {
          return std::nullopt;
        }
      });
    }
    if (name == "toString") {
      return map1(args[0], [&](const Value& v) -> std::optional<Value> {
        auto* i = std::get_if<IntV>(&v);
        if (i == nullptr) return std::nullopt;
        return StrV{std::to_string(i->v)};
      });
    }
    return std::nullopt;
  }
  if (cls == "Base64") {
    if (name == "decode" && (n == 1 || n == 2)) {
      bool url = false;
      if (n == 2) {
        auto flags = single_int(args[1]);
        url = flags && (*flags & 8) != 0;  // android.util.Base64.URL_SAFE
      }
      return base64(args[0], url, at);
    }
    if (name == "getDecoder" && n == 0) return one(LibV{"b64"});
    if (name == "getMimeDecoder" && n == 0) return one(LibV{"b64"});
    if (name == "getUrlDecoder" && n == 0) return one(LibV{"b64url"});
    return std::nullopt;
  }
  if (cls == "Intrinsics" && name == "areEqual" && n == 2) {
    return map2(args[0], args[1], [&](const Value& x, const Value& y) -> std::optional<Value> {
      if (std::holds_alternative<NullV>(x) || std::holds_alternative<NullV>(y)) {
        return make_int(x == y, 'Z');
      }
      auto sx = std::get_if<StrV>(&x);
      auto sy = std::get_if<StrV>(&y);
      if (sx && sy) return make_int(sx->s == sy->s, 'Z');
      if (std::holds_alternative<IntV>(x) && std::holds_alternative<IntV>(y)) {
        return make_int(std::get<IntV>(x).v == std::get<IntV>(y).v, 'Z');
      }
      return std::nullopt;
    });
  }
  if (cls == "TextUtils" && name == "isEmpty" && n == 1) {
    return map1(args[0], [&](const Value& v) -> std::optional<Value> {
      if (std::holds_alternative<NullV>(v)) return make_int(1, 'Z');
      if (auto* s = std::get_if<StrV>(&v)) return make_int(s->s.empty(), 'Z');
      return std::nullopt;
    });
  }
  return std::nullopt;
}

std::optional<ValSet> Interp::call_handle(const LibV& h, std::string_view name,
                                          const std::vector<ValSet>& args,
                                          const SyntaxNode& at) {
  if ((h.tag == "b64" || h.tag == "b64url") && name == "decode" && args.size() == 1) {
    return base64(args[0], h.tag == "b64url", at);
  }
  if (h.tag == "securerandom" && name == "nextBytes" && args.size() == 1) {
    int st = step(rule::kSecureRandom, "nextBytes", at);
    for (const auto& v : args[0].vals) {
      if (HeapObj* o = obj(v)) {
        o->havoc = true;
        prov_merge(o->prov, {st});
      }
    }
    return residual(Residual::kUnknown);
  }
  return std::nullopt;
}

ValSet Interp::call_unknown(std::string_view name, const ValSet& receiver,
                            const std::vector<ValSet>& args, const SyntaxNode& at) {
  Prov p = receiver.prov;
  for (const auto& v : receiver.vals) {
    if (const HeapObj* o = obj(v)) prov_merge(p, o->prov);
  }
  if (name == "nextBytes") {
    int st = step(rule::kSecureRandom, "nextBytes", at);
    for (const auto& a : args) {
      for (const auto& v : a.vals) {
        if (HeapObj* o = obj(v)) {
          o->havoc = true;
          prov_merge(o->prov, {st});
        }
      }
    }
    return residual(Residual::kUnknown, p);
  }
  if (one_of(name, {"generateKey", "generateSeed", "getSeed", "generateKeyPair"})) {
    prov_merge(p, {step(rule::kSecureRandom, std::string(name), at)});
    return residual(Residual::kUnknown, p);
  }
  if (one_of(name, {"doFinal", "decrypt"})) {
    prov_merge(p, {step(rule::kDecrypt, std::string(name), at)});
    return residual(Residual::kUnknown, p);
  }
  if (is_network_call(name)) {
    prov_merge(p, {step(rule::kNetwork, std::string(name), at)});
    return residual(Residual::kNetwork, p);
  }
  std::string recv_name;
  if (const SyntaxNode* o = at.child("object")) recv_name = std::string(simple_type(o->text));
  if (!is_side_effect_free(recv_name, name)) {
    for (const auto& a : args) havoc_value(a);
  }
  prov_merge(p, {step(rule::kUnresolvedCall, std::string(name), at)});
  return residual(Residual::kUnknown, p);
}

ValSet Interp::eval_invocation(const SyntaxNode& n) {
  const SyntaxNode* name_node = n.child("name");
  const SyntaxNode* object = n.child("object");
  if (name_node == nullptr) return residual(Residual::kUnknown);
  std::string name(name_node->text);

  ValSet receiver;
  bool has_receiver = object != nullptr;
  bool super_call = object && object->kind == "super";
  if (has_receiver && !super_call) receiver = eval(*object);

  std::vector<ValSet> args;
  if (const SyntaxNode* al = n.child("arguments")) {
    for (const auto& a : al->children) args.push_back(eval(a));
  }
  const SyntaxNode* cls = frame_ ? frame_->cls : nullptr;

  // Unqualified, this- or super-qualified: methods of the current class chain.
  if (!has_receiver || super_call || object->kind == "this") {
    const SyntaxNode* start = super_call ? superclass_of(cls) : cls;
    auto methods = find_methods(start, name, args.size(), true);
    if (!methods.empty()) {
      const SyntaxNode* m = pick_overload(methods, args);
      return call_user(m, class_of(m), frame_ ? frame_->self : std::nullopt, args, n);
    }
    if (!has_receiver) {
      // Kotlin-style top-level helpers or methods of sibling classes in the file.
      for (const SyntaxNode* c : classes_) {
        auto ms = find_methods(c, name, args.size(), false);
        if (!ms.empty()) {
          const SyntaxNode* m = pick_overload(ms, args);
          return call_user(m, c, std::nullopt, args, n);
        }
      }
    }
    return call_unknown(name, receiver, args, n);
  }

  ValSet out;
  out.res = receiver.res;
  out.prov = receiver.prov;
  bool handled_any = false;
  bool unknown_receiver = receiver.vals.empty();
  for (const auto& rv : receiver.vals) {
    std::optional<ValSet> r;
    if (auto* s = std::get_if<StrV>(&rv)) {
      r = call_string(s->s, name, args, n);
    } else if (auto* c = std::get_if<ClassV>(&rv)) {
      if (c->decl != nullptr) {
        auto ms = find_methods(c->decl, name, args.size(), true);
        if (!ms.empty()) {
          const SyntaxNode* m = pick_overload(ms, args);
          r = call_user(m, class_of(m), std::nullopt, args, n);
        }
      } else {
        r = call_static_lib(c->name, name, args, n);
      }
      if (!r) unknown_receiver = true;
    } else if (auto* l = std::get_if<LibV>(&rv)) {
      r = call_handle(*l, name, args, n);
    } else if (HeapObj* o = obj(rv)) {
      if (o->kind == HeapObj::Kind::kBuilder) {
        r = call_builder(std::get<RefV>(rv).id, name, args, n);
      } else if (o->kind == HeapObj::Kind::kInstance) {
        if (!o->enum_name.empty() && (name == "name" || name == "toString") && args.empty()) {
          r = one(StrV{o->enum_name}, {step(rule::kEnumConstant, o->enum_name, n, o->enum_name)});
        } else {
          auto ms = find_methods(o->cls, name, args.size(), true);
          if (!ms.empty()) {
            const SyntaxNode* m = pick_overload(ms, args);
            r = call_user(m, class_of(m), std::get<RefV>(rv).id, args, n);
          }
        }
      } else if (o->kind == HeapObj::Kind::kArray && name == "clone" && args.empty()) {
        HeapObj copy = *o;
        r = one(RefV{new_obj(std::move(copy))});
      }
    }
    if (r) {
      handled_any = true;
      merge_into(out, *r);
    } else {
      unknown_receiver = true;
    }
  }
  if (!unknown_receiver) {
    return out;
  }
  // Receiver of unknown type: a method of that name somewhere in the file.
  ValSet fallback;
  bool found = false;
  for (const SyntaxNode* c : classes_) {
    auto ms = find_methods(c, name, args.size(), false);
    if (!ms.empty()) {
      const SyntaxNode* m = pick_overload(ms, args);
      fallback = call_user(m, c, std::nullopt, args, n);
      found = true;
      break;
    }
  }
  if (!found) fallback = call_unknown(name, receiver, args, n);
  if (!handled_any) {
    prov_merge(fallback.prov, receiver.prov);
    return fallback;
  }
  merge_into(out, fallback);
  return out;
}

}  // namespace cryptolens::detail
