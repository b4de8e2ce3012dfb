#include <algorithm>
#include <stdexcept>

#include "cryptolens/codec.h"
#include "resolve_interp.h"

namespace cryptolens {

std::string_view to_string(Residual r) {
  switch (r) {
    case Residual::kUnknown: return "UNKNOWN";
    case Residual::kNative: return "NATIVE";
    case Residual::kNetwork: return "NETWORK";
    case Residual::kExternalInput: return "EXTERNAL_INPUT";
    case Residual::kDepthExceeded: return "DEPTH_EXCEEDED";
  }
  return "UNKNOWN";
}

void ResolutionBudget::validate() const {
  if (max_indirection <= 0 || max_candidates <= 0 || max_steps <= 0) {
    throw std::invalid_argument("resolution budget limits must be positive");
  }
}

bool ResolvedValue::has_rule(std::string_view name) const {
  return std::any_of(trace.begin(), trace.end(),
                     [&](const TraceStep& s) { return s.rule == name; });
}

bool ResolvedValue::has_rule(std::string_view name, std::string_view detail) const {
  return std::any_of(trace.begin(), trace.end(), [&](const TraceStep& s) {
    return s.rule == name && s.detail == detail;
  });
}

std::string render_bytes(std::string_view bytes) {
  bool printable = std::all_of(bytes.begin(), bytes.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x20 && u < 0x7F;
  });
  if (printable) {
    return std::string(bytes);
  }
  return "hex:" + to_hex(bytes);
}

namespace detail {

void prov_merge(Prov& into, const Prov& from) {
  if (from.empty()) {
    return;
  }
  Prov out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into = std::move(out);
}

IntV make_int(std::int64_t v, char t) {
  switch (t) {
    case 'B': return {static_cast<std::int8_t>(v), 'B'};
    case 'C': return {static_cast<std::uint16_t>(v), 'C'};
    case 'S': return {static_cast<std::int16_t>(v), 'S'};
    case 'Z': return {v != 0 ? 1 : 0, 'Z'};
    case 'J': return {v, 'J'};
    default: return {static_cast<std::int32_t>(static_cast<std::uint32_t>(v)), 'I'};
  }
}

std::string utf8_of(std::uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | ((cp >> 12) & 0x0F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

namespace {

bool is_class_like(const SyntaxNode& n) {
  return n.kind == "class_declaration" || n.kind == "enum_declaration" ||
         n.kind == "interface_declaration" ||
         (n.kind == "object_creation_expression" && n.first_child_of_kind("class_body"));
}

std::string_view simple_name(std::string_view t) {
  if (auto lt = t.find('<'); lt != std::string_view::npos) t = t.substr(0, lt);
  if (auto d = t.rfind('.'); d != std::string_view::npos) t = t.substr(d + 1);
  return t;
}

}  // namespace

Interp::Interp(const InvocationSite& site, const ResolutionBudget& budget)
    : site_(site), budget_(budget) {
  budget_.validate();
  site.unit->root().walk([&](const SyntaxNode& n) {
    if (is_class_like(n)) {
      classes_.push_back(&n);
    }
  });
}

bool Interp::tick() {
  if (exhausted_) {
    return false;
  }
  if (++steps_used_ > budget_.max_steps) {
    exhausted_ = true;
    ever_exhausted_ = true;
    return false;
  }
  return true;
}

int Interp::step(std::string_view rule, std::string detail, const SyntaxNode& at,
                 std::string intermediate) {
  auto key = std::make_tuple(std::string(rule), detail, at.span.start, at.span.end);
  if (auto it = step_index_.find(key); it != step_index_.end()) {
    return it->second;
  }
  int idx = static_cast<int>(steps_.size());
  steps_.push_back(TraceStep{std::string(rule), std::move(detail), at.span, at.start_line,
                             std::move(intermediate)});
  step_index_.emplace(std::move(key), idx);
  return idx;
}

ValSet Interp::one(Value v, Prov prov) const {
  ValSet s;
  s.vals.push_back(std::move(v));
  s.prov = std::move(prov);
  return s;
}

ValSet Interp::residual(Residual r, Prov prov) const {
  ValSet s;
  s.res.insert(r);
  s.prov = std::move(prov);
  return s;
}

void Interp::add_val(ValSet& set, Value v) const {
  if (std::find(set.vals.begin(), set.vals.end(), v) != set.vals.end()) {
    return;
  }
  if (static_cast<int>(set.vals.size()) >= budget_.max_candidates) {
    set.res.insert(Residual::kDepthExceeded);
    return;
  }
  set.vals.push_back(std::move(v));
}

void Interp::merge_into(ValSet& into, const ValSet& from) const {
  for (const auto& v : from.vals) {
    add_val(into, v);
  }
  into.res.insert(from.res.begin(), from.res.end());
  prov_merge(into.prov, from.prov);
  for (const auto& f : from.frags) {
    if (std::find(into.frags.begin(), into.frags.end(), f) == into.frags.end() &&
        into.frags.size() < static_cast<std::size_t>(budget_.max_candidates)) {
      into.frags.push_back(f);
    }
  }
}

std::string Interp::render_value(const Value& v) const {
  if (auto s = java_string(v)) {
    return *s;
  }
  if (auto* r = std::get_if<RefV>(&v)) {
    if (auto b = bytes_of(v)) {
      return render_bytes(*b);
    }
    return "ref#" + std::to_string(r->id);
  }
  if (auto* c = std::get_if<ClassV>(&v)) {
    return "class " + c->name;
  }
  if (auto* l = std::get_if<LibV>(&v)) {
    return "<" + l->tag + ">";
  }
  return "?";
}

std::string Interp::render(const ValSet& v) const {
  std::string out;
  std::size_t shown = 0;
  for (const auto& x : v.vals) {
    if (shown == 3) {
      out += " | ...";
      break;
    }
    if (shown++ > 0) out += " | ";
    out += render_value(x);
  }
  for (auto r : v.res) {
    if (!out.empty()) out += " | ";
    out += to_string(r);
  }
  return out;
}

int Interp::new_obj(HeapObj o) {
  int id = next_id_++;
  st_.heap.emplace(id, std::move(o));
  return id;
}

HeapObj* Interp::obj(const Value& v) {
  if (auto* r = std::get_if<RefV>(&v)) {
    auto it = st_.heap.find(r->id);
    return it == st_.heap.end() ? nullptr : &it->second;
  }
  return nullptr;
}

const HeapObj* Interp::obj(const Value& v) const {
  if (auto* r = std::get_if<RefV>(&v)) {
    auto it = st_.heap.find(r->id);
    return it == st_.heap.end() ? nullptr : &it->second;
  }
  return nullptr;
}

// String conversion as performed by Java string concatenation.
std::optional<std::string> Interp::java_string(const Value& v) const {
  if (auto* s = std::get_if<StrV>(&v)) return s->s;
  if (auto* i = std::get_if<IntV>(&v)) {
    if (i->t == 'C') return utf8_of(static_cast<std::uint32_t>(i->v));
    if (i->t == 'Z') return std::string(i->v ? "true" : "false");
    return std::to_string(i->v);
  }
  if (std::holds_alternative<NullV>(v)) return std::string("null");
  if (const HeapObj* o = obj(v)) {
    if (o->kind == HeapObj::Kind::kBuilder && o->content.concrete_single()) {
      return java_string(o->content.vals.front());
    }
    if (o->kind == HeapObj::Kind::kInstance && !o->enum_name.empty()) {
      return o->enum_name;
    }
  }
  return std::nullopt;
}

std::optional<bool> Interp::as_bool(const ValSet& v) {
  if (!v.concrete_single()) return std::nullopt;
  if (auto* i = std::get_if<IntV>(&v.vals.front())) {
    if (i->t == 'Z') return i->v != 0;
  }
  return std::nullopt;
}

std::optional<std::int64_t> Interp::single_int(const ValSet& v) {
  if (!v.concrete_single()) return std::nullopt;
  if (auto* i = std::get_if<IntV>(&v.vals.front())) {
    if (i->t != 'Z') return i->v;
  }
  return std::nullopt;
}

// Contents of a byte or char array as raw bytes.
std::optional<std::string> Interp::bytes_of(const Value& v) const {
  const HeapObj* o = obj(v);
  if (o == nullptr || o->kind != HeapObj::Kind::kArray || o->havoc) {
    return std::nullopt;
  }
  if (o->elem_type != 'B' && o->elem_type != 'C' && o->elem_type != 'I') {
    return std::nullopt;
  }
  std::string out;
  for (const auto& e : o->elems) {
    if (!e.concrete_single()) return std::nullopt;
    auto* i = std::get_if<IntV>(&e.vals.front());
    if (i == nullptr) return std::nullopt;
    if (o->elem_type == 'C') {
      out += utf8_of(static_cast<std::uint32_t>(i->v & 0xFFFF));
    } else {
      out.push_back(static_cast<char>(i->v & 0xFF));
    }
  }
  return out;
}

int Interp::make_byte_array(const std::string& bytes, char elem_type, const Prov& prov) {
  HeapObj o;
  o.kind = HeapObj::Kind::kArray;
  o.elem_type = elem_type;
  for (unsigned char c : bytes) {
    o.elems.push_back(one(make_int(elem_type == 'C' ? c : static_cast<std::int8_t>(c), elem_type),
                          prov));
  }
  o.prov = prov;
  return new_obj(std::move(o));
}

State Interp::join(const State& a, const State& b) const {
  State out = a;
  for (const auto& [name, v] : b.locals) {
    auto it = out.locals.find(name);
    if (it == out.locals.end()) {
      out.locals.emplace(name, v);
    } else if (!(it->second == v)) {
      merge_into(it->second, v);
    }
  }
  for (const auto& [name, v] : b.statics) {
    auto it = out.statics.find(name);
    if (it == out.statics.end()) {
      out.statics.emplace(name, v);
    } else if (!(it->second == v)) {
      merge_into(it->second, v);
    }
  }
  for (const auto& [id, ob] : b.heap) {
    auto it = out.heap.find(id);
    if (it == out.heap.end()) {
      out.heap.emplace(id, ob);
      continue;
    }
    HeapObj& oa = it->second;
    prov_merge(oa.prov, ob.prov);
    switch (oa.kind) {
      case HeapObj::Kind::kBuilder:
        // Builder text that differs between paths is not tracked.
        if (!(oa.content == ob.content) || oa.havoc != ob.havoc) {
          ValSet u;
          u.res.insert(Residual::kUnknown);
          u.prov = oa.content.prov;
          prov_merge(u.prov, ob.content.prov);
          oa.content = std::move(u);
          oa.havoc = true;
        }
        break;
      case HeapObj::Kind::kArray:
        if (oa.elems.size() != ob.elems.size() || ob.havoc) {
          oa.havoc = true;
        } else {
          for (std::size_t i = 0; i < oa.elems.size(); ++i) {
            if (!(oa.elems[i] == ob.elems[i])) merge_into(oa.elems[i], ob.elems[i]);
          }
        }
        break;
      case HeapObj::Kind::kInstance:
        for (const auto& [f, v] : ob.fields) {
          auto fit = oa.fields.find(f);
          if (fit == oa.fields.end()) {
            oa.fields.emplace(f, v);
          } else if (!(fit->second == v)) {
            merge_into(fit->second, v);
          }
        }
        break;
    }
  }
  for (const auto& [k, v] : b.enum_cache) {
    out.enum_cache.emplace(k, v);
  }
  return out;
}

void Interp::havoc_value(const ValSet& v) {
  for (const auto& x : v.vals) {
    HeapObj* o = obj(x);
    if (o == nullptr) continue;
    o->havoc = true;
    if (o->kind == HeapObj::Kind::kBuilder) {
      Prov p = o->content.prov;
      o->content = residual(Residual::kUnknown, std::move(p));
    } else if (o->kind == HeapObj::Kind::kInstance) {
      for (auto& [f, fv] : o->fields) fv.res.insert(Residual::kUnknown);
    }
  }
}

namespace {

const SyntaxNode* base_identifier(const SyntaxNode* n) {
  while (n != nullptr) {
    n = unwrap_parens(n);
    if (n->kind == "identifier" || n->kind == "this") return n;
    if (n->kind == "array_access") {
      n = n->child("array");
    } else if (n->kind == "field_access") {
      n = n->child("object");
    } else {
      return nullptr;
    }
  }
  return nullptr;
}

}  // namespace

void Interp::havoc(const SyntaxNode& subtree) {
  auto taint_name = [&](const SyntaxNode* target) {
    const SyntaxNode* base = base_identifier(target);
    if (base == nullptr) return;
    const SyntaxNode* t = unwrap_parens(target);
    if (base->kind == "this" && t->kind == "field_access") {
      if (const SyntaxNode* f = t->child("field"); f && frame_ && frame_->self) {
        auto& fields = st_.heap[*frame_->self].fields;
        fields[std::string(f->text)].res.insert(Residual::kUnknown);
      }
      return;
    }
    if (base->kind != "identifier") return;
    std::string name(base->text);
    auto it = st_.locals.find(name);
    if (it != st_.locals.end()) {
      if (t == base) {
        it->second.res.insert(Residual::kUnknown);
      } else {
        havoc_value(it->second);
      }
      return;
    }
    if (t == base && frame_ && frame_->self) {
      st_.heap[*frame_->self].fields[name].res.insert(Residual::kUnknown);
    }
    if (t == base && frame_ && frame_->cls) {
      for (const SyntaxNode* c : lookup_chain(frame_->cls)) {
        if (find_field(c, name).first) {
          if (const SyntaxNode* nm = c->child("name")) {
            st_.statics[std::string(nm->text) + "." + name].res.insert(Residual::kUnknown);
          }
          break;
        }
      }
    }
  };
  subtree.walk([&](const SyntaxNode& n) {
    if (n.kind == "assignment_expression") {
      taint_name(n.child("left"));
    } else if (n.kind == "update_expression" && !n.children.empty()) {
      taint_name(&n.children.front());
    } else if (n.kind == "variable_declarator") {
      if (const SyntaxNode* nm = n.child("name")) {
        st_.locals[std::string(nm->text)].res.insert(Residual::kUnknown);
      }
    } else if (n.kind == "method_invocation") {
      auto touch = [&](const SyntaxNode* e) {
        const SyntaxNode* b = base_identifier(e);
        if (b && b->kind == "identifier") {
          auto it = st_.locals.find(std::string(b->text));
          if (it != st_.locals.end()) havoc_value(it->second);
        }
      };
      touch(n.child("object"));
      if (const SyntaxNode* args = n.child("arguments")) {
        for (const auto& a : args->children) touch(&a);
      }
    }
  });
}

void Interp::havoc_everything() {
  for (auto& [k, v] : st_.locals) {
    v = residual(Residual::kDepthExceeded, v.prov);
  }
  for (auto& [k, v] : st_.statics) {
    v = residual(Residual::kDepthExceeded, v.prov);
  }
  for (auto& [id, o] : st_.heap) {
    o.havoc = true;
    o.content = residual(Residual::kDepthExceeded, o.content.prov);
    for (auto& [f, v] : o.fields) v = residual(Residual::kDepthExceeded, v.prov);
  }
}

std::vector<const SyntaxNode*> Interp::members(const SyntaxNode* cls) const {
  std::vector<const SyntaxNode*> out;
  if (cls == nullptr) return out;
  const SyntaxNode* body = cls->kind == "object_creation_expression"
                               ? cls->first_child_of_kind("class_body")
                               : cls->child("body");
  if (body == nullptr) return out;
  for (const auto& m : body->children) {
    if (m.kind == "enum_body_declarations") {
      for (const auto& d : m.children) out.push_back(&d);
    } else {
      out.push_back(&m);
    }
  }
  return out;
}

const SyntaxNode* Interp::find_class(std::string_view name) const {
  name = simple_name(name);
  for (const SyntaxNode* c : classes_) {
    if (const SyntaxNode* n = c->child("name"); n && n->text == name) {
      return c;
    }
  }
  return nullptr;
}

const SyntaxNode* Interp::superclass_of(const SyntaxNode* cls) const {
  if (cls == nullptr) return nullptr;
  if (cls->kind == "object_creation_expression") {
    if (const SyntaxNode* t = cls->child("type")) return find_class(t->text);
    return nullptr;
  }
  const SyntaxNode* sup = cls->child("superclass");
  if (sup == nullptr || sup->children.empty()) return nullptr;
  const SyntaxNode* found = find_class(sup->children.front().text);
  return found == cls ? nullptr : found;
}

const SyntaxNode* Interp::lexical_outer(const SyntaxNode* cls) const {
  for (const SyntaxNode* p = cls ? cls->parent : nullptr; p != nullptr; p = p->parent) {
    if (is_class_like(*p)) return p;
  }
  return nullptr;
}

const SyntaxNode* Interp::class_of(const SyntaxNode* node) const {
  for (const SyntaxNode* p = node ? node->parent : nullptr; p != nullptr; p = p->parent) {
    if (is_class_like(*p)) return p;
  }
  return nullptr;
}

// The class, its direct superclass, then lexically enclosing classes.
std::vector<const SyntaxNode*> Interp::lookup_chain(const SyntaxNode* cls) const {
  std::vector<const SyntaxNode*> out;
  for (const SyntaxNode* c = cls; c != nullptr; c = lexical_outer(c)) {
    out.push_back(c);
    if (const SyntaxNode* s = superclass_of(c)) out.push_back(s);
  }
  return out;
}

std::pair<const SyntaxNode*, const SyntaxNode*> Interp::find_field(
    const SyntaxNode* cls, std::string_view name) const {
  for (const SyntaxNode* m : members(cls)) {
    if (m->kind != "field_declaration" && m->kind != "constant_declaration") continue;
    for (const SyntaxNode* d : m->children_with_field("declarator")) {
      if (const SyntaxNode* n = d->child("name"); n && n->text == name) {
        return {m, d};
      }
    }
  }
  return {nullptr, nullptr};
}

const SyntaxNode* Interp::find_enum_constant(const SyntaxNode* cls,
                                             std::string_view name) const {
  if (cls == nullptr || cls->kind != "enum_declaration") return nullptr;
  for (const SyntaxNode* m : members(cls)) {
    if (m->kind == "enum_constant") {
      if (const SyntaxNode* n = m->child("name"); n && n->text == name) return m;
    }
  }
  return nullptr;
}

namespace {

std::pair<std::size_t, bool> arity_of(const SyntaxNode& method) {
  std::size_t n = 0;
  bool varargs = false;
  if (const SyntaxNode* ps = method.child("parameters")) {
    for (const auto& p : ps->children) {
      if (p.kind == "formal_parameter") ++n;
      if (p.kind == "spread_parameter") {
        ++n;
        varargs = true;
      }
    }
  }
  return {n, varargs};
}

}  // namespace

std::vector<const SyntaxNode*> Interp::find_methods(const SyntaxNode* cls,
                                                    std::string_view name, std::size_t arity,
                                                    bool walk_chain) const {
  std::vector<const SyntaxNode*> out;
  std::vector<const SyntaxNode*> scope =
      walk_chain ? lookup_chain(cls) : std::vector<const SyntaxNode*>{cls};
  for (const SyntaxNode* c : scope) {
    for (const SyntaxNode* m : members(c)) {
      if (m->kind != "method_declaration") continue;
      const SyntaxNode* n = m->child("name");
      if (n == nullptr || n->text != name) continue;
      auto [count, varargs] = arity_of(*m);
      if (count == arity || (varargs && arity + 1 >= count)) out.push_back(m);
    }
    if (!out.empty()) break;
  }
  return out;
}

ResolvedValue Interp::finish(const ValSet& v) const {
  ResolvedValue out;
  std::set<std::string> cands;
  for (const auto& x : v.vals) {
    if (auto b = bytes_of(x)) {
      cands.insert(render_bytes(*b));
    } else if (auto s = std::holds_alternative<NullV>(x) ? std::nullopt : java_string(x)) {
      cands.insert(*s);
    } else {
      out.residuals.insert(Residual::kUnknown);
    }
  }
  out.candidates.assign(cands.begin(), cands.end());
  out.residuals.insert(v.res.begin(), v.res.end());
  if (ever_exhausted_) out.residuals.insert(Residual::kDepthExceeded);
  if (out.candidates.empty() && out.residuals.empty()) out.residuals.insert(Residual::kUnknown);
  Prov prov = v.prov;
  for (const auto& x : v.vals) {
    if (const HeapObj* o = obj(x)) {
      prov_merge(prov, o->prov);
      for (const auto& e : o->elems) prov_merge(prov, e.prov);
    }
  }
  for (int i : prov) {
    out.trace.push_back(steps_[static_cast<std::size_t>(i)]);
  }
  for (const auto& f : v.frags) {
    if (!cands.count(f)) out.fragments.push_back(f);
  }
  out.encrypted_param = out.has_rule(rule::kDecrypt);
  out.secure_random = out.has_rule(rule::kSecureRandom);
  return out;
}

}  // namespace detail

}  // namespace cryptolens
