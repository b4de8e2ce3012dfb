#pragma once

// Internal bounded interpreter behind resolve(). Not installed.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cryptolens/resolve.h"
#include "resolve_values.h"

namespace cryptolens::detail {

class Interp {
 public:
  Interp(const InvocationSite& site, const ResolutionBudget& budget);

  // Evaluate expr in the state reached by executing its enclosing code up to it.
  ValSet run(const SyntaxNode& expr);
  ResolvedValue finish(const ValSet& v) const;

 private:
  enum class Flow { kNormal, kReturn, kBreak, kContinue, kThrow, kUnknownJump };

  struct Frame {
    const SyntaxNode* cls = nullptr;
    const SyntaxNode* method = nullptr;
    std::optional<int> self;
    int depth = 0;
    ValSet ret;
    bool returned = false;
  };

  // --- bookkeeping (resolve_core.cpp)
  bool tick();
  int step(std::string_view rule, std::string detail, const SyntaxNode& at,
           std::string intermediate = {});
  ValSet one(Value v, Prov prov = {}) const;
  ValSet residual(Residual r, Prov prov = {}) const;
  void add_val(ValSet& set, Value v) const;
  void merge_into(ValSet& into, const ValSet& from) const;
  std::string render(const ValSet& v) const;
  std::string render_value(const Value& v) const;
  int new_obj(HeapObj obj);
  HeapObj* obj(const Value& v);
  const HeapObj* obj(const Value& v) const;
  std::optional<std::string> java_string(const Value& v) const;
  static std::optional<bool> as_bool(const ValSet& v);
  static std::optional<std::int64_t> single_int(const ValSet& v);
  std::optional<std::string> bytes_of(const Value& v) const;
  int make_byte_array(const std::string& bytes, char elem_type, const Prov& prov);
  template <typename Fn>
  ValSet map1(const ValSet& a, Fn&& fn);
  template <typename Fn>
  ValSet map2(const ValSet& a, const ValSet& b, Fn&& fn);
  State join(const State& a, const State& b) const;
  void havoc(const SyntaxNode& subtree);
  void havoc_value(const ValSet& v);
  void havoc_everything();

  // --- unit structure (resolve_core.cpp)
  std::vector<const SyntaxNode*> members(const SyntaxNode* cls) const;
  const SyntaxNode* find_class(std::string_view name) const;
  const SyntaxNode* superclass_of(const SyntaxNode* cls) const;
  const SyntaxNode* lexical_outer(const SyntaxNode* cls) const;
  const SyntaxNode* class_of(const SyntaxNode* node) const;
  std::vector<const SyntaxNode*> lookup_chain(const SyntaxNode* cls) const;
  std::pair<const SyntaxNode*, const SyntaxNode*> find_field(const SyntaxNode* cls,
                                                             std::string_view name) const;
  const SyntaxNode* find_enum_constant(const SyntaxNode* cls, std::string_view name) const;
  std::vector<const SyntaxNode*> find_methods(const SyntaxNode* cls, std::string_view name,
                                              std::size_t arity, bool walk_chain) const;

  // --- expressions (resolve_expr.cpp)
  ValSet eval(const SyntaxNode& n);
  ValSet eval_identifier(const SyntaxNode& n);
  ValSet eval_binary(const SyntaxNode& n);
  ValSet eval_unary(const SyntaxNode& n);
  ValSet eval_cast(const SyntaxNode& n);
  ValSet eval_ternary(const SyntaxNode& n);
  ValSet eval_assignment(const SyntaxNode& n);
  ValSet eval_update(const SyntaxNode& n);
  ValSet eval_field_access(const SyntaxNode& n);
  ValSet eval_array_access(const SyntaxNode& n);
  ValSet eval_array_creation(const SyntaxNode& n);
  ValSet eval_array_initializer(const SyntaxNode& n, char elem_type);
  ValSet eval_object_creation(const SyntaxNode& n);
  ValSet eval_invocation(const SyntaxNode& n);
  void store(const SyntaxNode& target, const ValSet& value);
  ValSet read_member(const ValSet& object, std::string_view name, const SyntaxNode& at);
  ValSet resolve_field(const SyntaxNode* cls, const SyntaxNode* field_decl,
                       const SyntaxNode* declarator, const SyntaxNode& at);
  ValSet enum_constant(const SyntaxNode* cls, const SyntaxNode* constant, const SyntaxNode& at);

  // --- calls (resolve_calls.cpp)
  ValSet call_user(const SyntaxNode* method, const SyntaxNode* cls, std::optional<int> self,
                   const std::vector<ValSet>& args, const SyntaxNode& at, bool hop = true);
  const SyntaxNode* pick_overload(const std::vector<const SyntaxNode*>& methods,
                                  const std::vector<ValSet>& args) const;
  std::optional<ValSet> call_string(const std::string& s, std::string_view name,
                                    const std::vector<ValSet>& args, const SyntaxNode& at);
  std::optional<ValSet> call_builder(int id, std::string_view name,
                                     const std::vector<ValSet>& args, const SyntaxNode& at);
  std::optional<ValSet> call_static_lib(std::string_view cls, std::string_view name,
                                        const std::vector<ValSet>& args, const SyntaxNode& at);
  std::optional<ValSet> call_handle(const LibV& h, std::string_view name,
                                    const std::vector<ValSet>& args, const SyntaxNode& at);
  ValSet call_unknown(std::string_view name, const ValSet& receiver,
                      const std::vector<ValSet>& args, const SyntaxNode& at);
  ValSet base64(const ValSet& input, bool url_safe, const SyntaxNode& at);
  ValSet format(const std::vector<ValSet>& args, const SyntaxNode& at);
  ValSet new_instance(const SyntaxNode* cls, const std::vector<ValSet>& args,
                      const SyntaxNode& at);

  // --- statements (resolve_stmt.cpp)
  Flow exec(const SyntaxNode& s);
  Flow exec_block(const SyntaxNode& s);
  Flow exec_if(const SyntaxNode& s);
  Flow exec_loop(const SyntaxNode& s);
  Flow exec_enhanced_for(const SyntaxNode& s);
  Flow exec_switch(const SyntaxNode& s);
  void declare(const SyntaxNode& decl);
  void run_to(const SyntaxNode& s, const SyntaxNode& target);
  ValSet eval_in_context(const SyntaxNode* container, const SyntaxNode& target,
                         const SyntaxNode* cls, std::optional<int> self, int depth);
  void bind_params_external(const SyntaxNode* container);

  const InvocationSite& site_;
  ResolutionBudget budget_;
  State st_;
  Frame* frame_ = nullptr;
  std::vector<TraceStep> steps_;
  std::map<std::tuple<std::string, std::string, std::uint32_t, std::uint32_t>, int> step_index_;
  long steps_used_ = 0;
  bool exhausted_ = false;
  bool ever_exhausted_ = false;
  int next_id_ = 1;
  std::vector<const SyntaxNode*> call_stack_;
  std::set<const SyntaxNode*> resolving_fields_;
  std::vector<const SyntaxNode*> classes_;
};

template <typename Fn>
ValSet Interp::map1(const ValSet& a, Fn&& fn) {
  ValSet out;
  out.res = a.res;
  out.prov = a.prov;
  for (const auto& v : a.vals) {
    std::optional<Value> r = fn(v);
    if (r) {
      add_val(out, std::move(*r));
    } else {
      out.res.insert(Residual::kUnknown);
    }
  }
  return out;
}

template <typename Fn>
ValSet Interp::map2(const ValSet& a, const ValSet& b, Fn&& fn) {
  ValSet out;
  out.res = a.res;
  out.res.insert(b.res.begin(), b.res.end());
  out.prov = a.prov;
  prov_merge(out.prov, b.prov);
  for (const auto& x : a.vals) {
    for (const auto& y : b.vals) {
      std::optional<Value> r = fn(x, y);
      if (r) {
        add_val(out, std::move(*r));
      } else {
        out.res.insert(Residual::kUnknown);
      }
    }
  }
  return out;
}

}  // namespace cryptolens::detail
