#pragma once

// Internal value model for the resolver. Not installed.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cryptolens/resolve.h"

namespace cryptolens::detail {

struct StrV {
  std::string s;
  friend bool operator==(const StrV&, const StrV&) = default;
};
// Java primitive. t is the JVM descriptor letter: I J B C S Z.
struct IntV {
  std::int64_t v = 0;
  char t = 'I';
  friend bool operator==(const IntV&, const IntV&) = default;
};
struct NullV {
  friend bool operator==(const NullV&, const NullV&) = default;
};
struct RefV {
  int id = 0;
  friend bool operator==(const RefV&, const RefV&) = default;
};
// A class used as a receiver. decl is null for classes outside the unit.
struct ClassV {
  const SyntaxNode* decl = nullptr;
  std::string name;
  friend bool operator==(const ClassV&, const ClassV&) = default;
};
// Opaque library handle such as a Base64 decoder.
struct LibV {
  std::string tag;
  friend bool operator==(const LibV&, const LibV&) = default;
};

using Value = std::variant<StrV, IntV, NullV, RefV, ClassV, LibV>;
using Prov = std::vector<int>;  // sorted trace-step indices

void prov_merge(Prov& into, const Prov& from);

struct ValSet {
  std::vector<Value> vals;
  std::set<Residual> res;
  Prov prov;
  std::vector<std::string> frags;

  bool concrete_single() const { return vals.size() == 1 && res.empty(); }
  bool operator==(const ValSet& o) const {
    return vals == o.vals && res == o.res && prov == o.prov && frags == o.frags;
  }
};

IntV make_int(std::int64_t v, char t);

inline char prim_type(std::string_view t) {
  if (t == "byte") return 'B';
  if (t == "char") return 'C';
  if (t == "short") return 'S';
  if (t == "int") return 'I';
  if (t == "long") return 'J';
  if (t == "boolean") return 'Z';
  return 0;
}

// Element descriptor for an array type text like "byte[]" or "int".
inline char elem_type_of(std::string_view type_text) {
  if (auto b = type_text.find('['); b != std::string_view::npos) {
    type_text = type_text.substr(0, b);
  }
  while (!type_text.empty() && std::isspace(static_cast<unsigned char>(type_text.back()))) {
    type_text.remove_suffix(1);
  }
  char t = prim_type(type_text);
  return t ? t : 'O';
}

std::string utf8_of(std::uint32_t cp);

struct HeapObj {
  enum class Kind { kArray, kBuilder, kInstance } kind = Kind::kInstance;
  char elem_type = 'I';
  std::vector<ValSet> elems;
  bool havoc = false;
  ValSet content;  // builder text
  const SyntaxNode* cls = nullptr;
  std::string enum_name;
  std::map<std::string, ValSet> fields;
  Prov prov;  // provenance of the object as a whole (havoc causes, etc.)
};

struct State {
  std::map<std::string, ValSet> locals;
  std::map<int, HeapObj> heap;
  std::map<std::string, ValSet> statics;
  std::map<const SyntaxNode*, int> enum_cache;
};

}  // namespace cryptolens::detail
