#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cryptolens {

struct Span {
  std::uint32_t start = 0;  // byte offset, inclusive
  std::uint32_t end = 0;    // byte offset, exclusive

  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// A node of the normalized syntax tree. Only grammar-named nodes survive
// normalization; punctuation and keyword tokens are dropped. Operator
// tokens are folded into `op` on the node that owns them.
struct SyntaxNode {
  std::string kind;
  std::string field;  // field name under the parent, empty if none
  std::string op;     // operator token for binary/unary/assignment/update
  Span span;
  std::uint32_t start_line = 0;  // 1-based
  std::uint32_t end_line = 0;
  bool error = false;  // ERROR or MISSING node produced by error recovery
  std::string_view text;
  std::vector<SyntaxNode> children;
  const SyntaxNode* parent = nullptr;

  const SyntaxNode* child(std::string_view field_name) const;
  std::vector<const SyntaxNode*> children_with_field(
      std::string_view field_name) const;
  const SyntaxNode* first_child_of_kind(std::string_view k) const;
  bool is(std::string_view k) const { return kind == k; }

  // Number of named nodes strictly below this one.
  std::size_t descendant_count() const;

  template <typename Fn>
  void walk(Fn&& fn) const {
    fn(*this);
    for (const auto& c : children) {
      c.walk(fn);
    }
  }
};

// Kinds treated as anonymous tokens. Never present after normalization.
bool is_anonymous_token_kind(std::string_view kind);

// Strip a single pair of surrounding parentheses nodes.
const SyntaxNode* unwrap_parens(const SyntaxNode* node);

// Walk up to the nearest ancestor of one of the given kinds.
const SyntaxNode* enclosing(const SyntaxNode* node,
                            std::initializer_list<std::string_view> kinds);

// Whether a declaration's `modifiers` child contains the keyword.
bool has_modifier(const SyntaxNode& decl, std::string_view keyword);

// Decode a Java string or character literal body, including escapes.
std::string decode_java_literal(std::string_view literal);

}  // namespace cryptolens
