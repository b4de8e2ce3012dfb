#include "cryptolens/syntax.h"

#include <cctype>

namespace cryptolens {

const SyntaxNode* SyntaxNode::child(std::string_view field_name) const {
  for (const auto& c : children) {
    if (c.field == field_name) {
      return &c;
    }
  }
  return nullptr;
}

std::vector<const SyntaxNode*> SyntaxNode::children_with_field(
    std::string_view field_name) const {
  std::vector<const SyntaxNode*> out;
  for (const auto& c : children) {
    if (c.field == field_name) {
      out.push_back(&c);
    }
  }
  return out;
}

const SyntaxNode* SyntaxNode::first_child_of_kind(std::string_view k) const {
  for (const auto& c : children) {
    if (c.kind == k) {
      return &c;
    }
  }
  return nullptr;
}

std::size_t SyntaxNode::descendant_count() const {
  std::size_t n = 0;
  for (const auto& c : children) {
    n += 1 + c.descendant_count();
  }
  return n;
}

bool is_anonymous_token_kind(std::string_view kind) {
  if (kind.empty()) {
    return true;
  }
  // Punctuation and operators never start with a letter or underscore.
  const auto first = static_cast<unsigned char>(kind.front());
  if (!std::isalpha(first) && first != '_') {
    return true;
  }
  static constexpr std::string_view kKeywords[] = {
      "abstract", "assert",    "break",     "case",     "catch",
      "class",    "continue",  "default",   "do",       "else",
      "enum",     "extends",   "final",     "finally",  "for",
      "if",       "implements", "import",   "instanceof", "interface",
      "native",   "new",       "package",   "private",  "protected",
      "public",   "return",    "static",    "strictfp", "switch",
      "synchronized", "throw", "throws",    "transient", "try",
      "volatile", "while",     "record",    "yield",    "permits",
      "sealed",   "non-sealed", "var",      "open",     "module",
      "requires", "exports",   "opens",    "int",      "char",
      "byte",     "short",     "long",      "float",    "double",
      "boolean",  "void",      "to",        "with",     "transitive",
      "uses",     "provides"};
  for (auto kw : kKeywords) {
    if (kind == kw) {
      return true;
    }
  }
  return false;
}

const SyntaxNode* unwrap_parens(const SyntaxNode* node) {
  while (node != nullptr && node->kind == "parenthesized_expression" &&
         node->children.size() == 1) {
    node = &node->children.front();
  }
  return node;
}

const SyntaxNode* enclosing(const SyntaxNode* node,
                            std::initializer_list<std::string_view> kinds) {
  for (const SyntaxNode* p = node ? node->parent : nullptr; p != nullptr;
       p = p->parent) {
    for (auto k : kinds) {
      if (p->kind == k) {
        return p;
      }
    }
  }
  return nullptr;
}

bool has_modifier(const SyntaxNode& decl, std::string_view keyword) {
  const SyntaxNode* mods = decl.first_child_of_kind("modifiers");
  if (mods == nullptr) {
    return false;
  }
  std::string_view text = mods->text;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           !(std::isalnum(static_cast<unsigned char>(text[i])) ||
             text[i] == '@' || text[i] == '_')) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[j])) ||
            text[j] == '@' || text[j] == '_' || text[j] == '.')) {
      ++j;
    }
    if (text.substr(i, j - i) == keyword) {
      return true;
    }
    i = j;
  }
  return false;
}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string decode_java_literal(std::string_view literal) {
  if (literal.size() >= 2 && (literal.front() == '"' || literal.front() == '\'') &&
      literal.back() == literal.front()) {
    literal = literal.substr(1, literal.size() - 2);
  }
  std::string out;
  out.reserve(literal.size());
  for (std::size_t i = 0; i < literal.size(); ++i) {
    char c = literal[i];
    if (c != '\\' || i + 1 >= literal.size()) {
      out.push_back(c);
      continue;
    }
    char e = literal[++i];
    switch (e) {
      case 'b': out.push_back('\b'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'f': out.push_back('\f'); break;
      case 'r': out.push_back('\r'); break;
      case 's': out.push_back(' '); break;
      case '"': out.push_back('"'); break;
      case '\'': out.push_back('\''); break;
      case '\\': out.push_back('\\'); break;
      case 'u': {
        while (i + 1 < literal.size() && literal[i + 1] == 'u') {
          ++i;
        }
        std::uint32_t cp = 0;
        int digits = 0;
        while (digits < 4 && i + 1 < literal.size() &&
               hex_value(literal[i + 1]) >= 0) {
          cp = cp * 16 + static_cast<std::uint32_t>(hex_value(literal[++i]));
          ++digits;
        }
        append_utf8(out, cp);
        break;
      }
      default:
        if (e >= '0' && e <= '7') {
          std::uint32_t v = static_cast<std::uint32_t>(e - '0');
          int max_digits = e <= '3' ? 3 : 2;
          int digits = 1;
          while (digits < max_digits && i + 1 < literal.size() &&
                 literal[i + 1] >= '0' && literal[i + 1] <= '7') {
            v = v * 8 + static_cast<std::uint32_t>(literal[++i] - '0');
            ++digits;
          }
          append_utf8(out, v);
        } else {
          out.push_back(e);
        }
    }
  }
  return out;
}

}  // namespace cryptolens
