#pragma once

// Direct tree-sitter queries, independent of the normalized tree.
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <tree_sitter/api.h>

extern "C" const TSLanguage* tree_sitter_java();

namespace cryptolens::testing {

// Kind histogram of the named descendants of the argument list of the call
// starting at `call_offset`. Comments are skipped.
inline std::map<std::string, std::size_t> raw_argument_kinds(const std::string& text, std::uint32_t call_offset) {
  TSParser* parser = ts_parser_new();
  ts_parser_set_language(parser, tree_sitter_java());
  TSTree* tree = ts_parser_parse_string(parser, nullptr, text.data(), static_cast<uint32_t>(text.size()));
  TSNode root = ts_tree_root_node(tree);
  TSNode call = ts_node_named_descendant_for_byte_range(root, call_offset, call_offset + 1);
  while (!ts_node_is_null(call) && ts_node_start_byte(call) == call_offset &&
         std::string(ts_node_type(call)) != "method_invocation" &&
         std::string(ts_node_type(call)) != "object_creation_expression") {
    call = ts_node_parent(call);
  }
  TSNode args = ts_node_child_by_field_name(call, "arguments", 9);
  std::map<std::string, std::size_t> kinds;
  std::vector<TSNode> stack;
  for (uint32_t i = 0; i < ts_node_named_child_count(args); ++i) stack.push_back(ts_node_named_child(args, i));
  while (!stack.empty()) {
    TSNode node = stack.back();
    stack.pop_back();
    std::string kind = ts_node_type(node);
    if (kind == "line_comment" || kind == "block_comment" || kind == "comment") continue;
    ++kinds[kind];
    for (uint32_t i = 0; i < ts_node_named_child_count(node); ++i) stack.push_back(ts_node_named_child(node, i));
  }
  ts_tree_delete(tree);
  ts_parser_delete(parser);
  return kinds;
}

inline std::size_t raw_argument_nodes(const std::string& text, std::uint32_t call_offset) {
  std::size_t n = 0;
  for (const auto& [k, c] : raw_argument_kinds(text, call_offset)) n += c;
  return n;
}

}  // namespace cryptolens::testing
