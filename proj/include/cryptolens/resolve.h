#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cryptolens/ingest.h"

namespace cryptolens {

enum class Residual { kUnknown, kNative, kNetwork, kExternalInput, kDepthExceeded };

std::string_view to_string(Residual r);

struct ResolutionBudget {
  int max_indirection = 2;  // nested method inlines / cross-method field reads
  int max_candidates = 16;
  long max_steps = 10'000;

  // Throws std::invalid_argument unless every limit is positive.
  void validate() const;
};

// Trace rule names. Classification and rules key off these.
namespace rule {
inline constexpr std::string_view kLiteral = "literal";
inline constexpr std::string_view kLocal = "local";
inline constexpr std::string_view kField = "field";
inline constexpr std::string_view kThisField = "this_field";
inline constexpr std::string_view kStaticFinal = "static_final";
inline constexpr std::string_view kEnumConstant = "enum_constant";
inline constexpr std::string_view kConcat = "concat";
inline constexpr std::string_view kSeparator = "separator";
inline constexpr std::string_view kBuilderAppend = "builder_append";
inline constexpr std::string_view kBuilderToString = "builder_to_string";
inline constexpr std::string_view kStringOp = "string_op";
inline constexpr std::string_view kFormat = "format";
inline constexpr std::string_view kNewString = "new_string";
inline constexpr std::string_view kBase64 = "base64_decode";
inline constexpr std::string_view kXor = "xor";
inline constexpr std::string_view kTernary = "ternary";
inline constexpr std::string_view kMethodInline = "method_inline";
inline constexpr std::string_view kNativeCall = "native_call";
inline constexpr std::string_view kNetwork = "network";
inline constexpr std::string_view kParameter = "parameter";
inline constexpr std::string_view kUnresolvedCall = "unresolved_call";
inline constexpr std::string_view kDecrypt = "decrypt";
inline constexpr std::string_view kSecureRandom = "secure_random";
inline constexpr std::string_view kDepthExceeded = "depth_exceeded";
}  // namespace rule

struct TraceStep {
  std::string rule;
  std::string detail;  // method or field name, operator, ...
  Span span;
  std::uint32_t line = 0;
  std::string intermediate;  // rendered value, may be empty
};

struct ResolvedValue {
  std::vector<std::string> candidates;  // sorted, unique
  std::set<Residual> residuals;
  std::vector<TraceStep> trace;
  // Concrete pieces of a partially resolved value; never candidates.
  std::vector<std::string> fragments;
  bool encrypted_param = false;  // value passes through a decrypt/doFinal
  bool secure_random = false;    // value comes from a CSPRNG or key generator

  bool has(Residual r) const { return residuals.count(r) > 0; }
  bool has_rule(std::string_view name) const;
  bool has_rule(std::string_view name, std::string_view detail) const;
};

// Evaluate `expr` (a node inside site's unit) to its possible runtime strings.
ResolvedValue resolve(const SyntaxNode& expr, const InvocationSite& site,
                      const ResolutionBudget& budget = {});

// Restrictive sites: the first argument. Nothing for flexible sites or an
// empty argument list.
std::optional<ResolvedValue> resolve_site(const InvocationSite& site,
                                          const ResolutionBudget& budget = {});

// Literals in the enclosing method (or field declaration) plus every literal
// the resolver touched.
std::set<std::string> visible_literals(const InvocationSite& site,
                                       const ResolvedValue* resolved = nullptr);

// Rendering used for byte-array results: the bytes when printable ASCII,
// otherwise "hex:<lowercase hex>".
std::string render_bytes(std::string_view bytes);

}  // namespace cryptolens
