#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cryptolens/report.h"

namespace cryptolens {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
  T value{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError(where + ": not a number: " + std::string(text));
  }
  return value;
}

double parse_double(std::string_view text, const std::string& where) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(where + ": not a number: " + s);
  return v;
}

bool is_oid(std::string_view s) {
  if (s.empty() || s.front() == '.' || s.back() == '.') return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
}

}  // namespace

std::optional<Severity> parse_fail_on(std::string_view text) {
  std::string t = lower(trim(text));
  if (t == "none") return std::nullopt;
  auto s = parse_severity(t);
  if (!s) throw ConfigError("fail_on must be error, warning, info or none: " + std::string(text));
  return s;
}

std::string fail_on_name(const std::optional<Severity>& fail_on) {
  return fail_on ? std::string(to_string(*fail_on)) : "NONE";
}

void apply_config_text(std::string_view text, ScanConfig& config) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string where = "config line " + std::to_string(lineno);
    std::string_view line = trim(raw);
    // A '#' after whitespace starts a trailing comment.
    for (std::size_t i = 1; i < line.size(); ++i) {
      if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line = trim(line.substr(0, i));
        break;
      }
    }
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    std::string key = lower(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + ": empty value for " + key);
    try {
      if (key == "api") {
        if (auto kind = parse_api_kind(value)) {
          config.apis.kinds.insert(*kind);
        } else {
          auto sig = ApiSignature::parse(value);
          config.apis.kinds.insert(sig.kind);
          config.apis.extra.push_back(sig);
        }
      } else if (key.rfind("oid.", 0) == 0) {
        std::string oid = key.substr(4);
        if (!is_oid(oid)) throw ConfigError(where + ": bad OID " + oid);
        config.extra_oids[oid] = std::string(value);
      } else if (key == "max_indirection") {
        config.budget.max_indirection = parse_number<int>(value, where);
      } else if (key == "max_candidates") {
        config.budget.max_candidates = parse_number<int>(value, where);
      } else if (key == "max_steps") {
        config.budget.max_steps = parse_number<long>(value, where);
      } else if (key == "confidence") {
        config.confidence = parse_double(value, where);
      } else if (key == "margin") {
        config.margin = parse_double(value, where);
      } else if (key == "seed") {
        config.seed = parse_number<std::uint64_t>(value, where);
      } else if (key == "fail_on") {
        config.fail_on = parse_fail_on(value);
      } else if (key == "mode") {
        config.mode = parse_strata_mode(std::string(value));
      } else if (key == "jobs") {
        config.jobs = parse_number<unsigned>(value, where);
      } else if (key == "output") {
        config.output = std::string(value);
      } else if (key == "csv_output") {
        config.csv_output = std::string(value);
      } else {
        throw ConfigError(where + ": unknown key " + key);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  try {
    config.budget.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScanConfig load_config(const std::filesystem::path& path, ScanConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  apply_config_text(os.str(), base);
  return base;
}

ArgumentSignature parse_signature(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw std::invalid_argument("unbalanced braces in signature");
    s = trim(s.substr(1, s.size() - 2));
  }
  ArgumentSignature sig;
  while (!s.empty()) {
    auto comma = s.find(',');
    std::string_view item = trim(s.substr(0, comma));
    s = comma == std::string_view::npos ? std::string_view{} : trim(s.substr(comma + 1));
    auto colon = item.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("expected kind:count in signature");
    std::string kind(trim(item.substr(0, colon)));
    std::string_view count = trim(item.substr(colon + 1));
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (kind.empty() || ec != std::errc() || p != count.data() + count.size() || n == 0) {
      throw std::invalid_argument("bad signature entry: " + std::string(item));
    }
    sig[kind] += n;
  }
  // "{}" is a valid pattern: it matches sites with an empty subtree.
  return sig;
}

}  // namespace cryptolens
