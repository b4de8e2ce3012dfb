#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace cryptolens::detail {

// Object writer that lets floats keep their fixed six-decimal text.
class JsonObj {
 public:
  template <typename T>
  JsonObj& add(std::string_view key, const T& value) {
    return raw(key, nlohmann::ordered_json(value).dump());
  }
  JsonObj& raw(std::string_view key, const std::string& text) {
    out_ += out_.size() > 1 ? "," : "";
    out_ += nlohmann::ordered_json(std::string(key)).dump() + ":" + text;
    return *this;
  }
  std::string str() const { return out_ + "}"; }

 private:
  std::string out_ = "{";
};

}  // namespace cryptolens::detail
