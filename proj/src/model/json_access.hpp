#pragma once

// Path-tracking accessors for reading JSON documents with precise errors.

#include <string>

#include <nlohmann/json.hpp>

#include "recad/error.hpp"

namespace recad::detail {

template <typename Json>
class JsonView {
 public:
  JsonView(const Json& node, std::string path) : node_(&node), path_(std::move(path)) {}

  const Json& node() const { return *node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCategory::kParse, (path_.empty() ? std::string("$") : path_) + ": " + what);
  }

  bool has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

  JsonView at(const std::string& key) const {
    if (!node_->is_object()) fail("expected an object");
    const auto it = node_->find(key);
    if (it == node_->end()) fail("missing field \"" + key + "\"");
    return {*it, path_.empty() ? key : path_ + "." + key};
  }

  JsonView at(std::size_t index) const {
    if (!node_->is_array()) fail("expected an array");
    if (index >= node_->size()) fail("index " + std::to_string(index) + " out of range");
    return {(*node_)[index], path_ + "[" + std::to_string(index) + "]"};
  }

  std::size_t size() const {
    if (!node_->is_array()) fail("expected an array");
    return node_->size();
  }

  double number() const {
    if (!node_->is_number()) fail("expected a number");
    return node_->template get<double>();
  }

  bool boolean() const {
    if (!node_->is_boolean()) fail("expected true or false");
    return node_->template get<bool>();
  }

  std::string string() const {
    if (!node_->is_string()) fail("expected a string");
    return node_->template get<std::string>();
  }

 private:
  const Json* node_;
  std::string path_;
};

}  // namespace recad::detail
