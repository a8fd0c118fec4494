#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace webcorpus::html {

enum class Namespace { kHtml, kSvg, kMathMl };

struct Attribute {
  std::string name;
  std::string value;
};

struct Node {
  enum class Type { kDocument, kDoctype, kElement, kText, kComment };

  Type type = Type::kElement;
  Namespace ns = Namespace::kHtml;
  std::string name;  // lowercase local name for elements, doctype name
  std::string data;  // text and comment payload
  std::vector<Attribute> attributes;
  Node* parent = nullptr;
  std::vector<std::unique_ptr<Node>> children;

  bool is_element(std::string_view local_name) const {
    return type == Type::kElement && name == local_name;
  }
  const std::string* attribute(std::string_view attr) const;
  bool has_attribute(std::string_view attr) const { return attribute(attr) != nullptr; }
  std::string text_content() const;
};

class Document {
 public:
  Document();
  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;
  ~Document();

  Node& root() { return *root_; }
  const Node& root() const { return *root_; }

  // Pre-order walk over element nodes. Iterative, so arbitrarily deep trees
  // are safe.
  void for_each_element(const std::function<void(const Node&)>& visit) const;

  std::size_t count_elements(std::string_view local_name) const;

 private:
  std::unique_ptr<Node> root_;
};

// Classic class-list and id matching used by simple selectors.
bool has_class(const Node& element, std::string_view cls);

}  // namespace webcorpus::html
