#include "webcorpus/html/dom.hpp"

#include "webcorpus/text.hpp"

namespace webcorpus::html {

const std::string* Node::attribute(std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.name == attr) return &a.value;
  }
  return nullptr;
}

std::string Node::text_content() const {
  std::string out;
  std::vector<const Node*> stack{this};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->type == Type::kText) out += n->data;
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) {
      stack.push_back(it->get());
    }
  }
  return out;
}

Document::Document() : root_(std::make_unique<Node>()) {
  root_->type = Node::Type::kDocument;
}

Document::~Document() {
  if (!root_) return;
  // Flatten before destruction so teardown never recurses.
  std::vector<std::unique_ptr<Node>> pending;
  pending.push_back(std::move(root_));
  while (!pending.empty()) {
    auto node = std::move(pending.back());
    pending.pop_back();
    for (auto& child : node->children) pending.push_back(std::move(child));
  }
}

void Document::for_each_element(const std::function<void(const Node&)>& visit) const {
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->type == Node::Type::kElement) visit(*n);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) {
      stack.push_back(it->get());
    }
  }
}

std::size_t Document::count_elements(std::string_view local_name) const {
  std::size_t n = 0;
  for_each_element([&](const Node& e) {
    if (e.name == local_name) ++n;
  });
  return n;
}

bool has_class(const Node& element, std::string_view cls) {
  const std::string* value = element.attribute("class");
  if (!value) return false;
  for (const auto& token : split_whitespace(*value)) {
    if (token == cls) return true;
  }
  return false;
}

}  // namespace webcorpus::html
