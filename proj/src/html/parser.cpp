#include "webcorpus/html/parser.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "webcorpus/text.hpp"

namespace webcorpus::html {
namespace {

// ---------------------------------------------------------------------------
// Character references

struct NamedEntity {
  std::string_view name;
  char32_t code;
  bool legacy;  // recognised without a trailing ';'
};

constexpr NamedEntity kEntities[] = {
    {"amp", U'&', true},       {"lt", U'<', true},        {"gt", U'>', true},
    {"quot", U'"', true},      {"apos", U'\'', false},    {"nbsp", 0xA0, true},
    {"copy", 0xA9, true},      {"reg", 0xAE, true},       {"trade", 0x2122, false},
    {"hellip", 0x2026, false}, {"mdash", 0x2014, false},  {"ndash", 0x2013, false},
    {"laquo", 0xAB, true},     {"raquo", 0xBB, true},     {"lsquo", 0x2018, false},
    {"rsquo", 0x2019, false},  {"ldquo", 0x201C, false},  {"rdquo", 0x201D, false},
    {"euro", 0x20AC, false},   {"pound", 0xA3, true},     {"yen", 0xA5, true},
    {"cent", 0xA2, true},      {"sect", 0xA7, true},      {"deg", 0xB0, true},
    {"middot", 0xB7, true},    {"bull", 0x2022, false},   {"times", 0xD7, true},
    {"divide", 0xF7, true},    {"aacute", 0xE1, true},    {"eacute", 0xE9, true},
    {"iacute", 0xED, true},    {"oacute", 0xF3, true},    {"uacute", 0xFA, true},
    {"ntilde", 0xF1, true},    {"Ntilde", 0xD1, true},    {"uuml", 0xFC, true},
    {"ouml", 0xF6, true},      {"auml", 0xE4, true},      {"szlig", 0xDF, true},
    {"ccedil", 0xE7, true},    {"iexcl", 0xA1, true},     {"iquest", 0xBF, true},
};

void append_utf8(std::string& out, char32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

// Tries to decode a reference starting at text[i] == '&'. On success appends
// the decoded text and returns the number of bytes consumed.
std::size_t decode_reference(std::string_view text, std::size_t i, bool in_attribute,
                             std::string& out) {
  std::size_t j = i + 1;
  if (j < text.size() && text[j] == '#') {
    ++j;
    bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
    if (hex) ++j;
    std::size_t start = j;
    char32_t cp = 0;
    while (j < text.size() &&
           (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                : std::isdigit(static_cast<unsigned char>(text[j])))) {
      char d = text[j];
      int digit = d <= '9' ? d - '0' : (d | 0x20) - 'a' + 10;
      if (cp <= 0x10FFFF) cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(digit);
      ++j;
    }
    if (j == start) return 0;
    if (j < text.size() && text[j] == ';') ++j;
    append_utf8(out, cp);
    return j - i;
  }
  std::size_t start = j;
  while (j < text.size() && is_alnum(text[j])) ++j;
  std::string_view name = text.substr(start, j - start);
  if (name.empty()) return 0;
  bool semicolon = j < text.size() && text[j] == ';';
  for (const auto& e : kEntities) {
    if (e.name != name) continue;
    if (!semicolon) {
      if (!e.legacy) return 0;
      // In attribute values "&amp=" and "&ampx" stay literal.
      if (in_attribute && j < text.size() && (text[j] == '=' || is_alnum(text[j]))) {
        return 0;
      }
    }
    append_utf8(out, e.code);
    return j - i + (semicolon ? 1 : 0);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Tokenizer

struct Token {
  enum class Type { kStartTag, kEndTag, kText, kComment, kDoctype, kEof };
  Type type = Type::kEof;
  std::string name;
  std::string data;
  std::vector<Attribute> attributes;
  bool self_closing = false;

  const std::string* attribute(std::string_view attr) const {
    for (const auto& a : attributes) {
      if (a.name == attr) return &a.value;
    }
    return nullptr;
  }
};

enum class TextMode { kData, kRcData, kRawText, kScriptData, kPlainText };

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  void set_mode(TextMode mode, std::string end_tag = {}) {
    mode_ = mode;
    end_tag_ = std::move(end_tag);
  }

  Token next() {
    if (pos_ >= in_.size()) return Token{};
    switch (mode_) {
      case TextMode::kPlainText: {
        Token t = text_token(in_.substr(pos_), false);
        pos_ = in_.size();
        return t;
      }
      case TextMode::kRcData:
      case TextMode::kRawText:
      case TextMode::kScriptData:
        return raw_text();
      case TextMode::kData:
        break;
    }
    if (in_[pos_] != '<') {
      auto lt = in_.find('<', pos_);
      if (lt == std::string_view::npos) lt = in_.size();
      Token t = text_token(in_.substr(pos_, lt - pos_), true);
      pos_ = lt;
      return t;
    }
    return markup();
  }

 private:
  static Token text_token(std::string_view raw, bool decode) {
    Token t;
    t.type = Token::Type::kText;
    t.data = decode ? decode_entities(raw) : std::string(raw);
    return t;
  }

  // Text of a raw-text element up to its matching end tag.
  Token raw_text() {
    std::size_t search = pos_;
    std::size_t end = in_.size();
    while (true) {
      auto lt = in_.find("</", search);
      if (lt == std::string_view::npos) break;
      std::size_t after = lt + 2 + end_tag_.size();
      if (after < in_.size() &&
          iequals(in_.substr(lt + 2, end_tag_.size()), end_tag_) &&
          (is_ws(in_[after]) || in_[after] == '/' || in_[after] == '>')) {
        end = lt;
        break;
      }
      search = lt + 2;
    }
    bool decode = mode_ == TextMode::kRcData;
    mode_ = TextMode::kData;
    Token t = text_token(in_.substr(pos_, end - pos_), decode);
    pos_ = end;
    if (t.data.empty()) return next();
    return t;
  }

  Token markup() {
    std::size_t p = pos_ + 1;
    if (p >= in_.size()) {
      pos_ = in_.size();
      return text_token("<", false);
    }
    char c = in_[p];
    if (c == '!') {
      if (in_.substr(p + 1, 2) == "--") return comment(p + 3);
      if (starts_with_icase(in_.substr(p + 1), "doctype")) return doctype(p + 8);
      return bogus_comment(p + 1);
    }
    if (c == '?') return bogus_comment(p);
    if (c == '/') {
      if (p + 1 >= in_.size()) {
        pos_ = in_.size();
        return text_token("</", false);
      }
      char d = in_[p + 1];
      if (d == '>') {
        pos_ = p + 2;
        return next();
      }
      if (!is_alpha(d)) return bogus_comment(p + 1);
      return tag(p + 1, Token::Type::kEndTag);
    }
    if (is_alpha(c)) return tag(p, Token::Type::kStartTag);
    // A lone '<' is literal text.
    auto lt = in_.find('<', p);
    if (lt == std::string_view::npos) lt = in_.size();
    Token t = text_token(in_.substr(pos_, lt - pos_), true);
    pos_ = lt;
    return t;
  }

  Token comment(std::size_t start) {
    Token t;
    t.type = Token::Type::kComment;
    // "<!-->" and "<!--->" close immediately.
    if (in_.substr(start, 1) == ">") {
      pos_ = start + 1;
      return t;
    }
    if (in_.substr(start, 2) == "->") {
      pos_ = start + 2;
      return t;
    }
    std::size_t end = start;
    while (true) {
      end = in_.find("--", end);
      if (end == std::string_view::npos) {
        t.data = std::string(in_.substr(start));
        pos_ = in_.size();
        return t;
      }
      if (in_.substr(end + 2, 1) == ">") {
        t.data = std::string(in_.substr(start, end - start));
        pos_ = end + 3;
        return t;
      }
      if (in_.substr(end + 2, 2) == "!>") {
        t.data = std::string(in_.substr(start, end - start));
        pos_ = end + 4;
        return t;
      }
      ++end;
    }
  }

  Token bogus_comment(std::size_t start) {
    Token t;
    t.type = Token::Type::kComment;
    auto gt = in_.find('>', start);
    if (gt == std::string_view::npos) gt = in_.size();
    t.data = std::string(in_.substr(start, gt - start));
    pos_ = std::min(gt + 1, in_.size());
    return t;
  }

  Token doctype(std::size_t start) {
    Token t;
    t.type = Token::Type::kDoctype;
    auto gt = in_.find('>', start);
    if (gt == std::string_view::npos) gt = in_.size();
    auto words = split_whitespace(in_.substr(start, gt - start));
    if (!words.empty()) t.name = to_lower(words.front());
    pos_ = std::min(gt + 1, in_.size());
    return t;
  }

  Token tag(std::size_t p, Token::Type type) {
    Token t;
    t.type = type;
    std::size_t n = in_.size();
    while (p < n && !is_ws(in_[p]) && in_[p] != '/' && in_[p] != '>') {
      t.name += in_[p];
      ++p;
    }
    t.name = to_lower(t.name);
    while (true) {
      while (p < n && (is_ws(in_[p]) || in_[p] == '/')) {
        if (in_[p] == '/' && p + 1 < n && in_[p + 1] == '>') {
          t.self_closing = true;
          ++p;
          break;
        }
        ++p;
      }
      if (p >= n) {
        // EOF inside a tag drops the tag.
        pos_ = n;
        return Token{};
      }
      if (in_[p] == '>') {
        pos_ = p + 1;
        if (type == Token::Type::kEndTag) {
          t.attributes.clear();
          t.self_closing = false;
        }
        return t;
      }
      std::string name;
      // '=' is allowed as the first character of an attribute name.
      name += in_[p++];
      while (p < n && !is_ws(in_[p]) && in_[p] != '/' && in_[p] != '>' && in_[p] != '=') {
        name += in_[p++];
      }
      name = to_lower(name);
      std::size_t q = p;
      while (q < n && is_ws(in_[q])) ++q;
      std::string value;
      if (q < n && in_[q] == '=') {
        ++q;
        while (q < n && is_ws(in_[q])) ++q;
        if (q < n && (in_[q] == '"' || in_[q] == '\'')) {
          char quote = in_[q++];
          auto close = in_.find(quote, q);
          if (close == std::string_view::npos) {
            pos_ = n;
            return Token{};
          }
          value = decode_entities(in_.substr(q, close - q), true);
          p = close + 1;
        } else {
          std::size_t start = q;
          while (q < n && !is_ws(in_[q]) && in_[q] != '>') ++q;
          value = decode_entities(in_.substr(start, q - start), true);
          p = q;
        }
      }
      bool duplicate = std::any_of(t.attributes.begin(), t.attributes.end(),
                                   [&](const Attribute& a) { return a.name == name; });
      if (!duplicate) t.attributes.push_back({std::move(name), std::move(value)});
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  TextMode mode_ = TextMode::kData;
  std::string end_tag_;
};

// ---------------------------------------------------------------------------
// Tree construction

using NameSet = std::unordered_set<std::string_view>;

const NameSet kVoid = {"area", "base", "basefont", "bgsound", "br",    "col",
                       "embed", "frame", "hr",     "img",     "input", "keygen",
                       "link", "meta",  "param",   "source",  "track", "wbr"};

const NameSet kHeadContent = {"base",     "basefont", "bgsound", "link",  "meta",
                              "noframes", "script",   "style",   "template",
                              "title",    "noscript"};

const NameSet kClosesParagraph = {
    "address", "article", "aside",  "blockquote", "center", "details", "dialog",
    "dir",     "div",     "dl",     "fieldset",   "figcaption", "figure", "footer",
    "header",  "hgroup",  "main",   "menu",       "nav",    "ol",      "p",
    "search",  "section", "summary", "ul"};

const NameSet kBlockEnd = {
    "address", "applet", "article", "aside", "blockquote", "button", "center",
    "details", "dialog", "dir",     "div",   "dl",         "fieldset", "figcaption",
    "figure",  "footer", "header",  "hgroup", "listing",   "main",    "marquee",
    "menu",    "nav",    "object",  "ol",     "pre",       "search",  "section",
    "summary", "ul"};

const NameSet kHeadings = {"h1", "h2", "h3", "h4", "h5", "h6"};

const NameSet kSpecial = {
    "address",  "applet",   "area",     "article",  "aside",    "base",     "basefont",
    "bgsound",  "blockquote", "body",   "br",       "button",   "caption",  "center",
    "col",      "colgroup", "dd",       "details",  "dir",      "div",      "dl",
    "dt",       "embed",    "fieldset", "figcaption", "figure", "footer",   "form",
    "frame",    "frameset", "h1",       "h2",       "h3",       "h4",       "h5",
    "h6",       "head",     "header",   "hgroup",   "hr",       "html",     "iframe",
    "img",      "input",    "keygen",   "li",       "link",     "listing",  "main",
    "marquee",  "menu",     "meta",     "nav",      "noembed",  "noframes", "noscript",
    "object",   "ol",       "p",        "param",    "plaintext", "pre",     "script",
    "search",   "section",  "select",   "source",   "style",    "summary",  "table",
    "tbody",    "td",       "template", "textarea", "tfoot",    "th",       "thead",
    "title",    "tr",       "track",    "ul",       "wbr",      "xmp"};

const NameSet kImpliedEnd = {"dd", "dt", "li", "optgroup", "option", "p", "rb", "rp", "rt", "rtc"};

const NameSet kTableContext = {"table", "tbody", "thead", "tfoot", "tr",       "td",
                               "th",    "caption", "colgroup", "select", "template"};

const NameSet kFosterTargets = {"table", "tbody", "tfoot", "thead", "tr"};

const NameSet kForeignBreakout = {
    "b",   "big",   "blockquote", "body", "br",     "center", "code",   "dd",     "div",
    "dl",  "dt",    "em",         "embed", "h1",    "h2",     "h3",     "h4",     "h5",
    "h6",  "head",  "hr",         "i",    "img",    "li",     "listing", "menu",  "meta",
    "nobr", "ol",   "p",          "pre",  "ruby",   "s",      "small",  "span",   "strong",
    "strike", "sub", "sup",       "table", "tt",    "u",      "ul",     "var"};

bool contains(const NameSet& set, std::string_view name) { return set.count(name) > 0; }

enum class Phase { kBeforeHtml, kBeforeHead, kInHead, kAfterHead, kInBody };

enum class Mode {
  kInBody,
  kInTable,
  kInTableBody,
  kInRow,
  kInCell,
  kInCaption,
  kInColumnGroup,
  kInSelect,
  kInSelectInTable,
};

class TreeBuilder {
 public:
  TreeBuilder(std::string_view markup, const ParseOptions& options)
      : tokenizer_(markup), options_(options) {}

  Document run() {
    while (true) {
      Token token = tokenizer_.next();
      if (token.type == Token::Type::kEof) break;
      if (skip_newline_) {
        skip_newline_ = false;
        if (token.type == Token::Type::kText && !token.data.empty() &&
            token.data.front() == '\n') {
          token.data.erase(0, 1);
          if (token.data.empty()) continue;
        }
      }
      process(token);
    }
    if (phase_ != Phase::kInBody) ensure_body();
    return std::move(doc_);
  }

 private:
  // --- stack helpers -------------------------------------------------------

  Node* current() const { return open_.empty() ? nullptr : open_.back(); }

  bool is_html(const Node* n, std::string_view name) const {
    return n && n->ns == Namespace::kHtml && n->name == name;
  }

  void push(Node* n) {
    open_.push_back(n);
    if (n->ns == Namespace::kHtml) ++open_count_[n->name];
    if (n->ns == Namespace::kHtml && contains(kTableContext, n->name)) {
      context_.push_back(open_.size() - 1);
    }
  }

  void pop() {
    if (open_.empty()) return;
    if (!context_.empty() && context_.back() == open_.size() - 1) context_.pop_back();
    if (open_.back()->ns == Namespace::kHtml) --open_count_[open_.back()->name];
    open_.pop_back();
  }

  void remove_from_stack(Node* n) {
    auto it = std::find(open_.begin(), open_.end(), n);
    if (it == open_.end()) return;
    std::size_t index = static_cast<std::size_t>(it - open_.begin());
    if (n->ns == Namespace::kHtml) --open_count_[n->name];
    open_.erase(it);
    context_.erase(std::remove(context_.begin(), context_.end(), index), context_.end());
    for (auto& c : context_) {
      if (c > index) --c;
    }
  }

  // Pops up to and including the nearest HTML element with one of `names`.
  void pop_until(std::initializer_list<std::string_view> names) {
    while (!open_.empty()) {
      Node* n = current();
      bool match = n->ns == Namespace::kHtml &&
                   std::find(names.begin(), names.end(), n->name) != names.end();
      pop();
      if (match) return;
    }
  }

  void pop_until(std::string_view name) { pop_until({name}); }

  // Pops while the current node is not one of `names` (or html).
  void clear_back_to(std::initializer_list<std::string_view> names) {
    while (open_.size() > 1) {
      Node* n = current();
      if (n->ns == Namespace::kHtml &&
          (n->name == "html" ||
           std::find(names.begin(), names.end(), n->name) != names.end())) {
        return;
      }
      pop();
    }
  }

  enum class Scope { kDefault, kButton, kListItem, kTable, kSelect };

  static bool scope_boundary(const Node* n, Scope scope) {
    if (n->ns == Namespace::kSvg) {
      return scope != Scope::kTable && scope != Scope::kSelect &&
             (n->name == "foreignobject" || n->name == "desc" || n->name == "title");
    }
    if (n->ns == Namespace::kMathMl) {
      return scope != Scope::kTable && scope != Scope::kSelect &&
             (n->name == "mi" || n->name == "mo" || n->name == "mn" || n->name == "ms" ||
              n->name == "mtext" || n->name == "annotation-xml");
    }
    const std::string& name = n->name;
    switch (scope) {
      case Scope::kTable:
        return name == "html" || name == "table" || name == "template";
      case Scope::kSelect:
        return name != "optgroup" && name != "option";
      case Scope::kButton:
        if (name == "button") return true;
        break;
      case Scope::kListItem:
        if (name == "ol" || name == "ul") return true;
        break;
      case Scope::kDefault:
        break;
    }
    return name == "applet" || name == "caption" || name == "html" || name == "table" ||
           name == "td" || name == "th" || name == "marquee" || name == "object" ||
           name == "template";
  }

  bool is_open(std::string_view name) const {
    auto it = open_count_.find(std::string(name));
    return it != open_count_.end() && it->second > 0;
  }

  bool in_scope(std::initializer_list<std::string_view> names,
                Scope scope = Scope::kDefault) const {
    if (std::none_of(names.begin(), names.end(),
                     [&](std::string_view n) { return is_open(n); })) {
      return false;
    }
    for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
      const Node* n = *it;
      if (n->ns == Namespace::kHtml &&
          std::find(names.begin(), names.end(), n->name) != names.end()) {
        return true;
      }
      if (scope_boundary(n, scope)) return false;
    }
    return false;
  }

  bool in_scope(std::string_view name, Scope scope = Scope::kDefault) const {
    return in_scope({name}, scope);
  }

  void generate_implied_end_tags(std::string_view except = {}) {
    while (Node* n = current()) {
      if (n->ns != Namespace::kHtml || !contains(kImpliedEnd, n->name) || n->name == except) {
        return;
      }
      pop();
    }
  }

  void close_p() {
    if (in_scope("p", Scope::kButton)) {
      generate_implied_end_tags("p");
      pop_until("p");
    }
  }

  Mode mode() const {
    if (context_.empty()) return Mode::kInBody;
    const std::string& name = open_[context_.back()]->name;
    if (name == "table") return Mode::kInTable;
    if (name == "tbody" || name == "thead" || name == "tfoot") return Mode::kInTableBody;
    if (name == "tr") return Mode::kInRow;
    if (name == "td" || name == "th") return Mode::kInCell;
    if (name == "caption") return Mode::kInCaption;
    if (name == "colgroup") return Mode::kInColumnGroup;
    if (name == "select") {
      return context_.size() > 1 && open_[context_[context_.size() - 2]]->name != "template"
                 ? Mode::kInSelectInTable
                 : Mode::kInSelect;
    }
    return Mode::kInBody;
  }

  // --- insertion -----------------------------------------------------------

  struct Location {
    Node* parent;
    std::size_t index;  // insertion index in parent->children
  };

  Location insertion_location(bool foster) {
    Node* target = current();
    if (foster && target && target->ns == Namespace::kHtml &&
        contains(kFosterTargets, target->name)) {
      for (std::size_t i = open_.size(); i-- > 0;) {
        if (!is_html(open_[i], "table")) continue;
        Node* table = open_[i];
        if (Node* parent = table->parent) {
          auto pos = std::find_if(parent->children.begin(), parent->children.end(),
                                  [&](const auto& c) { return c.get() == table; });
          return {parent, static_cast<std::size_t>(pos - parent->children.begin())};
        }
        Node* below = i > 0 ? open_[i - 1] : table;
        return {below, below->children.size()};
      }
    }
    if (open_.size() > options_.max_depth) target = open_[options_.max_depth - 1];
    return {target, target->children.size()};
  }

  Node* attach(std::unique_ptr<Node> node, const Location& at) {
    node->parent = at.parent;
    Node* raw = node.get();
    at.parent->children.insert(at.parent->children.begin() +
                                   static_cast<std::ptrdiff_t>(at.index),
                               std::move(node));
    return raw;
  }

  Node* insert_element(const Token& token, Namespace ns = Namespace::kHtml,
                       bool foster = false) {
    auto node = std::make_unique<Node>();
    node->type = Node::Type::kElement;
    node->ns = ns;
    node->name = token.name;
    node->attributes = token.attributes;
    Node* raw = attach(std::move(node), insertion_location(foster));
    push(raw);
    return raw;
  }

  void insert_text(std::string_view text, bool foster = false) {
    if (text.empty()) return;
    Location at = insertion_location(foster);
    if (at.index > 0) {
      Node* prev = at.parent->children[at.index - 1].get();
      if (prev->type == Node::Type::kText) {
        prev->data += text;
        return;
      }
    }
    auto node = std::make_unique<Node>();
    node->type = Node::Type::kText;
    node->data = std::string(text);
    attach(std::move(node), at);
  }

  void insert_comment(const Token& token) {
    auto node = std::make_unique<Node>();
    node->type = Node::Type::kComment;
    node->data = token.data;
    if (open_.empty()) {
      node->parent = &doc_.root();
      doc_.root().children.push_back(std::move(node));
    } else {
      attach(std::move(node), insertion_location(false));
    }
  }

  // Inserts an HTML element honouring void and raw-text semantics.
  void insert_html(Token token, bool foster = false) {
    if (token.name == "image") token.name = "img";
    const std::string& name = token.name;
    insert_element(token, Namespace::kHtml, foster);
    if (contains(kVoid, name)) {
      pop();
      return;
    }
    if (name == "script" || name == "style" || name == "xmp" || name == "iframe" ||
        name == "noembed" || name == "noframes" || name == "noscript" || name == "title" ||
        name == "textarea") {
      text_element_ = current();
    }
    if (name == "script") {
      tokenizer_.set_mode(TextMode::kScriptData, name);
    } else if (name == "style" || name == "xmp" || name == "iframe" || name == "noembed" ||
               name == "noframes" || name == "noscript") {
      tokenizer_.set_mode(TextMode::kRawText, name);
    } else if (name == "title" || name == "textarea") {
      tokenizer_.set_mode(TextMode::kRcData, name);
      if (name == "textarea") skip_newline_ = true;
    } else if (name == "plaintext") {
      tokenizer_.set_mode(TextMode::kPlainText);
    } else if (name == "pre" || name == "listing") {
      skip_newline_ = true;
    }
  }

  void merge_attributes(Node* target, const Token& token) {
    if (!target) return;
    for (const auto& a : token.attributes) {
      if (!target->has_attribute(a.name)) target->attributes.push_back(a);
    }
  }

  void ensure_html() {
    if (html_) return;
    auto node = std::make_unique<Node>();
    node->type = Node::Type::kElement;
    node->name = "html";
    node->parent = &doc_.root();
    html_ = node.get();
    doc_.root().children.push_back(std::move(node));
    push(html_);
  }

  void ensure_head() {
    ensure_html();
    if (head_) return;
    Token t;
    t.name = "head";
    head_ = insert_element(t);
  }

  void ensure_body() {
    ensure_head();
    if (std::find(open_.begin(), open_.end(), head_) != open_.end()) {
      remove_from_stack(head_);
    }
    if (!body_) {
      Token t;
      t.name = "body";
      body_ = insert_element(t);
    }
    phase_ = Phase::kInBody;
  }

  static bool is_whitespace(std::string_view s) {
    return std::all_of(s.begin(), s.end(), is_ws);
  }

  // --- dispatch ------------------------------------------------------------

  void process(Token& token) {
    switch (token.type) {
      case Token::Type::kDoctype:
        if (!html_) {
          auto node = std::make_unique<Node>();
          node->type = Node::Type::kDoctype;
          node->name = token.name;
          node->parent = &doc_.root();
          doc_.root().children.push_back(std::move(node));
        }
        return;
      case Token::Type::kComment:
        insert_comment(token);
        return;
      default:
        break;
    }
    if (text_element_) {
      // Content of a raw-text element, then its end tag.
      if (token.type == Token::Type::kText) {
        insert_text(token.data);
        return;
      }
      if (current() == text_element_) pop();
      text_element_ = nullptr;
      if (token.type == Token::Type::kEndTag) return;
    }
    switch (phase_) {
      case Phase::kBeforeHtml:
        before_html(token);
        return;
      case Phase::kBeforeHead:
        before_head(token);
        return;
      case Phase::kInHead:
        in_head(token);
        return;
      case Phase::kAfterHead:
        after_head(token);
        return;
      case Phase::kInBody:
        dispatch_body(token);
        return;
    }
  }

  void before_html(Token& token) {
    if (token.type == Token::Type::kText) {
      std::size_t skip = 0;
      while (skip < token.data.size() && is_ws(token.data[skip])) ++skip;
      token.data.erase(0, skip);
      if (token.data.empty()) return;
    }
    if (token.type == Token::Type::kStartTag && token.name == "html") {
      ensure_html();
      merge_attributes(html_, token);
      phase_ = Phase::kBeforeHead;
      return;
    }
    ensure_html();
    phase_ = Phase::kBeforeHead;
    process(token);
  }

  void before_head(Token& token) {
    if (token.type == Token::Type::kText) {
      std::size_t skip = 0;
      while (skip < token.data.size() && is_ws(token.data[skip])) ++skip;
      token.data.erase(0, skip);
      if (token.data.empty()) return;
    } else if (token.type == Token::Type::kStartTag) {
      if (token.name == "html") {
        merge_attributes(html_, token);
        return;
      }
      if (token.name == "head") {
        head_ = insert_element(token);
        phase_ = Phase::kInHead;
        return;
      }
    } else if (token.type == Token::Type::kEndTag && token.name != "head" &&
               token.name != "body" && token.name != "html" && token.name != "br") {
      return;
    }
    ensure_head();
    phase_ = Phase::kInHead;
    process(token);
  }

  void in_head(Token& token) {
    if (token.type == Token::Type::kText) {
      std::size_t ws = 0;
      while (ws < token.data.size() && is_ws(token.data[ws])) ++ws;
      insert_text(std::string_view(token.data).substr(0, ws));
      token.data.erase(0, ws);
      if (token.data.empty()) return;
    } else if (token.type == Token::Type::kStartTag) {
      if (token.name == "html") {
        merge_attributes(html_, token);
        return;
      }
      if (token.name == "head") return;
      if (contains(kHeadContent, token.name)) {
        insert_html(std::move(token));
        return;
      }
    } else if (token.type == Token::Type::kEndTag) {
      Node* cur = current();
      if (cur && cur != head_ && cur->name == token.name) {
        pop();
        return;
      }
      if (token.name == "head") {
        pop_until("head");
        phase_ = Phase::kAfterHead;
        return;
      }
      if (token.name != "body" && token.name != "html" && token.name != "br") return;
    }
    // Anything else closes the head.
    while (current() && current() != html_) pop();
    phase_ = Phase::kAfterHead;
    process(token);
  }

  void after_head(Token& token) {
    if (token.type == Token::Type::kText) {
      std::size_t ws = 0;
      while (ws < token.data.size() && is_ws(token.data[ws])) ++ws;
      insert_text(std::string_view(token.data).substr(0, ws));
      token.data.erase(0, ws);
      if (token.data.empty()) return;
    } else if (token.type == Token::Type::kStartTag) {
      if (token.name == "html") {
        merge_attributes(html_, token);
        return;
      }
      if (token.name == "body" || token.name == "frameset") {
        body_ = insert_element(token);
        phase_ = Phase::kInBody;
        return;
      }
      if (token.name == "head") return;
      if (contains(kHeadContent, token.name)) {
        // Misplaced head content goes back into the head element.
        push(head_);
        insert_html(std::move(token));
        remove_from_stack(head_);
        return;
      }
    } else if (token.type == Token::Type::kEndTag && token.name != "body" &&
               token.name != "html" && token.name != "br") {
      return;
    }
    ensure_body();
    process(token);
  }

  // --- foreign content -----------------------------------------------------

  bool html_integration_point(const Node* n) const {
    if (n->ns == Namespace::kSvg) {
      return n->name == "foreignobject" || n->name == "desc" || n->name == "title";
    }
    if (n->ns == Namespace::kMathMl && n->name == "annotation-xml") {
      const std::string* enc = n->attribute("encoding");
      return enc && (iequals(*enc, "text/html") || iequals(*enc, "application/xhtml+xml"));
    }
    return false;
  }

  bool mathml_text_integration_point(const Node* n) const {
    return n->ns == Namespace::kMathMl &&
           (n->name == "mi" || n->name == "mo" || n->name == "mn" || n->name == "ms" ||
            n->name == "mtext");
  }

  bool use_foreign_rules(const Token& token) const {
    const Node* n = current();
    if (!n || n->ns == Namespace::kHtml) return false;
    bool start = token.type == Token::Type::kStartTag;
    bool text = token.type == Token::Type::kText;
    if (mathml_text_integration_point(n)) {
      if (text) return false;
      if (start && token.name != "mglyph" && token.name != "malignmark") return false;
    }
    if (n->ns == Namespace::kMathMl && n->name == "annotation-xml" && start &&
        token.name == "svg") {
      return false;
    }
    if (html_integration_point(n) && (start || text)) return false;
    return true;
  }

  void foreign(Token& token) {
    if (token.type == Token::Type::kText) {
      insert_text(token.data);
      return;
    }
    if (token.type == Token::Type::kStartTag) {
      bool breakout = contains(kForeignBreakout, token.name) ||
                      (token.name == "font" &&
                       (token.attribute("color") || token.attribute("face") ||
                        token.attribute("size")));
      if (breakout) {
        while (current() && current()->ns != Namespace::kHtml &&
               !mathml_text_integration_point(current()) &&
               !html_integration_point(current())) {
          pop();
        }
        dispatch_body(token);
        return;
      }
      insert_element(token, current()->ns);
      if (token.self_closing) pop();
      return;
    }
    // End tag: close the nearest foreign element of that name, or defer to
    // HTML rules once an HTML element is reached.
    for (std::size_t i = open_.size(); i-- > 1;) {
      Node* n = open_[i];
      if (n->ns == Namespace::kHtml) {
        dispatch_mode(token);
        return;
      }
      if (n->name == token.name) {
        while (current() != n) pop();
        pop();
        return;
      }
    }
  }

  // --- body and table modes ------------------------------------------------

  void dispatch_body(Token& token) {
    if (use_foreign_rules(token)) {
      foreign(token);
      return;
    }
    dispatch_mode(token);
  }

  void dispatch_mode(Token& token) {
    switch (mode()) {
      case Mode::kInBody:
        in_body(token);
        return;
      case Mode::kInTable:
        in_table(token);
        return;
      case Mode::kInTableBody:
        in_table_body(token);
        return;
      case Mode::kInRow:
        in_row(token);
        return;
      case Mode::kInCell:
        in_cell(token);
        return;
      case Mode::kInCaption:
        in_caption(token);
        return;
      case Mode::kInColumnGroup:
        in_column_group(token);
        return;
      case Mode::kInSelect:
      case Mode::kInSelectInTable:
        in_select(token, mode() == Mode::kInSelectInTable);
        return;
    }
  }

  void in_body(Token& token, bool foster = false) {
    if (token.type == Token::Type::kText) {
      insert_text(token.data, foster);
      return;
    }
    if (token.type == Token::Type::kStartTag) {
      body_start_tag(token, foster);
    } else if (token.type == Token::Type::kEndTag) {
      body_end_tag(token);
    }
  }

  void body_start_tag(Token& token, bool foster) {
    const std::string name = token.name;
    if (name == "html") {
      merge_attributes(html_, token);
      return;
    }
    if (name == "body") {
      merge_attributes(body_, token);
      return;
    }
    if (name == "head" || name == "frameset") return;
    if (contains(kHeadContent, name)) {
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "caption" || name == "col" || name == "colgroup" || name == "frame" ||
        name == "tbody" || name == "td" || name == "tfoot" || name == "th" ||
        name == "thead" || name == "tr") {
      return;  // table structure outside a table is dropped
    }
    if (contains(kClosesParagraph, name)) {
      close_p();
      insert_html(std::move(token), foster);
      return;
    }
    if (contains(kHeadings, name)) {
      close_p();
      if (current() && current()->ns == Namespace::kHtml && contains(kHeadings, current()->name)) {
        pop();
      }
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "pre" || name == "listing" || name == "xmp" || name == "hr" ||
        name == "plaintext") {
      close_p();
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "form") {
      if (form_) return;
      close_p();
      insert_html(std::move(token), foster);
      form_ = current();
      return;
    }
    if (name == "li" || name == "dd" || name == "dt") {
      for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
        Node* n = *it;
        bool same = n->ns == Namespace::kHtml &&
                    (name == "li" ? n->name == "li" : (n->name == "dd" || n->name == "dt"));
        if (same) {
          std::string target = n->name;
          generate_implied_end_tags(target);
          pop_until(target);
          break;
        }
        if (n->ns == Namespace::kHtml && contains(kSpecial, n->name) &&
            n->name != "address" && n->name != "div" && n->name != "p") {
          break;
        }
      }
      close_p();
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "button") {
      if (in_scope("button")) {
        generate_implied_end_tags();
        pop_until("button");
      }
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "a") {
      // Simplified adoption: an open <a> (not separated by a table cell or
      // similar boundary) is closed before a new one starts.
      for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
        Node* n = *it;
        if (n->ns == Namespace::kHtml &&
            (n->name == "td" || n->name == "th" || n->name == "caption" ||
             n->name == "table" || n->name == "template" || n->name == "html")) {
          break;
        }
        if (is_html(n, "a")) {
          while (current() != n) pop();
          pop();
          break;
        }
      }
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "nobr" && in_scope("nobr")) {
      pop_until("nobr");
    }
    if (name == "table") {
      close_p();
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "option" || name == "optgroup") {
      if (is_html(current(), "option")) pop();
      insert_html(std::move(token), foster);
      return;
    }
    if (name == "math" || name == "svg") {
      insert_element(token, name == "svg" ? Namespace::kSvg : Namespace::kMathMl, foster);
      if (token.self_closing) pop();
      return;
    }
    insert_html(std::move(token), foster);
  }

  void body_end_tag(Token& token) {
    const std::string& name = token.name;
    if (name == "body" || name == "html") return;
    if (name == "p") {
      if (!in_scope("p", Scope::kButton)) {
        Token p;
        p.type = Token::Type::kStartTag;
        p.name = "p";
        insert_element(p);
      }
      close_p();
      return;
    }
    if (name == "br") {
      Token br;
      br.type = Token::Type::kStartTag;
      br.name = "br";
      insert_html(std::move(br));
      return;
    }
    if (name == "form") {
      Node* node = form_;
      form_ = nullptr;
      if (node && std::find(open_.begin(), open_.end(), node) != open_.end()) {
        generate_implied_end_tags();
        remove_from_stack(node);
      }
      return;
    }
    if (name == "li") {
      if (in_scope("li", Scope::kListItem)) {
        generate_implied_end_tags("li");
        pop_until("li");
      }
      return;
    }
    if (contains(kHeadings, name)) {
      if (in_scope({"h1", "h2", "h3", "h4", "h5", "h6"})) {
        generate_implied_end_tags();
        pop_until({"h1", "h2", "h3", "h4", "h5", "h6"});
      }
      return;
    }
    if (contains(kBlockEnd, name) || name == "dd" || name == "dt") {
      if (in_scope(name)) {
        generate_implied_end_tags(name);
        pop_until(name);
      }
      return;
    }
    if (contains(kVoid, name)) return;
    // Any other end tag.
    for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
      Node* n = *it;
      if (n->ns == Namespace::kHtml && n->name == name) {
        generate_implied_end_tags(name);
        while (current() != n) pop();
        pop();
        return;
      }
      if (n->ns == Namespace::kHtml && contains(kSpecial, n->name)) return;
    }
  }

  void in_table(Token& token) {
    Node* cur = current();
    bool at_table = cur && cur->ns == Namespace::kHtml && contains(kFosterTargets, cur->name);
    if (token.type == Token::Type::kText) {
      if (at_table && !is_whitespace(token.data)) {
        insert_text(token.data, true);
      } else {
        insert_text(token.data);
      }
      return;
    }
    const std::string name = token.name;
    if (token.type == Token::Type::kStartTag) {
      if (name == "caption" || name == "colgroup") {
        clear_back_to({"table", "template"});
        insert_html(std::move(token));
        return;
      }
      if (name == "col") {
        clear_back_to({"table", "template"});
        Token colgroup;
        colgroup.type = Token::Type::kStartTag;
        colgroup.name = "colgroup";
        insert_html(std::move(colgroup));
        dispatch_body(token);
        return;
      }
      if (name == "tbody" || name == "tfoot" || name == "thead") {
        clear_back_to({"table", "template"});
        insert_html(std::move(token));
        return;
      }
      if (name == "td" || name == "th" || name == "tr") {
        clear_back_to({"table", "template"});
        Token tbody;
        tbody.type = Token::Type::kStartTag;
        tbody.name = "tbody";
        insert_html(std::move(tbody));
        dispatch_body(token);
        return;
      }
      if (name == "table") {
        // A table start tag directly in table context ends the open table.
        if (in_scope("table", Scope::kTable)) {
          pop_until("table");
          dispatch_body(token);
        }
        return;
      }
      if (name == "style" || name == "script" || name == "template") {
        insert_html(std::move(token));
        return;
      }
      if (name == "input") {
        const std::string* type = token.attribute("type");
        if (type && iequals(*type, "hidden")) {
          insert_html(std::move(token));
          return;
        }
      }
      if (name == "form") {
        if (form_) return;
        insert_html(std::move(token));
        form_ = current();
        pop();
        return;
      }
      in_body(token, at_table);
      return;
    }
    if (token.type == Token::Type::kEndTag) {
      if (name == "table") {
        if (in_scope("table", Scope::kTable)) pop_until("table");
        return;
      }
      if (name == "body" || name == "caption" || name == "col" || name == "colgroup" ||
          name == "html" || name == "tbody" || name == "td" || name == "tfoot" ||
          name == "th" || name == "thead" || name == "tr") {
        return;
      }
      in_body(token, at_table);
    }
  }

  void in_table_body(Token& token) {
    const std::string name = token.name;
    if (token.type == Token::Type::kStartTag) {
      if (name == "tr") {
        clear_back_to({"tbody", "tfoot", "thead", "template"});
        insert_html(std::move(token));
        return;
      }
      if (name == "th" || name == "td") {
        clear_back_to({"tbody", "tfoot", "thead", "template"});
        Token tr;
        tr.type = Token::Type::kStartTag;
        tr.name = "tr";
        insert_html(std::move(tr));
        dispatch_body(token);
        return;
      }
      if (name == "caption" || name == "col" || name == "colgroup" || name == "tbody" ||
          name == "tfoot" || name == "thead") {
        if (!in_scope({"tbody", "thead", "tfoot"}, Scope::kTable)) return;
        clear_back_to({"tbody", "tfoot", "thead", "template"});
        pop();
        dispatch_body(token);
        return;
      }
    } else if (token.type == Token::Type::kEndTag) {
      if (name == "tbody" || name == "tfoot" || name == "thead") {
        if (!in_scope(name, Scope::kTable)) return;
        clear_back_to({"tbody", "tfoot", "thead", "template"});
        pop();
        return;
      }
      if (name == "table") {
        if (!in_scope({"tbody", "thead", "tfoot"}, Scope::kTable)) return;
        clear_back_to({"tbody", "tfoot", "thead", "template"});
        pop();
        dispatch_body(token);
        return;
      }
      if (name == "body" || name == "caption" || name == "col" || name == "colgroup" ||
          name == "html" || name == "td" || name == "th" || name == "tr") {
        return;
      }
    }
    in_table(token);
  }

  void in_row(Token& token) {
    const std::string name = token.name;
    if (token.type == Token::Type::kStartTag) {
      if (name == "th" || name == "td") {
        clear_back_to({"tr", "template"});
        insert_html(std::move(token));
        return;
      }
      if (name == "caption" || name == "col" || name == "colgroup" || name == "tbody" ||
          name == "tfoot" || name == "thead" || name == "tr") {
        if (!in_scope("tr", Scope::kTable)) return;
        clear_back_to({"tr", "template"});
        pop();
        dispatch_body(token);
        return;
      }
    } else if (token.type == Token::Type::kEndTag) {
      if (name == "tr") {
        if (!in_scope("tr", Scope::kTable)) return;
        clear_back_to({"tr", "template"});
        pop();
        return;
      }
      if (name == "table" || name == "tbody" || name == "tfoot" || name == "thead") {
        if (name != "table" && !in_scope(name, Scope::kTable)) return;
        if (!in_scope("tr", Scope::kTable)) return;
        clear_back_to({"tr", "template"});
        pop();
        dispatch_body(token);
        return;
      }
      if (name == "body" || name == "caption" || name == "col" || name == "colgroup" ||
          name == "html" || name == "td" || name == "th") {
        return;
      }
    }
    in_table(token);
  }

  void close_cell() {
    generate_implied_end_tags();
    pop_until({"td", "th"});
  }

  void in_cell(Token& token) {
    const std::string name = token.name;
    if (token.type == Token::Type::kStartTag &&
        (name == "caption" || name == "col" || name == "colgroup" || name == "tbody" ||
         name == "td" || name == "tfoot" || name == "th" || name == "thead" || name == "tr")) {
      if (!in_scope({"td", "th"}, Scope::kTable)) return;
      close_cell();
      dispatch_body(token);
      return;
    }
    if (token.type == Token::Type::kEndTag) {
      if (name == "td" || name == "th") {
        if (!in_scope(name, Scope::kTable)) return;
        generate_implied_end_tags();
        pop_until(name);
        return;
      }
      if (name == "body" || name == "caption" || name == "col" || name == "colgroup" ||
          name == "html") {
        return;
      }
      if (name == "table" || name == "tbody" || name == "tfoot" || name == "thead" ||
          name == "tr") {
        if (!in_scope(name, Scope::kTable)) return;
        close_cell();
        dispatch_body(token);
        return;
      }
    }
    in_body(token);
  }

  void in_caption(Token& token) {
    const std::string name = token.name;
    bool closes = (token.type == Token::Type::kStartTag &&
                   (name == "caption" || name == "col" || name == "colgroup" ||
                    name == "tbody" || name == "td" || name == "tfoot" || name == "th" ||
                    name == "thead" || name == "tr")) ||
                  (token.type == Token::Type::kEndTag && name == "table");
    if (closes) {
      if (!in_scope("caption", Scope::kTable)) return;
      generate_implied_end_tags();
      pop_until("caption");
      dispatch_body(token);
      return;
    }
    if (token.type == Token::Type::kEndTag) {
      if (name == "caption") {
        if (!in_scope("caption", Scope::kTable)) return;
        generate_implied_end_tags();
        pop_until("caption");
        return;
      }
      if (name == "body" || name == "col" || name == "colgroup" || name == "html" ||
          name == "tbody" || name == "td" || name == "tfoot" || name == "th" ||
          name == "thead" || name == "tr") {
        return;
      }
    }
    in_body(token);
  }

  void in_column_group(Token& token) {
    if (token.type == Token::Type::kText && is_whitespace(token.data)) {
      insert_text(token.data);
      return;
    }
    if (token.type == Token::Type::kStartTag && token.name == "col") {
      insert_html(std::move(token));
      return;
    }
    if (token.type == Token::Type::kStartTag && token.name == "template") {
      insert_html(std::move(token));
      return;
    }
    if (token.type == Token::Type::kEndTag && token.name == "col") return;
    if (token.type == Token::Type::kEndTag && token.name == "colgroup") {
      if (is_html(current(), "colgroup")) pop();
      return;
    }
    if (!is_html(current(), "colgroup")) return;
    pop();
    dispatch_body(token);
  }

  void in_select(Token& token, bool in_table) {
    const std::string name = token.name;
    if (token.type == Token::Type::kText) {
      insert_text(token.data);
      return;
    }
    if (token.type == Token::Type::kStartTag) {
      if (in_table && (name == "caption" || name == "table" || name == "tbody" ||
                       name == "tfoot" || name == "thead" || name == "tr" || name == "td" ||
                       name == "th")) {
        pop_until("select");
        dispatch_body(token);
        return;
      }
      if (name == "option") {
        if (is_html(current(), "option")) pop();
        insert_html(std::move(token));
        return;
      }
      if (name == "optgroup" || name == "hr") {
        if (is_html(current(), "option")) pop();
        if (is_html(current(), "optgroup")) pop();
        insert_html(std::move(token));
        return;
      }
      if (name == "select") {
        if (in_scope("select", Scope::kSelect)) pop_until("select");
        return;
      }
      if (name == "input" || name == "keygen" || name == "textarea") {
        if (!in_scope("select", Scope::kSelect)) return;
        pop_until("select");
        dispatch_body(token);
        return;
      }
      if (name == "script" || name == "template") {
        insert_html(std::move(token));
        return;
      }
      return;  // everything else is dropped inside <select>
    }
    if (token.type == Token::Type::kEndTag) {
      if (in_table && (name == "caption" || name == "table" || name == "tbody" ||
                       name == "tfoot" || name == "thead" || name == "tr" || name == "td" ||
                       name == "th")) {
        if (!in_scope(name, Scope::kTable)) return;
        pop_until("select");
        dispatch_body(token);
        return;
      }
      if (name == "optgroup") {
        if (is_html(current(), "option") && open_.size() > 1 &&
            is_html(open_[open_.size() - 2], "optgroup")) {
          pop();
        }
        if (is_html(current(), "optgroup")) pop();
        return;
      }
      if (name == "option") {
        if (is_html(current(), "option")) pop();
        return;
      }
      if (name == "select") {
        if (in_scope("select", Scope::kSelect)) pop_until("select");
        return;
      }
      Node* cur = current();
      if (cur && cur->name == name && (name == "script" || name == "template")) pop();
    }
  }

  Tokenizer tokenizer_;
  ParseOptions options_;
  Document doc_;
  std::vector<Node*> open_;
  std::vector<std::size_t> context_;  // stack indices of table/select contexts
  Node* html_ = nullptr;
  Node* head_ = nullptr;
  Node* body_ = nullptr;
  Node* form_ = nullptr;
  Phase phase_ = Phase::kBeforeHtml;
  bool skip_newline_ = false;
  Node* text_element_ = nullptr;
  std::unordered_map<std::string, int> open_count_;  // open HTML elements by name
};

}  // namespace

std::string decode_entities(std::string_view text, bool in_attribute) {
  if (text.find('&') == std::string_view::npos) return std::string(text);
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '&') {
      std::size_t used = decode_reference(text, i, in_attribute, out);
      if (used > 0) {
        i += used - 1;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

Document parse(std::string_view markup, const ParseOptions& options) {
  ParseOptions effective = options;
  if (effective.max_depth < 2) effective.max_depth = 2;
  return TreeBuilder(markup, effective).run();
}

}  // namespace webcorpus::html
