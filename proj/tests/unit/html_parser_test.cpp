#include <gtest/gtest.h>

#include <string>

#include "webcorpus/html/parser.hpp"

namespace webcorpus::html {
namespace {

const Node* find_first(const Document& doc, std::string_view name) {
  const Node* found = nullptr;
  doc.for_each_element([&](const Node& n) {
    if (!found && n.name == name) found = &n;
  });
  return found;
}

std::string path_of(const Node* n) {
  std::string out;
  for (; n && n->type == Node::Type::kElement; n = n->parent) {
    out = "/" + n->name + out;
  }
  return out;
}

TEST(HtmlParser, EmptyInputStillBuildsSkeleton) {
  auto doc = parse("");
  EXPECT_EQ(doc.count_elements("html"), 1u);
  EXPECT_EQ(doc.count_elements("head"), 1u);
  EXPECT_EQ(doc.count_elements("body"), 1u);
}

TEST(HtmlParser, ImpliedStructure) {
  auto doc = parse("<title>x</title><p>hello");
  EXPECT_EQ(path_of(find_first(doc, "title")), "/html/head/title");
  EXPECT_EQ(path_of(find_first(doc, "p")), "/html/body/p");
}

TEST(HtmlParser, ScriptContentIsRawText) {
  auto doc = parse("<script>document.write('<img src=a><table>');</script><img>");
  EXPECT_EQ(doc.count_elements("img"), 1u);
  EXPECT_EQ(doc.count_elements("table"), 0u);
  EXPECT_EQ(find_first(doc, "script")->text_content(),
            "document.write('<img src=a><table>');");
}

TEST(HtmlParser, StyleAndTitleAreNotMarkup) {
  auto doc = parse("<style>p::before{content:'<iframe>'}</style>"
                   "<title><style></title><textarea><table></textarea>");
  EXPECT_EQ(doc.count_elements("style"), 1u);
  EXPECT_EQ(doc.count_elements("iframe"), 0u);
  EXPECT_EQ(doc.count_elements("table"), 0u);
}

TEST(HtmlParser, RawTextEndTagIsCaseInsensitiveAndNeedsDelimiter) {
  auto doc = parse("<script>var s = '</scripts>';</SCRIPT ><img>");
  EXPECT_EQ(doc.count_elements("script"), 1u);
  EXPECT_EQ(doc.count_elements("img"), 1u);
}

TEST(HtmlParser, CommentsHideMarkup) {
  auto doc = parse("<!-- <img> <table> --><img><!--><img><!--- x --!><img>");
  EXPECT_EQ(doc.count_elements("img"), 3u);
  EXPECT_EQ(doc.count_elements("table"), 0u);
}

TEST(HtmlParser, UnterminatedCommentSwallowsRest) {
  auto doc = parse("<img><!-- <img> <img>");
  EXPECT_EQ(doc.count_elements("img"), 1u);
}

TEST(HtmlParser, AttributesQuotedUnquotedAndDuplicates) {
  auto doc = parse("<a HREF='x y' data-k=v title=\"a>b\" href=ignored>t</a>");
  const Node* a = find_first(doc, "a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(*a->attribute("href"), "x y");
  EXPECT_EQ(*a->attribute("data-k"), "v");
  EXPECT_EQ(*a->attribute("title"), "a>b");
}

TEST(HtmlParser, EntitiesInAttributesAndText) {
  auto doc = parse("<a href=\"/url?q=a&amp;b=1&copy=2\">caf&eacute; &#233;&#xE9;</a>");
  const Node* a = find_first(doc, "a");
  EXPECT_EQ(*a->attribute("href"), "/url?q=a&b=1&copy=2");
  EXPECT_EQ(a->text_content(), "caf\xC3\xA9 \xC3\xA9\xC3\xA9");
}

TEST(HtmlParser, EofInsideTagDropsIt) {
  auto doc = parse("<img><img src=\"unterminated");
  EXPECT_EQ(doc.count_elements("img"), 1u);
}

TEST(HtmlParser, ImageIsRenamedToImg) {
  auto doc = parse("<image src=a>");
  EXPECT_EQ(doc.count_elements("img"), 1u);
  EXPECT_EQ(doc.count_elements("image"), 0u);
}

TEST(HtmlParser, VoidElementsDoNotNest) {
  auto doc = parse("<img><p>x</p><br><input><link rel=stylesheet>");
  const Node* p = find_first(doc, "p");
  EXPECT_EQ(path_of(p), "/html/body/p");
}

TEST(HtmlParser, NestedTablesInCells) {
  auto doc = parse("<table><tr><td><table><tr><td>x</td></tr></table></td></tr></table>");
  EXPECT_EQ(doc.count_elements("table"), 2u);
  EXPECT_EQ(doc.count_elements("tbody"), 2u);  // implied
}

TEST(HtmlParser, TableDirectlyInTableClosesOuter) {
  auto doc = parse("<table><table><tr><td>x</table>");
  EXPECT_EQ(doc.count_elements("table"), 2u);
  const Node* body = find_first(doc, "body");
  int tables_in_body = 0;
  for (const auto& c : body->children) tables_in_body += c->is_element("table");
  EXPECT_EQ(tables_in_body, 2);
}

TEST(HtmlParser, CellsOutsideTablesAreDropped) {
  auto doc = parse("<td>x</td><tr><th>");
  EXPECT_EQ(doc.count_elements("td"), 0u);
  EXPECT_EQ(doc.count_elements("tr"), 0u);
  EXPECT_EQ(doc.count_elements("th"), 0u);
}

TEST(HtmlParser, FosterParenting) {
  auto doc = parse("<div><table class=t><a href=x>link</a><tr><td>c</td></tr></table></div>");
  const Node* a = find_first(doc, "a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(path_of(a), "/html/body/div/a");
  // The anchor lands before the table in its parent.
  const Node* div = find_first(doc, "div");
  ASSERT_GE(div->children.size(), 2u);
  EXPECT_TRUE(div->children[0]->is_element("a"));
  EXPECT_TRUE(div->children[1]->is_element("table"));
}

TEST(HtmlParser, SelectDropsForeignTags) {
  auto doc = parse("<select><option>a<img><table><option>b</select><img>");
  EXPECT_EQ(doc.count_elements("option"), 2u);
  EXPECT_EQ(doc.count_elements("img"), 1u);
  EXPECT_EQ(doc.count_elements("table"), 0u);
}

TEST(HtmlParser, ParagraphsAndListItemsCloseImplicitly) {
  auto doc = parse("<ul><li>a<li>b<li>c</ul><p>x<p>y<div>z</div>");
  EXPECT_EQ(doc.count_elements("li"), 3u);
  EXPECT_EQ(path_of(find_first(doc, "div")), "/html/body/div");
  const Node* ul = find_first(doc, "ul");
  EXPECT_EQ(ul->children.size(), 3u);
}

TEST(HtmlParser, StrayEndTagsAreIgnored) {
  auto doc = parse("</div></table><div><span>a</div>b</span><img>");
  EXPECT_EQ(doc.count_elements("div"), 1u);
  EXPECT_EQ(path_of(find_first(doc, "img")), "/html/body/img");
}

TEST(HtmlParser, HeadContentAfterBodyStartsStaysInBody) {
  auto doc = parse("<p>x</p><style>a{}</style><link rel=stylesheet href=a.css>");
  EXPECT_EQ(path_of(find_first(doc, "style")), "/html/body/style");
  EXPECT_EQ(path_of(find_first(doc, "link")), "/html/body/link");
}

TEST(HtmlParser, DuplicateStructuralTagsMerge) {
  auto doc = parse("<html><body><html lang=es><body class=x><head><body>");
  EXPECT_EQ(doc.count_elements("html"), 1u);
  EXPECT_EQ(doc.count_elements("body"), 1u);
  EXPECT_EQ(doc.count_elements("head"), 1u);
  EXPECT_EQ(*find_first(doc, "html")->attribute("lang"), "es");
  EXPECT_EQ(*find_first(doc, "body")->attribute("class"), "x");
}

TEST(HtmlParser, SvgForeignContent) {
  auto doc = parse("<svg><style>.a{}</style><image href=x /><rect/></svg><img>");
  const Node* style = find_first(doc, "style");
  ASSERT_NE(style, nullptr);
  EXPECT_EQ(style->ns, Namespace::kSvg);
  EXPECT_EQ(doc.count_elements("image"), 1u);  // stays <image> inside svg
  EXPECT_EQ(doc.count_elements("img"), 1u);
  EXPECT_EQ(path_of(find_first(doc, "img")), "/html/body/img");
}

TEST(HtmlParser, SvgBreakoutOnHtmlTag) {
  auto doc = parse("<svg><g><img src=a></g></svg>");
  const Node* img = find_first(doc, "img");
  ASSERT_NE(img, nullptr);
  EXPECT_EQ(img->ns, Namespace::kHtml);
  EXPECT_EQ(path_of(img), "/html/body/img");
}

TEST(HtmlParser, AnchorsDoNotNest) {
  auto doc = parse("<a href=1>one<a href=2>two</a>");
  const Node* body = find_first(doc, "body");
  ASSERT_EQ(body->children.size(), 2u);
  EXPECT_TRUE(body->children[0]->is_element("a"));
  EXPECT_TRUE(body->children[1]->is_element("a"));
}

TEST(HtmlParser, DepthIsBounded) {
  std::string deep;
  for (int i = 0; i < 5000; ++i) deep += "<div>";
  deep += "<img>";
  auto doc = parse(deep, ParseOptions{64});
  EXPECT_EQ(doc.count_elements("div"), 5000u);
  EXPECT_EQ(doc.count_elements("img"), 1u);
  std::size_t max_depth = 0;
  doc.for_each_element([&](const Node& n) {
    std::size_t d = 0;
    for (const Node* p = &n; p; p = p->parent) ++d;
    max_depth = std::max(max_depth, d);
  });
  EXPECT_LE(max_depth, 66u);
}

TEST(HtmlParser, LoneAngleBracketsAreText) {
  auto doc = parse("a < b <3 <> </ 1><img>");
  EXPECT_EQ(doc.count_elements("img"), 1u);
  EXPECT_NE(find_first(doc, "body")->text_content().find("a < b <3 <>"), std::string::npos);
}

}  // namespace
}  // namespace webcorpus::html
