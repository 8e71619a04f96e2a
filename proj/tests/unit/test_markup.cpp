#include "doctest.h"

#include "openlex/error.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/markup/selector.hpp"

using namespace openlex;
using namespace openlex::markup;

TEST_CASE("xml parsing is strict and reports offsets") {
  auto doc = parse("<?xml version=\"1.0\"?><a x='1'><b>t&amp;u</b><!-- c --><![CDATA[<raw>]]></a>", Mode::kXml);
  const Node* a = doc.document_element();
  REQUIRE(a);
  CHECK(a->name == "a");
  CHECK(*a->attribute("x") == "1");
  CHECK(a->text_content() == "t&u<raw>");

  try {
    parse("<a><b></a>", Mode::kXml);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
  CHECK_THROWS_AS(parse("<a><b>", Mode::kXml), ParseError);
  CHECK_THROWS_AS(parse("", Mode::kXml), ParseError);
  CHECK_THROWS_AS(parse("<a/><b/>", Mode::kXml), ParseError);
}

TEST_CASE("html parsing tolerates common omissions") {
  auto doc = parse(
      "<!DOCTYPE html><html><body><p>one<p>two<br>three<ul><li>x<li>y</ul>"
      "<script>if (a < b) {}</script></body></html>",
      Mode::kHtml);
  auto ps = select(doc.root, "p");
  REQUIRE(ps.size() == 2);
  CHECK(ps[0]->text_content() == "one");
  CHECK(select(doc.root, "li").size() == 2);
  // Script bodies are skipped, not parsed as markup.
  CHECK(select(doc.root, "script").front()->text_content().empty());
  CHECK(select(doc.root, "body").front()->text_content() == "onetwothreexy");
}

TEST_CASE("selectors") {
  auto doc = parse(
      "<table id='t'><tr class='row odd'><td>1</td><td><a href='/a'>A</a></td></tr>"
      "<tr class='row'><td>2</td><td><a href='/b'>B</a></td></tr></table>",
      Mode::kHtml);
  CHECK(select(doc.root, "tr.row").size() == 2);
  CHECK(select(doc.root, "#t tr.odd").size() == 1);
  auto links = select(doc.root, "tr > td a[href]");
  REQUIRE(links.size() == 2);
  CHECK(*links[1]->attribute("href") == "/b");
  CHECK(select(doc.root, "td:nth-child(2)").size() == 2);
  CHECK(select(doc.root, "td:first-child")[1]->text_content() == "2");
  CHECK(select(doc.root, "a[href=/a]").size() == 1);
  CHECK_THROWS_AS(select(doc.root, "tr >"), ConfigError);
}

TEST_CASE("block text keeps block boundaries") {
  auto doc = parse("<div><h1>Title</h1><p>First   para&nbsp;here.</p><p>Second.</p></div>", Mode::kHtml);
  CHECK(block_text(doc.root) == "Title\nFirst para here.\nSecond.");
  CHECK(decode_entities("&eacute;&#233;&#xE9;&lt;") == "ééé<");
}
