#include "doctest.h"

#include "gridmap/xml/document.hpp"
#include "support/xpath_oracle.hpp"

#include <random>

using namespace gridmap::xml;

namespace {

// Structural equality over the public node API.
bool same_tree(const Node& a, const Node& b)
{
    if (a.kind() != b.kind() || a.name() != b.name() || a.value() != b.value())
        return false;
    if (a.attributes().size() != b.attributes().size() || a.children().size() != b.children().size())
        return false;
    for (std::size_t i = 0; i < a.attributes().size(); ++i)
        if (!same_tree(*a.attributes()[i], *b.attributes()[i]))
            return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!same_tree(*a.children()[i], *b.children()[i]))
            return false;
    return true;
}

}  // namespace

TEST_CASE("parse_xml builds the element tree")
{
    auto doc = parse_xml("<a><b>1</b></a>");
    const Node& a = doc.document_element();
    CHECK(a.name() == "a");
    REQUIRE(a.children().size() == 1);
    const Node& b = *a.children()[0];
    CHECK(b.kind() == NodeKind::Element);
    CHECK(b.name() == "b");
    REQUIRE(b.children().size() == 1);
    CHECK(b.children()[0]->kind() == NodeKind::Text);
    CHECK(b.children()[0]->value() == "1");
}

TEST_CASE("parse_xml rejects malformed input with a position")
{
    CHECK_THROWS_AS(parse_xml("<a>"), ParseError);
    CHECK_THROWS_WITH_AS(parse_xml("<a x=\"1\" x=\"2\"/>"), doctest::Contains("duplicate attribute"), ParseError);
    CHECK_THROWS_WITH_AS(parse_xml("<a/><b/>"), doctest::Contains("multiple root"), ParseError);
    CHECK_THROWS_WITH_AS(parse_xml("<a></b>"), doctest::Contains("mismatched"), ParseError);
    CHECK_THROWS_WITH_AS(parse_xml("<a>&nbsp;</a>"), doctest::Contains("unknown entity"), ParseError);
    CHECK_THROWS_WITH_AS(parse_xml("<!DOCTYPE a><a/>"), doctest::Contains("DTD"), ParseError);
    CHECK_THROWS_AS(parse_xml(""), ParseError);
    CHECK_THROWS_AS(parse_xml("text"), ParseError);
    CHECK_THROWS_AS(parse_xml("<a><b></a>"), ParseError);

    try {
        parse_xml("<a>\n  <b>\n</a>");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("entities, character references and CDATA decode into merged text")
{
    auto doc = parse_xml("<m>a&amp;b &lt;&gt;&quot;&apos; &#65;&#x42;<![CDATA[<raw>]]><!-- c -->tail</m>");
    const Node& m = doc.document_element();
    REQUIRE(m.children().size() == 1);
    CHECK(m.children()[0]->value() == "a&b <>\"' AB<raw>tail");
}

TEST_CASE("prolog, comments and processing instructions are skipped")
{
    auto doc = parse_xml("\xEF\xBB\xBF<?xml version=\"1.0\"?>\n<!-- x --><?pi?>\n<r a='1'/>\n<!-- after -->\n");
    CHECK(doc.document_element().name() == "r");
    CHECK(doc.document_element().attribute("a")->value() == "1");
    CHECK_THROWS_AS(parse_xml("<r/><?xml version=\"1.0\"?>"), ParseError);
}

TEST_CASE("document order numbers attributes before children")
{
    auto doc = parse_xml("<r a='1' b='2'><c/>t</r>");
    const Node& r = doc.document_element();
    CHECK(doc.root().order() == 0);
    CHECK(r.order() == 1);
    CHECK(r.attributes()[0]->order() == 2);
    CHECK(r.attributes()[1]->order() == 3);
    CHECK(r.children()[0]->order() == 4);
    CHECK(r.children()[1]->order() == 5);
}

TEST_CASE("serialize escapes text and attributes")
{
    auto doc = parse_xml("<a t=\"&quot;&lt;\">x &amp; &lt;y&gt;<e/></a>");
    CHECK(serialize(doc) == "<a t=\"&quot;&lt;\">x &amp; &lt;y&gt;<e/></a>");
}

TEST_CASE("joined_text separates text nodes with single spaces")
{
    auto doc = parse_xml("<a><b>cpu</b><c>16</c>free<d><e>4</e></d></a>");
    CHECK(joined_text(doc.root()) == "cpu 16 free 4");
}

TEST_CASE("property: serialize(parse(t)) reparses to an equal tree")
{
    std::mt19937 rng(20240611);
    for (int i = 0; i < 300; ++i) {
        auto generated = oracle::random_document(rng);
        auto text = generated.to_xml();
        auto first = parse_xml(text);
        auto second = parse_xml(serialize(first));
        INFO(text);
        CHECK(same_tree(first.root(), second.root()));
    }
}
