#include <doctest.h>

#include "museum/html.hpp"

#include <string>
#include <vector>

using namespace museum::html;

namespace {

// Collects (path-of-parent, text) for every renderable text node.
std::vector<std::pair<std::string, std::string>> renderable_texts(const Document& doc) {
    std::vector<std::pair<std::string, std::string>> out;
    walk(*doc.root, [&](const Node& n) {
        if (is_renderable_text(n)) out.emplace_back(n.parent->path, n.text);
    });
    return out;
}

std::string first_text(const Document& doc, std::string_view tag) {
    const Node* e = doc.find_first(tag);
    if (!e) return "";
    std::string out;
    walk(*e, [&](const Node& n) {
        if (n.is_text()) out += n.text;
    });
    return out;
}

}  // namespace

TEST_CASE("well-formed page parses with paths and ordinals") {
    Document doc = parse_html(
        "<html><head><title>T</title></head>"
        "<body><div>one</div><div>two</div><p>three</p></body></html>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 3);
    CHECK(texts[0].first == "/html/body/div[1]");
    CHECK(texts[1].first == "/html/body/div[2]");
    CHECK(texts[2].first == "/html/body/p");  // no ordinal: single <p> among siblings
    CHECK(first_text(doc, "title") == "T");
}

TEST_CASE("missing html/head/body are synthesized") {
    Document doc = parse_html("<p>hello</p>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 1);
    CHECK(texts[0].first == "/html/body/p");
    CHECK(texts[0].second == "hello");
    // head appears only once head content forces it into existence
    CHECK(doc.find_first("head") == nullptr);
    CHECK(parse_html("<title>t</title><p>x</p>").find_first("head") != nullptr);
}

TEST_CASE("unclosed and mis-nested tags are repaired") {
    // <p> implicitly closed by the next <p>; unclosed <div> closed at EOF;
    // stray </span> ignored.
    Document doc = parse_html("<body><p>a<p>b</span><div>c</body>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 3);
    CHECK(texts[0].first == "/html/body/p[1]");
    CHECK(texts[1].first == "/html/body/p[2]");
    CHECK(texts[2].first == "/html/body/div");
}

TEST_CASE("list and table implicit closes") {
    Document doc = parse_html("<ul><li>a<li>b</ul><table><tr><td>c<td>d</table>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 4);
    CHECK(texts[0].first == "/html/body/ul/li[1]");
    CHECK(texts[1].first == "/html/body/ul/li[2]");
    CHECK(texts[2].first.find("/td[1]") != std::string::npos);
    CHECK(texts[3].first.find("/td[2]") != std::string::npos);
}

TEST_CASE("script, style, comments, and doctype are not renderable") {
    Document doc = parse_html(
        "<!doctype html><!-- note --><html><head><style>p{color:red}</style>"
        "<script>var x = '<div>not real</div>';</script></head>"
        "<body><noscript>off</noscript><template>ghost</template>visible</body></html>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 1);
    CHECK(texts[0].second == "visible");
}

TEST_CASE("title text is captured but not renderable") {
    Document doc = parse_html("<title>My &amp; Title</title><body>body text</body>");
    CHECK(first_text(doc, "title") == "My & Title");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 1);
    CHECK(texts[0].second == "body text");
}

TEST_CASE("entity decoding") {
    CHECK(decode_entities("a &amp; b") == "a & b");
    CHECK(decode_entities("&lt;tag&gt;") == "<tag>");
    CHECK(decode_entities("&quot;q&quot; &apos;a&apos;") == "\"q\" 'a'");
    CHECK(decode_entities("&#65;&#x42;") == "AB");
    CHECK(decode_entities("x&nbsp;y") == "x\xc2\xa0y");
    CHECK(decode_entities("&copy; 2024") == "\xc2\xa9 2024");
    // Legacy no-semicolon forms.
    CHECK(decode_entities("fish&chips") == "fish&chips");
    CHECK(decode_entities("a&amp b") == "a& b");
    // Unknown references stay literal.
    CHECK(decode_entities("&unknown; &x") == "&unknown; &x");
    // C1 control codepoints remap per windows-1252 (0x93/0x94 are curly quotes).
    CHECK(decode_entities("&#147;hi&#148;") == "\xe2\x80\x9chi\xe2\x80\x9d");
}

TEST_CASE("attributes: quoted, unquoted, bare, duplicate") {
    Document doc = parse_html(
        "<body><a href=\"/x\" class=link data-k=v disabled href=\"/ignored\">t</a>"
        "<img src='/pic.jpg' alt=\"Solar Array\"/></body>");
    const Node* a = doc.find_first("a");
    REQUIRE(a != nullptr);
    CHECK(*a->attr("href") == "/x");  // first occurrence wins
    CHECK(*a->attr("class") == "link");
    CHECK(*a->attr("data-k") == "v");
    CHECK(*a->attr("disabled") == "");
    const Node* img = doc.find_first("img");
    REQUIRE(img != nullptr);
    CHECK(*img->attr("alt") == "Solar Array");
    CHECK(img->children.empty());  // void element
}

TEST_CASE("void elements do not swallow siblings") {
    Document doc = parse_html("<body>a<br>b<hr>c<img src=x>d</body>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 4);
    for (const auto& [path, text] : texts) CHECK(path == "/html/body");
}

TEST_CASE("bare angle brackets survive as text") {
    Document doc = parse_html("<body>x < y and z <3</body>");
    std::string all;
    walk(*doc.root, [&](const Node& n) {
        if (is_renderable_text(n)) all += n.text;
    });
    CHECK(all == "x < y and z <3");
}

TEST_CASE("cdata and processing instructions are skipped") {
    Document doc = parse_html("<body><![CDATA[ignored]]><?php ignored ?>kept</body>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 1);
    CHECK(texts[0].second == "kept");
}

TEST_CASE("uppercase tags and attributes fold to lowercase") {
    Document doc = parse_html("<BODY><DIV CLASS=a>text</DIV></BODY>");
    const Node* div = doc.find_first("div");
    REQUIRE(div != nullptr);
    CHECK(*div->attr("class") == "a");
    CHECK(div->path == "/html/body/div");
}

TEST_CASE("raw text elements keep markup-like content verbatim") {
    Document doc = parse_html("<body><script>if (a<b) { x(); }</script>real</body>");
    auto texts = renderable_texts(doc);
    REQUIRE(texts.size() == 1);
    CHECK(texts[0].second == "real");
    CHECK(first_text(doc, "script") == "if (a<b) { x(); }");
}

TEST_CASE("document order is stable pre-order") {
    Document doc = parse_html("<body><div>a<span>b</span>c</div><div>d</div></body>");
    std::vector<int> orders;
    walk(*doc.root, [&](const Node& n) {
        if (n.is_text()) orders.push_back(n.order);
    });
    REQUIRE(orders.size() == 4);
    for (std::size_t i = 1; i < orders.size(); ++i) CHECK(orders[i - 1] < orders[i]);
}

TEST_CASE("identical input parses identically") {
    const char* page = "<body><div>x<p>y</p></div><!-- c --><div>z</div></body>";
    Document d1 = parse_html(page);
    Document d2 = parse_html(page);
    auto t1 = renderable_texts(d1);
    auto t2 = renderable_texts(d2);
    CHECK(t1 == t2);
}
