#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace museum::html {

enum class NodeType { Element, Text };

// One DOM node. Elements own their children; text nodes carry decoded
// character data. `order` is the pre-order document position, `path` the
// slash-joined element path with sibling ordinals ("/html/body/div[2]",
// ordinal present only when the tag repeats among siblings).
struct Node {
    NodeType type = NodeType::Element;
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::vector<std::unique_ptr<Node>> children;
    Node* parent = nullptr;
    std::string text;
    int order = 0;
    std::string path;

    bool is_element() const { return type == NodeType::Element; }
    bool is_text() const { return type == NodeType::Text; }
    const std::string* attr(const std::string& name) const {
        auto it = attrs.find(name);
        return it == attrs.end() ? nullptr : &it->second;
    }
};

struct Document {
    std::unique_ptr<Node> root;  // always the <html> element

    const Node* find_first(std::string_view tag) const;
};

// Tolerant parse: repairs mismatched and unclosed tags, synthesizes
// html/head/body, decodes entities, never rejects input. Input must be
// valid UTF-8 (run lossy_decode_utf8 first for raw bytes).
Document parse_html(std::string_view input);

// Decodes named and numeric character references; unknown references are
// kept literally.
std::string decode_entities(std::string_view text);

// Pre-order traversal.
void walk(const Node& node, const std::function<void(const Node&)>& fn);

// True when every ancestor (and the node itself, for elements) falls
// outside script/style/noscript/template/head/title. The title element is
// excluded here because its text feeds the snapshot title, not a segment.
bool renderable_context(const Node& node);

// Text node with at least one non-whitespace character in a renderable
// context.
bool is_renderable_text(const Node& node);

}  // namespace museum::html
