#include "museum/html.hpp"

#include "museum/unicode.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

namespace museum::html {

namespace {

const std::set<std::string>& void_elements() {
    static const std::set<std::string> tags = {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    };
    return tags;
}

// Content is character data until the matching close tag. script/style
// keep it verbatim; title/textarea decode entities.
bool is_raw_text(const std::string& tag) {
    return tag == "script" || tag == "style";
}
bool is_rcdata(const std::string& tag) {
    return tag == "title" || tag == "textarea";
}

// Opening one of these closes an open <p>.
const std::set<std::string>& p_closers() {
    static const std::set<std::string> tags = {
        "address", "article", "aside", "blockquote", "div", "dl",
        "fieldset", "figure", "footer", "form", "h1", "h2", "h3", "h4",
        "h5", "h6", "header", "hr", "main", "nav", "ol", "p", "pre",
        "section", "table", "ul",
    };
    return tags;
}

const std::unordered_map<std::string, char32_t>& named_entities() {
    static const std::unordered_map<std::string, char32_t> table = {
        {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''},
        {"nbsp", 0xa0}, {"copy", 0xa9}, {"reg", 0xae}, {"trade", 0x2122},
        {"deg", 0xb0}, {"plusmn", 0xb1}, {"micro", 0xb5}, {"para", 0xb6},
        {"middot", 0xb7}, {"laquo", 0xab}, {"raquo", 0xbb}, {"iexcl", 0xa1},
        {"iquest", 0xbf}, {"szlig", 0xdf}, {"agrave", 0xe0}, {"aacute", 0xe1},
        {"acirc", 0xe2}, {"atilde", 0xe3}, {"auml", 0xe4}, {"aring", 0xe5},
        {"aelig", 0xe6}, {"ccedil", 0xe7}, {"egrave", 0xe8}, {"eacute", 0xe9},
        {"ecirc", 0xea}, {"euml", 0xeb}, {"igrave", 0xec}, {"iacute", 0xed},
        {"icirc", 0xee}, {"iuml", 0xef}, {"ntilde", 0xf1}, {"ograve", 0xf2},
        {"oacute", 0xf3}, {"ocirc", 0xf4}, {"otilde", 0xf5}, {"ouml", 0xf6},
        {"oslash", 0xf8}, {"ugrave", 0xf9}, {"uacute", 0xfa}, {"ucirc", 0xfb},
        {"uuml", 0xfc}, {"yacute", 0xfd}, {"yuml", 0xff}, {"eth", 0xf0},
        {"thorn", 0xfe}, {"pound", 0xa3}, {"cent", 0xa2}, {"yen", 0xa5},
        {"curren", 0xa4}, {"sect", 0xa7}, {"euro", 0x20ac},
        {"hellip", 0x2026}, {"mdash", 0x2014}, {"ndash", 0x2013},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201c},
        {"rdquo", 0x201d}, {"bull", 0x2022}, {"dagger", 0x2020},
        {"permil", 0x2030}, {"prime", 0x2032}, {"times", 0xd7},
        {"divide", 0xf7}, {"minus", 0x2212}, {"infin", 0x221e},
        {"ne", 0x2260}, {"le", 0x2264}, {"ge", 0x2265},
        {"larr", 0x2190}, {"uarr", 0x2191}, {"rarr", 0x2192},
        {"darr", 0x2193}, {"harr", 0x2194},
        {"frac12", 0xbd}, {"frac14", 0xbc}, {"frac34", 0xbe},
        {"sup1", 0xb9}, {"sup2", 0xb2}, {"sup3", 0xb3}, {"ordm", 0xba},
        {"shy", 0xad},
    };
    return table;
}

// References that browsers accept without a trailing semicolon.
bool legacy_entity(const std::string& name) {
    return name == "amp" || name == "lt" || name == "gt" || name == "quot" ||
           name == "apos" || name == "nbsp" || name == "copy" || name == "reg";
}

// Numeric references in 0x80..0x9f follow the windows-1252 remapping.
char32_t remap_c1(char32_t cp) {
    static const std::array<char32_t, 32> table = {
        0x20ac, 0x81,   0x201a, 0x192,  0x201e, 0x2026, 0x2020, 0x2021,
        0x2c6,  0x2030, 0x160,  0x2039, 0x152,  0x8d,   0x17d,  0x8f,
        0x90,   0x2018, 0x2019, 0x201c, 0x201d, 0x2022, 0x2013, 0x2014,
        0x2dc,  0x2122, 0x161,  0x203a, 0x153,  0x9d,   0x17e,  0x178,
    };
    if (cp >= 0x80 && cp <= 0x9f) return table[cp - 0x80];
    return cp;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
    }
    return out;
}

bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool all_whitespace(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        DecodedChar dc = decode_utf8(s, pos);
        if (!is_unicode_space(dc.cp)) return false;
        pos += dc.length;
    }
    return true;
}

class Builder {
public:
    Builder() {
        doc_.root = std::make_unique<Node>();
        doc_.root->tag = "html";
        doc_.root->order = next_order_++;
        stack_.push_back(doc_.root.get());
    }

    Document take() {
        compute_paths(*doc_.root, "/html");
        return std::move(doc_);
    }

    void open(const std::string& tag, std::map<std::string, std::string> attrs,
              bool self_closing) {
        if (tag == "html") {
            merge_attrs(*doc_.root, attrs);
            return;
        }
        if (tag == "head") {
            Node* head = ensure_head();
            merge_attrs(*head, attrs);
            if (!body_started_) {
                stack_.assign({doc_.root.get(), head});
            }
            return;
        }
        if (tag == "body") {
            Node* body = ensure_body();
            merge_attrs(*body, attrs);
            stack_.assign({doc_.root.get(), body});
            return;
        }

        if (!inside_section()) {
            if (!body_started_ && head_tag(tag)) {
                stack_.assign({doc_.root.get(), ensure_head()});
            } else {
                stack_.assign({doc_.root.get(), ensure_body()});
            }
        }

        close_implied_by(tag);

        Node* node = append_node(NodeType::Element);
        node->tag = tag;
        node->attrs = std::move(attrs);
        if (!self_closing && !void_elements().count(tag)) {
            stack_.push_back(node);
        }
    }

    void close(const std::string& tag) {
        if (tag == "html" || tag == "body" || tag == "head") {
            stack_.assign({doc_.root.get()});
            return;
        }
        for (std::size_t i = stack_.size(); i-- > 1;) {
            Node* n = stack_[i];
            if (n->tag == tag) {
                stack_.resize(i);
                return;
            }
            if (n == body_ || n == head_) break;
        }
        // No matching open tag: ignore the stray close.
    }

    void text(const std::string& s) {
        if (s.empty()) return;
        if (!inside_section()) {
            if (all_whitespace(s)) return;  // inter-tag whitespace at top level
            stack_.assign({doc_.root.get(), ensure_body()});
        }
        Node* node = append_node(NodeType::Text);
        node->text = s;
    }

private:
    bool head_tag(const std::string& tag) const {
        return tag == "title" || tag == "meta" || tag == "link" ||
               tag == "base" || tag == "style" || tag == "script" ||
               tag == "noscript";
    }

    // False when the insertion point sits at the bare html element, i.e.
    // before head/body exist or after a stray </body>.
    bool inside_section() const { return stack_.size() > 1; }

    Node* ensure_head() {
        if (!head_) {
            head_ = adopt_child(NodeType::Element);
            head_->tag = "head";
        }
        return head_;
    }

    Node* ensure_body() {
        body_started_ = true;
        if (!body_) {
            body_ = adopt_child(NodeType::Element);
            body_->tag = "body";
        }
        return body_;
    }

    Node* adopt_child(NodeType type) {
        auto owned = std::make_unique<Node>();
        Node* node = owned.get();
        node->type = type;
        node->parent = doc_.root.get();
        node->order = next_order_++;
        doc_.root->children.push_back(std::move(owned));
        return node;
    }

    Node* append_node(NodeType type) {
        Node* parent = stack_.back();
        auto owned = std::make_unique<Node>();
        Node* node = owned.get();
        node->type = type;
        node->parent = parent;
        node->order = next_order_++;
        parent->children.push_back(std::move(owned));
        return node;
    }

    static void merge_attrs(Node& node, const std::map<std::string, std::string>& attrs) {
        for (const auto& [k, v] : attrs) {
            node.attrs.emplace(k, v);  // first occurrence wins
        }
    }

    void pop_open(const std::string& tag, const std::set<std::string>& stop) {
        for (std::size_t i = stack_.size(); i-- > 1;) {
            Node* n = stack_[i];
            if (n == body_ || n == head_ || stop.count(n->tag)) return;
            if (n->tag == tag) {
                stack_.resize(i);
                return;
            }
        }
    }

    void close_implied_by(const std::string& tag) {
        static const std::set<std::string> list_stop = {"ul", "ol"};
        static const std::set<std::string> dl_stop = {"dl"};
        static const std::set<std::string> cell_stop = {"tr", "table"};
        static const std::set<std::string> row_stop = {"table", "thead", "tbody", "tfoot"};
        static const std::set<std::string> section_stop = {"table"};
        static const std::set<std::string> select_stop = {"select"};

        if (p_closers().count(tag)) pop_open("p", {});
        if (tag == "li") pop_open("li", list_stop);
        if (tag == "dt" || tag == "dd") {
            pop_open("dt", dl_stop);
            pop_open("dd", dl_stop);
        }
        if (tag == "td" || tag == "th") {
            pop_open("td", cell_stop);
            pop_open("th", cell_stop);
        }
        if (tag == "tr") pop_open("tr", row_stop);
        if (tag == "thead" || tag == "tbody" || tag == "tfoot") {
            pop_open("thead", section_stop);
            pop_open("tbody", section_stop);
            pop_open("tfoot", section_stop);
        }
        if (tag == "option") pop_open("option", select_stop);
    }

    // Assigns dom paths; the ordinal appears only when the tag repeats
    // among element siblings.
    static void compute_paths(Node& node, const std::string& path) {
        node.path = path;
        std::map<std::string, int> totals;
        for (const auto& child : node.children) {
            if (child->is_element()) ++totals[child->tag];
        }
        std::map<std::string, int> seen;
        for (const auto& child : node.children) {
            if (!child->is_element()) continue;
            int idx = ++seen[child->tag];
            std::string child_path = path + "/" + child->tag;
            if (totals[child->tag] > 1) {
                child_path += "[" + std::to_string(idx) + "]";
            }
            compute_paths(*child, child_path);
        }
    }

    Document doc_;
    std::vector<Node*> stack_;
    Node* head_ = nullptr;
    Node* body_ = nullptr;
    bool body_started_ = false;
    int next_order_ = 0;
};

struct ParsedTag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool self_closing = false;
    std::size_t end = 0;  // position just past '>'
};

// Parses an open tag starting at the '<'. Tolerates missing '>', odd
// quoting, and duplicate attributes.
ParsedTag parse_open_tag(std::string_view input, std::size_t start) {
    ParsedTag tag;
    std::size_t i = start + 1;
    std::size_t n = input.size();

    std::size_t name_start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(input[i])) &&
           input[i] != '>' && input[i] != '/') {
        ++i;
    }
    tag.name = ascii_lower(input.substr(name_start, i - name_start));

    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(input[i]))) ++i;
        if (i >= n) break;
        if (input[i] == '>') {
            ++i;
            break;
        }
        if (input[i] == '/') {
            ++i;
            if (i < n && input[i] == '>') {
                tag.self_closing = true;
                ++i;
                break;
            }
            continue;
        }
        std::size_t attr_start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(input[i])) &&
               input[i] != '=' && input[i] != '>' && input[i] != '/') {
            ++i;
        }
        std::string attr_name = ascii_lower(input.substr(attr_start, i - attr_start));
        std::string attr_value;
        while (i < n && std::isspace(static_cast<unsigned char>(input[i]))) ++i;
        if (i < n && input[i] == '=') {
            ++i;
            while (i < n && std::isspace(static_cast<unsigned char>(input[i]))) ++i;
            if (i < n && (input[i] == '"' || input[i] == '\'')) {
                char quote = input[i++];
                std::size_t value_start = i;
                while (i < n && input[i] != quote) ++i;
                attr_value = decode_entities(input.substr(value_start, i - value_start));
                if (i < n) ++i;
            } else {
                std::size_t value_start = i;
                while (i < n && !std::isspace(static_cast<unsigned char>(input[i])) &&
                       input[i] != '>') {
                    ++i;
                }
                attr_value = decode_entities(input.substr(value_start, i - value_start));
            }
        }
        if (!attr_name.empty()) {
            tag.attrs.emplace(attr_name, attr_value);
        }
    }
    tag.end = i;
    return tag;
}

// An unclosed <title> must not swallow the rest of the page: its text scan
// also stops at tags that can only mean the document structure resumed.
std::size_t find_title_break(std::string_view input, std::size_t from) {
    static const std::array<std::string_view, 3> needles = {"</head", "<body", "</html"};
    for (std::size_t i = from; i < input.size(); ++i) {
        if (input[i] != '<') continue;
        for (std::string_view needle : needles) {
            if (i + needle.size() > input.size()) continue;
            bool match = true;
            for (std::size_t k = 1; k < needle.size(); ++k) {
                char c = input[i + k];
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
                if (c != needle[k]) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            std::size_t after = i + needle.size();
            if (after >= input.size() || input[after] == '>' || input[after] == '/' ||
                std::isspace(static_cast<unsigned char>(input[after]))) {
                return i;
            }
        }
    }
    return std::string_view::npos;
}

// Finds the matching "</tag" for a raw-text element, case-insensitive.
std::size_t find_close_tag(std::string_view input, std::size_t from, const std::string& tag) {
    std::string needle = "</" + tag;
    for (std::size_t i = from; i + needle.size() <= input.size(); ++i) {
        if (input[i] != '<' || input[i + 1] != '/') continue;
        bool match = true;
        for (std::size_t k = 2; k < needle.size(); ++k) {
            char c = input[i + k];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
            if (c != needle[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::size_t after = i + needle.size();
        if (after >= input.size() || input[after] == '>' || input[after] == '/' ||
            std::isspace(static_cast<unsigned char>(input[after]))) {
            return i;
        }
    }
    return std::string_view::npos;
}

}  // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        if (i + 1 < n && text[i + 1] == '#') {
            std::size_t j = i + 2;
            bool hex = j < n && (text[j] == 'x' || text[j] == 'X');
            if (hex) ++j;
            std::uint64_t value = 0;
            std::size_t digits_start = j;
            while (j < n) {
                char d = text[j];
                int v;
                if (d >= '0' && d <= '9') v = d - '0';
                else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
                else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
                else break;
                if (value < 0x200000) value = value * (hex ? 16 : 10) + static_cast<std::uint64_t>(v);
                ++j;
            }
            if (j == digits_start) {
                out.push_back('&');
                ++i;
                continue;
            }
            char32_t cp = static_cast<char32_t>(value);
            if (cp == 0 || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) cp = 0xfffd;
            cp = remap_c1(cp);
            append_utf8(out, cp);
            if (j < n && text[j] == ';') ++j;
            i = j;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && j - i <= 12 &&
               (std::isalnum(static_cast<unsigned char>(text[j])))) {
            ++j;
        }
        std::string name(text.substr(i + 1, j - i - 1));
        auto it = named_entities().find(name);
        if (it != named_entities().end() && j < n && text[j] == ';') {
            append_utf8(out, it->second);
            i = j + 1;
            continue;
        }
        if (it != named_entities().end() && legacy_entity(name)) {
            append_utf8(out, it->second);
            i = j;
            continue;
        }
        out.push_back('&');
        ++i;
    }
    return out;
}

Document parse_html(std::string_view input) {
    Builder builder;
    std::size_t i = 0;
    std::size_t n = input.size();

    while (i < n) {
        if (input[i] != '<') {
            std::size_t next = input.find('<', i);
            if (next == std::string_view::npos) next = n;
            builder.text(decode_entities(input.substr(i, next - i)));
            i = next;
            continue;
        }
        if (input.compare(i, 4, "<!--") == 0) {
            std::size_t end = input.find("-->", i + 4);
            i = end == std::string_view::npos ? n : end + 3;
            continue;
        }
        if (input.compare(i, 9, "<![CDATA[") == 0) {
            std::size_t end = input.find("]]>", i + 9);
            i = end == std::string_view::npos ? n : end + 3;
            continue;
        }
        if (i + 1 < n && (input[i + 1] == '!' || input[i + 1] == '?')) {
            std::size_t end = input.find('>', i);
            i = end == std::string_view::npos ? n : end + 1;
            continue;
        }
        if (i + 1 < n && input[i + 1] == '/') {
            std::size_t name_start = i + 2;
            std::size_t j = name_start;
            while (j < n && !std::isspace(static_cast<unsigned char>(input[j])) &&
                   input[j] != '>') {
                ++j;
            }
            std::string name = ascii_lower(input.substr(name_start, j - name_start));
            std::size_t end = input.find('>', j);
            i = end == std::string_view::npos ? n : end + 1;
            if (!name.empty()) builder.close(name);
            continue;
        }
        if (i + 1 < n && is_ascii_alpha(input[i + 1])) {
            ParsedTag tag = parse_open_tag(input, i);
            i = tag.end;
            bool raw = is_raw_text(tag.name);
            bool rcdata = is_rcdata(tag.name);
            bool self_closing = tag.self_closing;
            std::string name = tag.name;
            builder.open(name, std::move(tag.attrs), self_closing);
            if (!self_closing && (raw || rcdata)) {
                std::size_t close = find_close_tag(input, i, name);
                if (name == "title") {
                    std::size_t brk = find_title_break(input, i);
                    if (brk < close) {
                        builder.text(decode_entities(input.substr(i, brk - i)));
                        builder.close(name);
                        i = brk;
                        continue;
                    }
                }
                std::size_t content_end = close == std::string_view::npos ? n : close;
                std::string_view content = input.substr(i, content_end - i);
                builder.text(rcdata ? decode_entities(content) : std::string(content));
                if (close == std::string_view::npos) {
                    i = n;
                } else {
                    std::size_t end = input.find('>', close);
                    i = end == std::string_view::npos ? n : end + 1;
                }
                builder.close(name);
            }
            continue;
        }
        // Bare '<' that never became a tag: literal text.
        builder.text("<");
        ++i;
    }
    return builder.take();
}

const Node* Document::find_first(std::string_view tag) const {
    const Node* found = nullptr;
    walk(*root, [&](const Node& n) {
        if (!found && n.is_element() && n.tag == tag) found = &n;
    });
    return found;
}

void walk(const Node& node, const std::function<void(const Node&)>& fn) {
    fn(node);
    for (const auto& child : node.children) {
        walk(*child, fn);
    }
}

bool renderable_context(const Node& node) {
    static const std::set<std::string> excluded = {
        "script", "style", "noscript", "template", "head", "title",
    };
    for (const Node* n = &node; n != nullptr; n = n->parent) {
        if (n->is_element() && excluded.count(n->tag)) return false;
    }
    return true;
}

bool is_renderable_text(const Node& node) {
    if (!node.is_text()) return false;
    if (all_whitespace(node.text)) return false;
    return renderable_context(node);
}

}  // namespace museum::html
