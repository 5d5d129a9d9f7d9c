#include "museum/segmenter.hpp"

#include "museum/errors.hpp"
#include "museum/html.hpp"
#include "museum/unicode.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace museum {

namespace {

using html::Node;

struct PendingSegment {
    std::string dom_path;
    int position = 0;  // document order of the first covered node
    std::vector<const Node*> text_nodes;
    std::vector<const Node*> image_nodes;
};

std::size_t count_subtree_tokens(const Node& node,
                                 const std::set<std::string>& stopwords,
                                 std::unordered_map<const Node*, std::size_t>& memo) {
    auto it = memo.find(&node);
    if (it != memo.end()) return it->second;
    std::size_t total = 0;
    if (node.is_text()) {
        if (html::is_renderable_text(node)) {
            total = tokenize(node.text, stopwords).size();
        }
    } else {
        for (const auto& child : node.children) {
            total += count_subtree_tokens(*child, stopwords, memo);
        }
    }
    memo.emplace(&node, total);
    return total;
}

void collect_subtree(const Node& node, PendingSegment& seg) {
    if (node.is_text()) {
        if (html::is_renderable_text(node)) seg.text_nodes.push_back(&node);
        return;
    }
    if (node.tag == "img" && html::renderable_context(node)) {
        seg.image_nodes.push_back(&node);
    }
    for (const auto& child : node.children) {
        collect_subtree(*child, seg);
    }
}

// Walks below a non-qualifying element: qualifying block subtrees become
// segments, everything else bubbles up as per-parent leftovers.
void select_segments(const Node& node, const SegmenterConfig& cfg,
                     std::unordered_map<const Node*, std::size_t>& counts,
                     std::vector<PendingSegment>& subtree_segments,
                     std::map<const Node*, PendingSegment>& residues) {
    for (const auto& child : node.children) {
        if (child->is_text()) {
            if (!html::is_renderable_text(*child)) continue;
            auto [it, fresh] = residues.try_emplace(&node);
            if (fresh) {
                it->second.dom_path = node.path + "/#text";
                it->second.position = child->order;
            }
            it->second.text_nodes.push_back(child.get());
            continue;
        }
        const Node& elem = *child;
        if (cfg.block_elements.count(elem.tag) &&
            count_subtree_tokens(elem, cfg.stopwords, counts) >= cfg.min_tokens) {
            PendingSegment seg;
            seg.dom_path = elem.path;
            seg.position = elem.order;
            collect_subtree(elem, seg);
            subtree_segments.push_back(std::move(seg));
            continue;
        }
        if (elem.tag == "img" && html::renderable_context(elem)) {
            const std::string* alt = elem.attr("alt");
            if (alt && !tokenize(*alt, cfg.stopwords).empty()) {
                auto [it, fresh] = residues.try_emplace(&node);
                if (fresh) {
                    it->second.dom_path = node.path + "/#text";
                    it->second.position = elem.order;
                }
                it->second.image_nodes.push_back(&elem);
            }
            continue;
        }
        select_segments(elem, cfg, counts, subtree_segments, residues);
    }
}

Segment build_segment(const PendingSegment& pending, const SegmenterConfig& cfg) {
    Segment seg;
    seg.dom_path = pending.dom_path;
    for (const Node* text_node : pending.text_nodes) {
        std::vector<Token> toks = tokenize(text_node->text, cfg.stopwords);
        if (toks.empty()) continue;
        bool in_anchor = false;
        std::set<std::string> classes;
        for (const Node* a = text_node->parent; a != nullptr; a = a->parent) {
            if (a->tag == "a") in_anchor = true;
            std::string cls = visual_class_for_tag(a->tag);
            if (!cls.empty()) classes.insert(cls);
        }
        for (const Token& t : toks) {
            seg.text_tokens.insert(t);
            if (in_anchor) seg.link_tokens.insert(t);
            for (const std::string& cls : classes) {
                seg.visual_spans[cls].insert(t);
            }
        }
    }
    for (const Node* img : pending.image_nodes) {
        if (const std::string* alt = img->attr("alt")) {
            for (const Token& t : tokenize(*alt, cfg.stopwords)) {
                seg.image_alt_tokens.insert(t);
            }
        }
    }
    seg.fingerprint = fingerprint_segment(seg.dom_path, seg.text_tokens);
    return seg;
}

}  // namespace

std::set<std::string> SegmenterConfig::default_block_elements() {
    return {"div", "section", "article", "table", "ul", "ol",
            "nav", "header", "footer", "aside", "main", "p"};
}

Fingerprint fingerprint_segment(const std::string& dom_path, const TokenSet& text_tokens) {
    std::string message = dom_path;
    for (const Token& t : text_tokens) {
        message.push_back('\n');
        message.append(t);
    }
    return murmur3_x64_128(message);
}

std::string visual_class_for_tag(const std::string& tag) {
    if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') return tag;
    if (tag == "b" || tag == "strong") return "bold";
    if (tag == "i" || tag == "em") return "em";
    if (tag == "u") return "u";
    if (tag == "mark") return "mark";
    return {};
}

void validate_url(const std::string& url) {
    if (url.empty()) {
        throw EngineError(ErrorKind::Validation, "url is empty");
    }
    for (unsigned char c : url) {
        if (std::isspace(c) || c < 0x20) {
            throw EngineError(ErrorKind::Validation,
                              "url contains whitespace or control characters: " + url);
        }
    }
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos || scheme_end == 0 ||
        scheme_end + 3 >= url.size()) {
        throw EngineError(ErrorKind::Validation, "url is not scheme://rest: " + url);
    }
    for (std::size_t i = 0; i < scheme_end; ++i) {
        char c = url[i];
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
        if (!ok || (i == 0 && !std::isalpha(static_cast<unsigned char>(c)))) {
            throw EngineError(ErrorKind::Validation, "url has an invalid scheme: " + url);
        }
    }
}

SegmentationDetail segment_page_detailed(const RawPage& page, const SegmenterConfig& cfg) {
    validate_url(page.url);
    if (page.html.empty()) {
        throw EngineError(ErrorKind::DecodeFailure, "page body is empty: " + page.url);
    }
    std::string decoded = lossy_decode_utf8(page.html);
    html::Document doc = html::parse_html(decoded);

    bool any_renderable = false;
    html::walk(*doc.root, [&](const Node& n) {
        if (!any_renderable && html::is_renderable_text(n)) any_renderable = true;
    });
    if (!any_renderable) {
        throw EngineError(ErrorKind::EmptyDocument,
                          "no renderable text nodes: " + page.url);
    }

    PageSnapshot snap;
    snap.url = page.url;
    snap.captured_at = page.fetched_at;
    if (const Node* title = doc.find_first("title")) {
        std::string title_text;
        html::walk(*title, [&](const Node& n) {
            if (n.is_text()) title_text += n.text + " ";
        });
        snap.title_tokens = tokenize_set(title_text, cfg.stopwords);
    }

    std::vector<PendingSegment> pending;
    {
        std::unordered_map<const Node*, std::size_t> counts;
        std::map<const Node*, PendingSegment> residues;
        // All renderable text sits under body by construction; the walk
        // starts at the root so stray trees never escape coverage.
        select_segments(*doc.root, cfg, counts, pending, residues);
        for (auto& [parent, seg] : residues) {
            pending.push_back(std::move(seg));
        }
    }
    std::sort(pending.begin(), pending.end(),
              [](const PendingSegment& a, const PendingSegment& b) {
                  return a.position < b.position;
              });

    SegmentationDetail detail;
    for (const PendingSegment& p : pending) {
        detail.snapshot.segments.push_back(build_segment(p, cfg));
        std::vector<int> orders;
        orders.reserve(p.text_nodes.size());
        for (const Node* t : p.text_nodes) orders.push_back(t->order);
        detail.covered_text_orders.push_back(std::move(orders));
    }
    detail.snapshot.url = snap.url;
    detail.snapshot.captured_at = snap.captured_at;
    detail.snapshot.title_tokens = std::move(snap.title_tokens);
    return detail;
}

PageSnapshot segment_page(const RawPage& page, const SegmenterConfig& cfg) {
    return segment_page_detailed(page, cfg).snapshot;
}

}  // namespace museum
