#pragma once

#include "museum/hash.hpp"
#include "museum/lexicon.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace museum {

// One timestamped capture of a URL, before segmentation.
struct RawPage {
    std::string url;
    std::int64_t fetched_at = 0;  // seconds, UTC, caller-supplied
    std::string html;             // raw bytes, decoded lossily
};

using Fingerprint = Digest128;

// A non-overlapping block of the page. Token sets are tokenizer-normalized;
// anchor text lands in both text_tokens and link_tokens; visual_spans maps
// a markup class ("bold", "h1", ...) to the tokens inside that markup.
struct Segment {
    Fingerprint fingerprint;
    std::string dom_path;
    TokenSet text_tokens;
    TokenSet link_tokens;
    TokenSet image_alt_tokens;
    std::map<std::string, TokenSet> visual_spans;
};

struct PageSnapshot {
    std::string url;
    std::int64_t captured_at = 0;
    TokenSet title_tokens;
    std::vector<Segment> segments;  // document order
};

struct SegmenterConfig {
    // A block element qualifies as a segment root when its subtree holds
    // at least this many normalized tokens. 0 degenerates to one segment
    // per top-level block.
    std::size_t min_tokens = 10;
    std::set<std::string> block_elements = default_block_elements();
    std::set<std::string> stopwords = default_stopwords();

    static std::set<std::string> default_block_elements();
};

// Stable identity of a segment: a 128-bit hash over the dom path and the
// sorted text tokens, one per line. Pure function of its inputs.
Fingerprint fingerprint_segment(const std::string& dom_path, const TokenSet& text_tokens);

// Markup tag -> visual class ("b"/"strong" -> "bold", "i"/"em" -> "em",
// headings and "u"/"mark" keep their name). Empty string for everything else.
std::string visual_class_for_tag(const std::string& tag);

// Partitions the page into segments: maximal block-rooted subtrees whose
// token count clears min_tokens, plus one residue segment per parent for
// any renderable text the subtrees missed. Deterministic; throws
// DecodeFailure on empty input and EmptyDocument when the page has no
// renderable text at all.
PageSnapshot segment_page(const RawPage& page, const SegmenterConfig& cfg = {});

// segment_page plus the document-order ids of the text nodes each segment
// covers, so partition properties can be checked from outside.
struct SegmentationDetail {
    PageSnapshot snapshot;
    std::vector<std::vector<int>> covered_text_orders;  // parallel to segments
};
SegmentationDetail segment_page_detailed(const RawPage& page, const SegmenterConfig& cfg = {});

// Throws Validation unless url is non-empty, whitespace-free, and has a
// scheme://rest shape.
void validate_url(const std::string& url);

}  // namespace museum
