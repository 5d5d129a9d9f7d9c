#pragma once

#include "museum/evolution.hpp"
#include "museum/lexicon.hpp"
#include "museum/profile.hpp"
#include "museum/rational.hpp"
#include "museum/segmenter.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace museum {

// Normalized query terms plus their synonym sets, precomputed at build time
// so scoring never consults the lexicon.
struct Query {
    TokenSet terms;
    std::map<Token, TokenSet> synonyms;  // term -> non-empty synonym set
    TokenSet synonym_union;

    // terms ∪ all synonyms: the content whose pre-existence in a prior
    // version gates freshness.
    TokenSet queried_content() const;

    static Query make(const TokenSet& terms, const SynonymLexicon& lex);
};

struct VisualWeightTable {
    std::map<std::string, Rational> entries;  // markup class -> weight, >= 0

    Rational weight(const std::string& cls) const;  // absent class -> 0
    static VisualWeightTable defaults();            // h1:3 h2:5/2 h3:2 bold:2 em:3/2
};

struct SegmentScore {
    Rational freshness;
    Rational theme;
    Rational link;
    Rational visual;
    Rational profile;
    Rational image;
    Rational total;
};

struct PageScore {
    struct Entry {
        Fingerprint fingerprint;
        std::string dom_path;
        SegmentScore score;
    };
    std::string url;
    TokenSet query_terms;
    std::vector<Entry> segments;  // document order
    Rational page_score;
};

struct ScoreOptions {
    // false: gate freshness on the single most recent prior version;
    // true: on every prior version in the track.
    bool check_full_history = false;
};

// Individual coefficients. Synonym matches count half an exact match.
Rational actual_freshness(const Segment& seg, const Query& q, const std::optional<Segment>& prior);
Rational synonym_freshness(const Segment& seg, const Query& q, const std::optional<Segment>& prior);
Rational freshness_weight(const Segment& seg, const Query& q, const std::optional<Segment>& prior);
Rational theme_weight(const Segment& seg, const TokenSet& title, const SynonymLexicon& lex);
Rational image_weight(const Segment& seg, const Query& q);
Rational link_weight(const Segment& seg, const Query& q);
Rational profile_weight(const Segment& seg, const TokenSet& profile, const SynonymLexicon& lex);
Rational visual_weight(const Segment& seg, const Query& q, const VisualWeightTable& table);

SegmentScore segment_total(Rational freshness, Rational theme, Rational link, Rational visual,
                           Rational profile, Rational image);

// Arithmetic mean of segment totals. Throws NoSegments on an empty list.
Rational page_score(const std::vector<SegmentScore>& scores);

// Scores every segment of `snap` in document order; freshness priors come
// from `track` restricted to snapshots strictly before snap.captured_at.
PageScore score_page(const PageSnapshot& snap, const Query& q, const TokenSet& profile,
                     const EvolutionTrack& track, const VisualWeightTable& table,
                     const SynonymLexicon& lex, const ScoreOptions& opts = {});

nlohmann::ordered_json page_score_to_json(const PageScore& score);

// Per-coefficient evidence for one segment: which tokens matched exactly,
// which matched through the lexicon (and as synonyms of what).
struct MatchDetail {
    TokenSet exact;
    std::map<Token, TokenSet> synonym;  // matched synonym -> source terms
    Rational value;
};

struct VisualDetail {
    std::string cls;
    Rational weight;
    TokenSet matched;  // query terms inside this markup class
};

struct SegmentExplanation {
    Fingerprint fingerprint;
    std::string dom_path;
    bool gated = false;
    std::optional<std::int64_t> gated_by;  // snapshot whose content caused the gate
    std::optional<std::int64_t> prior_at;
    std::optional<MatchVia> prior_via;
    MatchDetail freshness;
    MatchDetail theme;
    MatchDetail link;
    std::vector<VisualDetail> visual;  // classes with at least one match
    MatchDetail profile;
    MatchDetail image;
    SegmentScore score;
};

SegmentExplanation explain_segment(const PageSnapshot& snap, const Segment& seg, const Query& q,
                                   const TokenSet& profile, const EvolutionTrack& track,
                                   const VisualWeightTable& table, const SynonymLexicon& lex,
                                   const ScoreOptions& opts = {});

}  // namespace museum
