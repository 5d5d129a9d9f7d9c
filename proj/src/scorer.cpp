#include "museum/scorer.hpp"

#include "museum/errors.hpp"

#include <utility>

namespace museum {

namespace {

std::map<Token, TokenSet> synonyms_of(const TokenSet& base, const SynonymLexicon& lex) {
    std::map<Token, TokenSet> out;
    for (const auto& term : base) {
        const TokenSet& syns = lex.syn(term);
        if (!syns.empty()) out[term] = syns;
    }
    return out;
}

// |base ∩ target| plus half a point per distinct synonym token present,
// with the evidence retained for explanations.
MatchDetail match_detail(const TokenSet& base, const std::map<Token, TokenSet>& synonyms,
                         const TokenSet& target) {
    MatchDetail detail;
    detail.exact = set_intersection(base, target);
    for (const auto& [term, syns] : synonyms) {
        for (const auto& syn : syns) {
            if (target.contains(syn)) detail.synonym[syn].insert(term);
        }
    }
    detail.value = Rational(static_cast<long long>(detail.exact.size())) +
                   Rational(static_cast<long long>(detail.synonym.size()), 2);
    return detail;
}

bool gate_passes(const Query& q, const std::optional<Segment>& prior) {
    if (!prior) return true;
    return is_fresh(std::optional<TokenSet>(prior->text_tokens), q.queried_content());
}

// Resolves the prior version used for the freshness gate. Under full-history
// checking, any prior version whose text holds queried content blocks the
// gate; the newest such version is surfaced so explanations can cite it.
std::optional<MatchedPrior> gate_prior(const Segment& seg, const Query& q,
                                       const EvolutionTrack& track, std::int64_t before,
                                       const ScoreOptions& opts) {
    if (!opts.check_full_history) return track.match_prior(seg, before);
    const TokenSet queried = q.queried_content();
    for (const auto& prior : track.match_all_priors(seg, before)) {
        if (sets_intersect(prior.segment.text_tokens, queried)) return prior;
    }
    return track.match_prior(seg, before);
}

SegmentScore score_one(const Segment& seg, const Query& q, const TokenSet& profile,
                       const std::optional<Segment>& prior, const TokenSet& title,
                       const VisualWeightTable& table, const SynonymLexicon& lex) {
    return segment_total(freshness_weight(seg, q, prior), theme_weight(seg, title, lex),
                         link_weight(seg, q), visual_weight(seg, q, table),
                         profile_weight(seg, profile, lex), image_weight(seg, q));
}

}  // namespace

TokenSet Query::queried_content() const {
    TokenSet out = terms;
    out.insert(synonym_union.begin(), synonym_union.end());
    return out;
}

Query Query::make(const TokenSet& terms, const SynonymLexicon& lex) {
    if (terms.empty()) throw EngineError(ErrorKind::EmptyQuery, "query has no terms");
    Query q;
    q.terms = terms;
    for (const auto& term : terms) {
        const TokenSet& syns = lex.syn(term);
        if (syns.empty()) continue;
        q.synonyms[term] = syns;
        q.synonym_union.insert(syns.begin(), syns.end());
    }
    return q;
}

Rational VisualWeightTable::weight(const std::string& cls) const {
    auto it = entries.find(cls);
    return it == entries.end() ? Rational(0) : it->second;
}

VisualWeightTable VisualWeightTable::defaults() {
    VisualWeightTable t;
    t.entries["h1"] = Rational(3);
    t.entries["h2"] = Rational(5, 2);
    t.entries["h3"] = Rational(2);
    t.entries["bold"] = Rational(2);
    t.entries["em"] = Rational(3, 2);
    return t;
}

Rational actual_freshness(const Segment& seg, const Query& q,
                          const std::optional<Segment>& prior) {
    if (!gate_passes(q, prior)) return Rational(0);
    return Rational(static_cast<long long>(intersection_size(q.terms, seg.text_tokens)));
}

Rational synonym_freshness(const Segment& seg, const Query& q,
                           const std::optional<Segment>& prior) {
    if (!gate_passes(q, prior)) return Rational(0);
    return Rational(static_cast<long long>(intersection_size(q.synonym_union, seg.text_tokens)),
                    2);
}

Rational freshness_weight(const Segment& seg, const Query& q,
                          const std::optional<Segment>& prior) {
    return actual_freshness(seg, q, prior) + synonym_freshness(seg, q, prior);
}

Rational theme_weight(const Segment& seg, const TokenSet& title, const SynonymLexicon& lex) {
    return match_detail(title, synonyms_of(title, lex), seg.text_tokens).value;
}

Rational image_weight(const Segment& seg, const Query& q) {
    return match_detail(q.terms, q.synonyms, seg.image_alt_tokens).value;
}

Rational link_weight(const Segment& seg, const Query& q) {
    return match_detail(q.terms, q.synonyms, seg.link_tokens).value;
}

Rational profile_weight(const Segment& seg, const TokenSet& profile, const SynonymLexicon& lex) {
    return match_detail(profile, synonyms_of(profile, lex), seg.text_tokens).value;
}

Rational visual_weight(const Segment& seg, const Query& q, const VisualWeightTable& table) {
    Rational sum(0);
    for (const auto& [cls, tokens] : seg.visual_spans) {
        Rational w = table.weight(cls);
        if (w.is_zero()) continue;
        sum += w * Rational(static_cast<long long>(intersection_size(q.terms, tokens)));
    }
    return sum;
}

SegmentScore segment_total(Rational freshness, Rational theme, Rational link, Rational visual,
                           Rational profile, Rational image) {
    SegmentScore s;
    s.freshness = freshness;
    s.theme = theme;
    s.link = link;
    s.visual = visual;
    s.profile = profile;
    s.image = image;
    s.total = freshness + theme + link + visual + profile + image;
    return s;
}

Rational page_score(const std::vector<SegmentScore>& scores) {
    if (scores.empty()) throw EngineError(ErrorKind::NoSegments, "page score of zero segments");
    Rational sum(0);
    for (const auto& s : scores) sum += s.total;
    return sum / Rational(static_cast<long long>(scores.size()));
}

PageScore score_page(const PageSnapshot& snap, const Query& q, const TokenSet& profile,
                     const EvolutionTrack& track, const VisualWeightTable& table,
                     const SynonymLexicon& lex, const ScoreOptions& opts) {
    if (q.terms.empty()) throw EngineError(ErrorKind::EmptyQuery, "query has no terms");
    if (snap.segments.empty())
        throw EngineError(ErrorKind::NoSegments, "snapshot has no segments");

    PageScore out;
    out.url = snap.url;
    out.query_terms = q.terms;
    std::vector<SegmentScore> scores;
    for (const auto& seg : snap.segments) {
        auto matched = gate_prior(seg, q, track, snap.captured_at, opts);
        std::optional<Segment> prior;
        if (matched) prior = matched->segment;
        SegmentScore s = score_one(seg, q, profile, prior, snap.title_tokens, table, lex);
        scores.push_back(s);
        out.segments.push_back({seg.fingerprint, seg.dom_path, s});
    }
    out.page_score = page_score(scores);
    return out;
}

nlohmann::ordered_json page_score_to_json(const PageScore& score) {
    nlohmann::ordered_json j;
    j["url"] = score.url;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : score.query_terms) terms.push_back(t);
    j["query"] = terms;
    j["page_score"] = score.page_score.to_decimal_string();
    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    for (const auto& entry : score.segments) {
        nlohmann::ordered_json s;
        s["fingerprint"] = entry.fingerprint.to_hex();
        s["dom_path"] = entry.dom_path;
        nlohmann::ordered_json c;
        c["freshness"] = entry.score.freshness.to_decimal_string();
        c["theme"] = entry.score.theme.to_decimal_string();
        c["link"] = entry.score.link.to_decimal_string();
        c["visual"] = entry.score.visual.to_decimal_string();
        c["profile"] = entry.score.profile.to_decimal_string();
        c["image"] = entry.score.image.to_decimal_string();
        s["coefficients"] = c;
        s["total"] = entry.score.total.to_decimal_string();
        segs.push_back(std::move(s));
    }
    j["segments"] = segs;
    return j;
}

SegmentExplanation explain_segment(const PageSnapshot& snap, const Segment& seg, const Query& q,
                                   const TokenSet& profile, const EvolutionTrack& track,
                                   const VisualWeightTable& table, const SynonymLexicon& lex,
                                   const ScoreOptions& opts) {
    SegmentExplanation ex;
    ex.fingerprint = seg.fingerprint;
    ex.dom_path = seg.dom_path;

    auto matched = gate_prior(seg, q, track, snap.captured_at, opts);
    std::optional<Segment> prior;
    if (matched) {
        prior = matched->segment;
        ex.prior_at = matched->captured_at;
        ex.prior_via = matched->via;
    }
    ex.gated = !gate_passes(q, prior);
    if (ex.gated) ex.gated_by = matched->captured_at;

    if (!ex.gated) ex.freshness = match_detail(q.terms, q.synonyms, seg.text_tokens);
    ex.freshness.value = freshness_weight(seg, q, prior);
    ex.theme = match_detail(snap.title_tokens, synonyms_of(snap.title_tokens, lex),
                            seg.text_tokens);
    ex.link = match_detail(q.terms, q.synonyms, seg.link_tokens);
    ex.profile = match_detail(profile, synonyms_of(profile, lex), seg.text_tokens);
    ex.image = match_detail(q.terms, q.synonyms, seg.image_alt_tokens);
    for (const auto& [cls, tokens] : seg.visual_spans) {
        TokenSet hit = set_intersection(q.terms, tokens);
        if (!hit.empty()) ex.visual.push_back({cls, table.weight(cls), std::move(hit)});
    }
    ex.score = score_one(seg, q, profile, prior, snap.title_tokens, table, lex);
    return ex;
}

}  // namespace museum
