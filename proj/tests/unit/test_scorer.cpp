#include <doctest.h>

#include "museum/errors.hpp"
#include "museum/scorer.hpp"

#include <optional>

using museum::EngineError;
using museum::ErrorKind;
using museum::EvolutionTrack;
using museum::PageSnapshot;
using museum::Query;
using museum::Rational;
using museum::Segment;
using museum::SegmentScore;
using museum::SynonymLexicon;
using museum::TokenSet;
using museum::VisualWeightTable;

namespace {

Segment seg_with_text(const TokenSet& text, const std::string& dom_path = "/html/body/div[1]") {
    Segment seg;
    seg.dom_path = dom_path;
    seg.text_tokens = text;
    seg.fingerprint = museum::fingerprint_segment(dom_path, text);
    return seg;
}

SynonymLexicon lex_solar() {
    SynonymLexicon lex;
    lex.add("solar", {"photovoltaic"});
    return lex;
}

Query q_solar_energy() { return Query::make({"energy", "solar"}, lex_solar()); }

}  // namespace

TEST_CASE("query construction") {
    Query q = q_solar_energy();
    CHECK(q.terms == TokenSet{"energy", "solar"});
    CHECK(q.synonyms.at("solar") == TokenSet{"photovoltaic"});
    CHECK(q.synonyms.count("energy") == 0);  // no empty synonym entries
    CHECK(q.synonym_union == TokenSet{"photovoltaic"});
    CHECK(q.queried_content() == TokenSet{"energy", "photovoltaic", "solar"});
    CHECK_THROWS_AS(Query::make({}, lex_solar()), EngineError);
}

TEST_CASE("actual freshness") {
    Query q = q_solar_energy();
    Segment seg = seg_with_text({"cost", "energy", "panel", "solar"});

    CHECK(museum::actual_freshness(seg, q, std::nullopt) == Rational(2));

    // Identical prior: gate fails.
    CHECK(museum::actual_freshness(seg, q, seg) == Rational(0));

    Query wind = Query::make({"wind"}, SynonymLexicon());
    CHECK(museum::actual_freshness(seg_with_text({"solar"}), wind, std::nullopt) == Rational(0));
}

TEST_CASE("synonym freshness") {
    Query q = q_solar_energy();
    Segment seg = seg_with_text({"array", "photovoltaic"});
    CHECK(museum::synonym_freshness(seg, q, std::nullopt) == Rational(1, 2));

    Query plain = Query::make({"solar"}, SynonymLexicon());
    CHECK(museum::synonym_freshness(seg, plain, std::nullopt) == Rational(0));

    CHECK(museum::synonym_freshness(seg, q, seg) == Rational(0));  // unchanged prior
}

TEST_CASE("freshness weight sums actual and synonym parts") {
    Query q = q_solar_energy();
    Segment merged = seg_with_text({"array", "cost", "energy", "panel", "photovoltaic", "solar"});
    CHECK(museum::freshness_weight(merged, q, std::nullopt) == Rational(5, 2));

    Segment empty = seg_with_text({"unrelated"});
    CHECK(museum::freshness_weight(empty, q, std::nullopt) == Rational(0));

    // Gate dominance: identical prior zeroes it regardless of overlap.
    CHECK(museum::freshness_weight(merged, q, merged) == Rational(0));

    // The gate also trips on synonym-only pre-existence.
    Segment photo_only = seg_with_text({"photovoltaic", "solar"});
    Segment prior = seg_with_text({"photovoltaic"});
    CHECK(museum::freshness_weight(photo_only, q, prior) == Rational(0));
}

TEST_CASE("theme weight") {
    SynonymLexicon lex = lex_solar();
    Segment seg = seg_with_text({"cost", "energy", "panel", "solar"});
    CHECK(museum::theme_weight(seg, {"energy", "guide", "solar"}, lex) == Rational(2));
    CHECK(museum::theme_weight(seg, {}, lex) == Rational(0));

    SynonymLexicon power;
    power.add("power", {"energy"});
    CHECK(museum::theme_weight(seg_with_text({"energy"}), {"power"}, power) == Rational(1, 2));
}

TEST_CASE("image weight") {
    Query q = q_solar_energy();
    Segment seg = seg_with_text({"whatever"});
    seg.image_alt_tokens = {"array", "photovoltaic"};
    CHECK(museum::image_weight(seg, q) == Rational(1, 2));

    Segment none = seg_with_text({"whatever"});
    CHECK(museum::image_weight(none, q) == Rational(0));

    Segment exact = seg_with_text({"whatever"});
    exact.image_alt_tokens = {"solar"};
    CHECK(museum::image_weight(exact, q) == Rational(1));
}

TEST_CASE("link weight") {
    Query q = q_solar_energy();
    Segment seg = seg_with_text({"deals", "solar"});
    seg.link_tokens = {"deals", "solar"};
    CHECK(museum::link_weight(seg, q) == Rational(1));

    CHECK(museum::link_weight(seg_with_text({"solar"}), q) == Rational(0));

    Segment syn = seg_with_text({"photovoltaic"});
    syn.link_tokens = {"photovoltaic"};
    CHECK(museum::link_weight(syn, q) == Rational(1, 2));
}

TEST_CASE("profile weight") {
    SynonymLexicon lex = lex_solar();
    Segment seg = seg_with_text({"cost", "energy", "panel", "solar"});
    CHECK(museum::profile_weight(seg, {"energy", "finance"}, lex) == Rational(1));
    CHECK(museum::profile_weight(seg, {}, lex) == Rational(0));

    SynonymLexicon power;
    power.add("power", {"energy"});
    CHECK(museum::profile_weight(seg_with_text({"energy"}), {"power"}, power) == Rational(1, 2));
}

TEST_CASE("visual weight") {
    Query q = q_solar_energy();
    VisualWeightTable bold2;
    bold2.entries["bold"] = Rational(2);

    Segment seg = seg_with_text({"energy", "solar"});
    seg.visual_spans["bold"] = {"solar"};
    CHECK(museum::visual_weight(seg, q, bold2) == Rational(2));

    CHECK(museum::visual_weight(seg_with_text({"solar"}), q, bold2) == Rational(0));

    VisualWeightTable both = bold2;
    both.entries["h1"] = Rational(3);
    Segment two = seg_with_text({"energy", "solar"});
    two.visual_spans["bold"] = {"solar"};
    two.visual_spans["h1"] = {"energy"};
    CHECK(museum::visual_weight(two, q, both) == Rational(5));

    // Classes absent from the table score zero.
    Segment marked = seg_with_text({"solar"});
    marked.visual_spans["mark"] = {"solar"};
    CHECK(museum::visual_weight(marked, q, bold2) == Rational(0));

    // Synonyms never count for visual weight.
    Segment syn = seg_with_text({"photovoltaic"});
    syn.visual_spans["bold"] = {"photovoltaic"};
    CHECK(museum::visual_weight(syn, q, bold2) == Rational(0));
}

TEST_CASE("segment total") {
    SegmentScore s = museum::segment_total(Rational(5, 2), Rational(2), Rational(1), Rational(2),
                                           Rational(1), Rational(1, 2));
    CHECK(s.total == Rational(9));

    CHECK(museum::segment_total(0, 0, 0, 0, 0, 0).total == Rational(0));
    CHECK(museum::segment_total(Rational(1, 2), 0, 0, 0, 0, 0).total == Rational(1, 2));
}

TEST_CASE("page score is the exact mean") {
    auto with_total = [](Rational t) {
        return museum::segment_total(t, 0, 0, 0, 0, 0);
    };
    CHECK(museum::page_score({with_total(9), with_total(1)}) == Rational(5));
    CHECK(museum::page_score({with_total(Rational(17, 4))}) == Rational(17, 4));
    CHECK(museum::page_score({with_total(0), with_total(0), with_total(0)}) == Rational(0));
    // Non-terminating means stay exact.
    CHECK(museum::page_score({with_total(1), with_total(0), with_total(0)}) == Rational(1, 3));
    CHECK_THROWS_AS(museum::page_score({}), EngineError);
}

TEST_CASE("score_page on the canonical fixture") {
    SynonymLexicon lex = lex_solar();
    Query q = q_solar_energy();

    Segment a = seg_with_text({"cost", "energy", "panel", "solar"});
    a.link_tokens = {"deals", "solar"};
    a.image_alt_tokens = {"array", "photovoltaic"};
    a.visual_spans["bold"] = {"solar"};

    Segment zero = seg_with_text({"unrelated", "words"}, "/html/body/div[2]");

    PageSnapshot snap;
    snap.url = "https://example.org/page";
    snap.captured_at = 100;
    snap.title_tokens = {"energy", "guide", "solar"};
    snap.segments = {a, zero};

    VisualWeightTable table;
    table.entries["bold"] = Rational(2);

    EvolutionTrack empty_track;
    museum::PageScore ps =
        museum::score_page(snap, q, {"energy", "finance"}, empty_track, table, lex);

    REQUIRE(ps.segments.size() == 2);
    const SegmentScore& sa = ps.segments[0].score;
    CHECK(sa.freshness == Rational(2));
    CHECK(sa.theme == Rational(2));
    CHECK(sa.link == Rational(1));
    CHECK(sa.visual == Rational(2));
    CHECK(sa.profile == Rational(1));
    CHECK(sa.image == Rational(1, 2));
    CHECK(sa.total == Rational(17, 2));
    CHECK(ps.segments[1].score.total == Rational(0));
    CHECK(ps.page_score == Rational(17, 4));

    // Scoring is read-only: a second run returns the identical result.
    museum::PageScore again =
        museum::score_page(snap, q, {"energy", "finance"}, empty_track, table, lex);
    CHECK(museum::page_score_to_json(again) == museum::page_score_to_json(ps));

    // JSON rendering uses shortest exact decimals.
    auto j = museum::page_score_to_json(ps);
    CHECK(j["page_score"] == "4.25");
    CHECK(j["segments"][0]["total"] == "8.5");
    CHECK(j["segments"][0]["coefficients"]["image"] == "0.5");
    CHECK(j["segments"][0]["coefficients"]["freshness"] == "2");
}

TEST_CASE("score_page: query absent everywhere scores zero") {
    SynonymLexicon lex;
    Query q = Query::make({"nonexistent"}, lex);
    PageSnapshot snap;
    snap.url = "https://example.org/page";
    snap.captured_at = 100;
    snap.segments = {seg_with_text({"alpha", "beta"})};
    EvolutionTrack track;
    auto ps = museum::score_page(snap, q, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(ps.page_score == Rational(0));
}

TEST_CASE("score_page errors") {
    SynonymLexicon lex;
    PageSnapshot snap;
    snap.url = "https://example.org/page";
    snap.segments = {seg_with_text({"x"})};
    EvolutionTrack track;

    Query empty;  // bypasses make() to hit score_page's own check
    CHECK_THROWS_AS(
        museum::score_page(snap, empty, {}, track, VisualWeightTable::defaults(), lex),
        EngineError);

    PageSnapshot no_segments;
    no_segments.url = snap.url;
    Query q = Query::make({"x"}, lex);
    try {
        museum::score_page(no_segments, q, {}, track, VisualWeightTable::defaults(), lex);
        FAIL("expected NoSegments");
    } catch (const EngineError& e) {
        CHECK(e.kind() == ErrorKind::NoSegments);
    }
}

TEST_CASE("score_page applies the freshness gate from track history") {
    SynonymLexicon lex;
    Query q = Query::make({"alpha"}, lex);
    Segment v1 = seg_with_text({"alpha", "beta"});

    EvolutionTrack track;
    PageSnapshot s1;
    s1.url = "https://example.org/page";
    s1.captured_at = 100;
    s1.segments = {v1};
    track.append(s1);

    // Unchanged at t=200: fingerprint match, gated.
    PageSnapshot s2 = s1;
    s2.captured_at = 200;
    auto ps2 = museum::score_page(s2, q, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(ps2.segments[0].score.freshness == Rational(0));

    // Edited in place but alpha persists: dom_path match, still gated.
    PageSnapshot s3 = s1;
    s3.captured_at = 200;
    s3.segments = {seg_with_text({"alpha", "gamma"})};
    auto ps3 = museum::score_page(s3, q, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(ps3.segments[0].score.freshness == Rational(0));

    // Replaced content: for query gamma the matched prior lacks gamma, so
    // the gate passes and the new gamma counts.
    PageSnapshot s4 = s1;
    s4.captured_at = 200;
    s4.segments = {seg_with_text({"gamma", "delta"})};
    Query qg = Query::make({"gamma"}, lex);
    auto ps4 = museum::score_page(s4, qg, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(ps4.segments[0].score.freshness == Rational(1));
}

TEST_CASE("check_full_history widens the gate") {
    SynonymLexicon lex;
    Query q = Query::make({"alpha"}, lex);

    EvolutionTrack track;
    PageSnapshot s1;
    s1.url = "https://example.org/page";
    s1.captured_at = 100;
    s1.segments = {seg_with_text({"alpha", "beta"})};
    track.append(s1);
    PageSnapshot s2 = s1;
    s2.captured_at = 200;
    s2.segments = {seg_with_text({"gamma", "delta"})};
    track.append(s2);

    // Current content re-adds alpha at t=300 with text unlike either prior.
    PageSnapshot s3 = s1;
    s3.captured_at = 300;
    s3.segments = {seg_with_text({"alpha", "zeta"})};

    // Most-recent-prior semantics: matched prior is s2 (dom_path), which
    // lacks alpha -> fresh.
    auto lax = museum::score_page(s3, q, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(lax.segments[0].score.freshness == Rational(1));

    // Full-history semantics: s1 had alpha -> gated.
    museum::ScoreOptions opts;
    opts.check_full_history = true;
    auto strict =
        museum::score_page(s3, q, {}, track, VisualWeightTable::defaults(), lex, opts);
    CHECK(strict.segments[0].score.freshness == Rational(0));
}

TEST_CASE("explain_segment mirrors score_page and carries evidence") {
    SynonymLexicon lex = lex_solar();
    Query q = q_solar_energy();

    Segment a = seg_with_text({"cost", "energy", "panel", "solar"});
    a.link_tokens = {"deals", "solar"};
    a.image_alt_tokens = {"array", "photovoltaic"};
    a.visual_spans["bold"] = {"solar"};

    PageSnapshot snap;
    snap.url = "https://example.org/page";
    snap.captured_at = 100;
    snap.title_tokens = {"energy", "guide", "solar"};
    snap.segments = {a};

    VisualWeightTable table;
    table.entries["bold"] = Rational(2);
    EvolutionTrack track;

    auto ex = museum::explain_segment(snap, a, q, {"energy", "finance"}, track, table, lex);
    CHECK_FALSE(ex.gated);
    CHECK(ex.freshness.exact == TokenSet{"energy", "solar"});
    CHECK(ex.freshness.synonym.empty());
    CHECK(ex.link.exact == TokenSet{"solar"});
    CHECK(ex.image.exact.empty());
    REQUIRE(ex.image.synonym.count("photovoltaic") == 1);
    CHECK(ex.image.synonym.at("photovoltaic") == TokenSet{"solar"});
    REQUIRE(ex.visual.size() == 1);
    CHECK(ex.visual[0].cls == "bold");
    CHECK(ex.visual[0].weight == Rational(2));
    CHECK(ex.visual[0].matched == TokenSet{"solar"});
    CHECK(ex.score.total == Rational(17, 2));

    // Same numbers as score_page for the same segment.
    auto ps = museum::score_page(snap, q, {"energy", "finance"}, track, table, lex);
    CHECK(ps.segments[0].score.total == ex.score.total);
    CHECK(ps.segments[0].score.freshness == ex.score.freshness);
}

TEST_CASE("explain_segment reports the gate") {
    SynonymLexicon lex;
    Query q = Query::make({"alpha"}, lex);
    Segment v1 = seg_with_text({"alpha", "beta"});

    EvolutionTrack track;
    PageSnapshot s1;
    s1.url = "https://example.org/page";
    s1.captured_at = 100;
    s1.segments = {v1};
    track.append(s1);

    PageSnapshot s2 = s1;
    s2.captured_at = 200;
    auto ex = museum::explain_segment(s2, v1, q, {}, track, VisualWeightTable::defaults(), lex);
    CHECK(ex.gated);
    CHECK(ex.gated_by == 100);
    CHECK(ex.prior_via == museum::MatchVia::Fingerprint);
    CHECK(ex.score.freshness == Rational(0));
    CHECK(ex.freshness.exact.empty());  // no evidence lines when gated
}
