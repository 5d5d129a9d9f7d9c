#include "museum/config.hpp"
#include "museum/errors.hpp"
#include "museum/evolution.hpp"
#include "museum/profile.hpp"
#include "museum/scorer.hpp"
#include "museum/segmenter.hpp"
#include "museum/snapshot_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using museum::EngineError;
using museum::ErrorKind;
using nlohmann::ordered_json;

namespace {

struct Engine {
    museum::EngineConfig cfg;
    museum::TokenSet stopwords;
    museum::SynonymLexicon lexicon;
    museum::SegmenterConfig segmenter;
    museum::TrackStore store;
    museum::ScoreOptions score_opts;

    explicit Engine(museum::EngineConfig c)
        : cfg(std::move(c)),
          stopwords(cfg.stopwords_path ? museum::load_stopwords(*cfg.stopwords_path)
                                       : museum::default_stopwords()),
          lexicon(cfg.lexicon_path ? museum::SynonymLexicon::load(*cfg.lexicon_path, stopwords)
                                   : museum::SynonymLexicon()),
          store(cfg.store_root) {
        segmenter.min_tokens = cfg.min_tokens;
        segmenter.block_elements = cfg.block_elements;
        segmenter.stopwords = stopwords;
        score_opts.check_full_history = cfg.check_full_history;
    }
};

museum::EngineConfig load_config(const std::optional<std::string>& config_flag,
                                 const std::optional<std::string>& store_flag) {
    museum::EngineConfig cfg;
    if (config_flag) {
        cfg = museum::EngineConfig::load_file(*config_flag);
    } else if (fs::exists("museum.toml")) {
        cfg = museum::EngineConfig::load_file("museum.toml");
    }
    if (const char* env = std::getenv("MUSEUM_STORE"); env && *env) cfg.store_root = env;
    if (store_flag) cfg.store_root = *store_flag;
    return cfg;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError(ErrorKind::NotFound, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw EngineError(ErrorKind::StoreIo, "cannot read " + path);
    return buf.str();
}

museum::TokenSet load_profile_keywords(const Engine& eng,
                                       const std::optional<std::string>& path) {
    if (!path) return {};
    return museum::load_profile(*path, eng.stopwords).keywords;
}

museum::Query build_query(const Engine& eng, const std::vector<std::string>& words) {
    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined.push_back(' ');
        joined += w;
    }
    museum::TokenSet terms = museum::tokenize_set(joined, eng.stopwords);
    if (terms.empty())
        throw EngineError(ErrorKind::EmptyQuery, "query normalizes to no terms: '" + joined + "'");
    return museum::Query::make(terms, eng.lexicon);
}

museum::EvolutionTrack load_track(const Engine& eng, const std::string& url) {
    museum::EvolutionTrack track = eng.store.load(url);
    if (track.empty())
        throw EngineError(ErrorKind::NotFound, "no snapshots in store for url: " + url);
    return track;
}

const museum::PageSnapshot& pick_snapshot(const museum::EvolutionTrack& track,
                                          const std::optional<std::int64_t>& at) {
    if (!at) return *track.latest();
    const museum::PageSnapshot* snap = track.at_or_before(*at);
    if (!snap)
        throw EngineError(ErrorKind::Validation,
                          "no snapshot of " + track.url() + " at or before " +
                              std::to_string(*at));
    return *snap;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_ingest(const Engine& eng, const std::string& html_path, const std::string& url,
               std::int64_t at) {
    museum::RawPage page{url, at, read_input(html_path)};
    museum::PageSnapshot snap = museum::segment_page(page, eng.segmenter);
    museum::TrackStore store = eng.store;
    store.ingest(url, snap);
    ordered_json report;
    report["url"] = url;
    report["captured_at"] = at;
    report["segment_count"] = snap.segments.size();
    emit(report);
    return 0;
}

int cmd_score(const Engine& eng, const std::string& url, const std::vector<std::string>& words,
              const std::optional<std::string>& profile_path,
              const std::optional<std::int64_t>& at) {
    museum::Query q = build_query(eng, words);
    museum::TokenSet profile = load_profile_keywords(eng, profile_path);
    museum::EvolutionTrack track = load_track(eng, url);
    const museum::PageSnapshot& snap = pick_snapshot(track, at);
    museum::PageScore score = museum::score_page(snap, q, profile, track, eng.cfg.visual_weights,
                                                 eng.lexicon, eng.score_opts);
    emit(museum::page_score_to_json(score));
    return 0;
}

int cmd_rank(const Engine& eng, const std::string& query_text,
             const std::vector<std::string>& urls,
             const std::optional<std::string>& profile_path) {
    museum::Query q = build_query(eng, {query_text});
    museum::TokenSet profile = load_profile_keywords(eng, profile_path);

    std::vector<std::string> unknown;
    for (const auto& url : urls) {
        if (!eng.store.has_track(url) || eng.store.load(url).empty()) unknown.push_back(url);
    }
    if (!unknown.empty()) {
        std::string msg = "no snapshots in store for url(s):";
        for (const auto& u : unknown) msg += " " + u;
        throw EngineError(ErrorKind::NotFound, msg);
    }

    struct Row {
        std::string url;
        museum::Rational score;
    };
    std::vector<Row> rows;
    for (const auto& url : urls) {
        museum::EvolutionTrack track = load_track(eng, url);
        const museum::PageSnapshot& snap = *track.latest();
        museum::PageScore score = museum::score_page(snap, q, profile, track,
                                                     eng.cfg.visual_weights, eng.lexicon,
                                                     eng.score_opts);
        rows.push_back({url, score.page_score});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.score != b.score) return b.score < a.score;
        return a.url < b.url;
    });

    ordered_json out = ordered_json::array();
    int rank = 1;
    for (const auto& row : rows) {
        ordered_json r;
        r["rank"] = rank++;
        r["url"] = row.url;
        r["page_score"] = row.score.to_decimal_string();
        out.push_back(std::move(r));
    }
    emit(out);
    return 0;
}

std::string join_tokens(const museum::TokenSet& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ", ";
        out += t;
    }
    return out;
}

void print_matches(std::ostream& os, const museum::MatchDetail& d) {
    if (d.exact.empty() && d.synonym.empty()) {
        os << "  no matches\n";
        return;
    }
    if (!d.exact.empty()) os << "  exact: " << join_tokens(d.exact) << "\n";
    if (!d.synonym.empty()) {
        os << "  synonyms: ";
        bool first = true;
        for (const auto& [syn, sources] : d.synonym) {
            if (!first) os << ", ";
            first = false;
            os << syn << " (syn of " << join_tokens(sources) << ")";
        }
        os << "\n";
    }
}

int cmd_explain(const Engine& eng, const std::string& url, const std::string& fingerprint_hex,
                const std::vector<std::string>& words,
                const std::optional<std::string>& profile_path,
                const std::optional<std::int64_t>& at) {
    museum::Fingerprint fp;
    try {
        fp = museum::Fingerprint::from_hex(fingerprint_hex);
    } catch (const std::exception&) {
        throw EngineError(ErrorKind::Validation, "malformed fingerprint: " + fingerprint_hex);
    }
    museum::Query q = build_query(eng, words);
    museum::TokenSet profile = load_profile_keywords(eng, profile_path);
    museum::EvolutionTrack track = load_track(eng, url);
    const museum::PageSnapshot& snap = pick_snapshot(track, at);

    const museum::Segment* seg = nullptr;
    for (const auto& s : snap.segments) {
        if (s.fingerprint == fp) seg = &s;
    }
    if (!seg)
        throw EngineError(ErrorKind::Validation,
                          "fingerprint " + fingerprint_hex + " not present in snapshot " +
                              std::to_string(snap.captured_at));

    museum::SegmentExplanation ex = museum::explain_segment(
        snap, *seg, q, profile, track, eng.cfg.visual_weights, eng.lexicon, eng.score_opts);

    std::ostringstream os;
    os << "url: " << url << "\n";
    os << "captured_at: " << snap.captured_at << "\n";
    os << "segment: " << ex.fingerprint.to_hex() << "\n";
    os << "dom_path: " << ex.dom_path << "\n";
    os << "query: " << join_tokens(q.terms) << "\n";

    os << "freshness: " << ex.score.freshness.to_decimal_string() << "\n";
    if (ex.gated) {
        os << "  gated: content pre-existed in snapshot " << *ex.gated_by << "\n";
    } else {
        if (ex.prior_at) {
            os << "  prior: snapshot " << *ex.prior_at << " ("
               << (ex.prior_via == museum::MatchVia::Fingerprint ? "fingerprint" : "dom_path")
               << " match), no queried content pre-existed\n";
        } else {
            os << "  new segment: no prior version\n";
        }
        print_matches(os, ex.freshness);
    }

    os << "theme: " << ex.score.theme.to_decimal_string() << "\n";
    print_matches(os, ex.theme);
    os << "link: " << ex.score.link.to_decimal_string() << "\n";
    print_matches(os, ex.link);
    os << "visual: " << ex.score.visual.to_decimal_string() << "\n";
    if (ex.visual.empty()) {
        os << "  no matches\n";
    } else {
        for (const auto& v : ex.visual) {
            os << "  " << v.cls << " (weight " << v.weight.to_decimal_string()
               << "): " << join_tokens(v.matched) << "\n";
        }
    }
    os << "profile: " << ex.score.profile.to_decimal_string() << "\n";
    print_matches(os, ex.profile);
    os << "image: " << ex.score.image.to_decimal_string() << "\n";
    print_matches(os, ex.image);
    os << "total: " << ex.score.total.to_decimal_string() << "\n";
    std::cout << os.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"museum: segment-level web page relevance engine"};
    app.require_subcommand(1);

    std::optional<std::string> config_flag;
    std::optional<std::string> store_flag;
    app.add_option("--config", config_flag, "config file (default ./museum.toml if present)");
    app.add_option("--store", store_flag, "snapshot store root (overrides config and MUSEUM_STORE)");

    auto* ingest = app.add_subcommand("ingest", "segment a page and append it to its track");
    ingest->fallthrough();
    std::string ingest_html;
    std::string ingest_url;
    std::int64_t ingest_at = 0;
    ingest->add_option("html", ingest_html, "HTML file path, or - for stdin")->required();
    ingest->add_option("--url", ingest_url, "page URL (track key)")->required();
    ingest->add_option("--at", ingest_at, "capture timestamp (seconds, UTC)")->required();

    auto* score = app.add_subcommand("score", "score a stored page against a query");
    score->fallthrough();
    std::string score_url;
    std::vector<std::string> score_query;
    std::optional<std::string> score_profile;
    std::int64_t score_at = 0;
    score->add_option("url", score_url, "page URL")->required();
    score->add_option("query", score_query, "query terms")->required()->expected(-1);
    score->add_option("--profile", score_profile, "profile keyword file");
    auto* score_at_opt = score->add_option("--at", score_at, "score the snapshot at or before this time");

    auto* rank = app.add_subcommand("rank", "order pages by score for a query");
    rank->fallthrough();
    std::string rank_query;
    std::vector<std::string> rank_urls;
    std::optional<std::string> rank_profile;
    rank->add_option("query", rank_query, "query string")->required();
    rank->add_option("urls", rank_urls, "page URLs")->required()->expected(-1);
    rank->add_option("--profile", rank_profile, "profile keyword file");

    auto* explain = app.add_subcommand("explain", "show per-coefficient match evidence for one segment");
    explain->fallthrough();
    std::string explain_url;
    std::string explain_fp;
    std::vector<std::string> explain_query;
    std::optional<std::string> explain_profile;
    std::int64_t explain_at = 0;
    explain->add_option("url", explain_url, "page URL")->required();
    explain->add_option("fingerprint", explain_fp, "segment fingerprint (32 hex chars)")->required();
    explain->add_option("query", explain_query, "query terms")->required()->expected(-1);
    explain->add_option("--profile", explain_profile, "profile keyword file");
    auto* explain_at_opt = explain->add_option("--at", explain_at, "explain the snapshot at or before this time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Engine eng(load_config(config_flag, store_flag));
        if (ingest->parsed()) return cmd_ingest(eng, ingest_html, ingest_url, ingest_at);
        if (score->parsed()) {
            std::optional<std::int64_t> at;
            if (score_at_opt->count() > 0) at = score_at;
            return cmd_score(eng, score_url, score_query, score_profile, at);
        }
        if (rank->parsed()) return cmd_rank(eng, rank_query, rank_urls, rank_profile);
        if (explain->parsed()) {
            std::optional<std::int64_t> at;
            if (explain_at_opt->count() > 0) at = explain_at;
            return cmd_explain(eng, explain_url, explain_fp, explain_query, explain_profile, at);
        }
        return 2;
    } catch (const EngineError& e) {
        std::cerr << "error: " << museum::error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return e.is_store_io() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
