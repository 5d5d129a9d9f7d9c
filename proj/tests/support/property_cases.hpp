#pragma once

// Deterministic random scoring scenarios, shared by the property suite and
// the acceptance checks. Everything is drawn from a seeded mt19937_64, so a
// failing case number reproduces exactly.

#include <museum/scorer.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testing {

struct PropertyCase {
    museum::SynonymLexicon lexicon;
    museum::Query query;
    museum::TokenSet title;
    museum::TokenSet profile;
    museum::VisualWeightTable table;
    museum::Segment segment;
    std::optional<museum::Segment> prior;
};

class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {
        for (int i = 0; i < 12; ++i) qpool_.push_back("q" + two(i));
        for (int i = 0; i < 12; ++i) spool_.push_back("s" + two(i));
        for (int i = 0; i < 20; ++i) fpool_.push_back("f" + two(i));
        for (const char* c : {"h1", "h2", "h3", "bold", "em", "mark"}) classes_.push_back(c);
    }

    PropertyCase next() {
        PropertyCase pc;

        // Lexicon: a random subset of the query pool gets 1-2 synonyms.
        for (const auto& term : qpool_) {
            if (!chance(2, 5)) continue;
            pc.lexicon.add(term, pick(spool_, 1 + below(2)));
        }

        pc.title = pick(mixed(), below(5));
        pc.profile = pick(mixed(), below(4));
        for (const auto& cls : classes_)
            if (chance(3, 4)) pc.table.entries[cls] = museum::Rational(below(17), 4);

        pc.segment = random_segment("/html/body/div[" + std::to_string(1 + below(9)) + "]");

        switch (below(10)) {
            case 0: case 1: case 2:
                break;  // brand-new segment, no prior
            case 3: case 4: {
                museum::Segment prior = pc.segment;  // unchanged recapture
                pc.prior = prior;
                break;
            }
            default:
                pc.prior = random_segment(pc.segment.dom_path);
        }

        museum::TokenSet terms = pick(qpool_, 1 + below(4));
        pc.query = museum::Query::make(terms, pc.lexicon);
        return pc;
    }

    std::uint64_t below(std::uint64_t n) {  // uniform in [0, n)
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_);
    }

    // Every token that can appear as a lexicon key.
    const std::vector<museum::Token>& query_pool() const { return qpool_; }

private:
    static std::string two(int i) {
        std::string s = std::to_string(i);
        return s.size() < 2 ? "0" + s : s;
    }

    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    std::vector<museum::Token> mixed() {
        std::vector<museum::Token> all = qpool_;
        all.insert(all.end(), spool_.begin(), spool_.end());
        all.insert(all.end(), fpool_.begin(), fpool_.end());
        return all;
    }

    museum::TokenSet pick(const std::vector<museum::Token>& pool, std::uint64_t count) {
        museum::TokenSet out;
        for (std::uint64_t i = 0; i < count; ++i) out.insert(pool[below(pool.size())]);
        return out;
    }

    museum::Segment random_segment(const std::string& dom_path) {
        museum::Segment seg;
        seg.dom_path = dom_path;
        seg.text_tokens = pick(mixed(), 5 + below(11));
        seg.link_tokens = pick(mixed(), below(4));
        seg.image_alt_tokens = pick(mixed(), below(4));
        std::vector<museum::Token> text(seg.text_tokens.begin(), seg.text_tokens.end());
        for (const auto& cls : classes_) {
            if (!chance(1, 3)) continue;
            museum::TokenSet span = pick(text, 1 + below(3));
            if (!span.empty()) seg.visual_spans[cls] = span;
        }
        seg.fingerprint = museum::fingerprint_segment(seg.dom_path, seg.text_tokens);
        return seg;
    }

    std::mt19937_64 rng_;
    std::vector<museum::Token> qpool_, spool_, fpool_;
    std::vector<std::string> classes_;
};

}  // namespace testing
