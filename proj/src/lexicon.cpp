#include "museum/lexicon.hpp"

#include "museum/errors.hpp"
#include "museum/unicode.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace museum {

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an",
        "and", "any", "are", "as", "at", "be", "because", "been", "before",
        "being", "below", "between", "both", "but", "by", "can", "cannot",
        "could", "did", "do", "does", "doing", "down", "during", "each",
        "few", "for", "from", "further", "had", "has", "have", "having",
        "he", "her", "here", "hers", "herself", "him", "himself", "his",
        "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
        "me", "more", "most", "my", "myself", "no", "nor", "not", "now",
        "of", "off", "on", "once", "only", "or", "other", "our", "ours",
        "ourselves", "out", "over", "own", "same", "she", "should", "so",
        "some", "such", "than", "that", "the", "their", "theirs", "them",
        "themselves", "then", "there", "these", "they", "this", "those",
        "through", "to", "too", "under", "until", "up", "very", "was", "we",
        "were", "what", "when", "where", "which", "while", "who", "whom",
        "why", "will", "with", "would", "you", "your", "yours", "yourself",
        "yourselves",
    };
    return words;
}

namespace {

// Folds and strips one whitespace-free word; empty result means the word
// was all punctuation.
std::string normalize_word(std::u32string_view word) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && !is_token_char(word[b])) ++b;
    while (e > b && !is_token_char(word[e - 1])) --e;
    std::string out;
    for (std::size_t i = b; i < e; ++i) append_utf8(out, word[i]);
    return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::set<std::string>& stopwords) {
    std::vector<Token> out;
    std::u32string word;
    auto flush = [&]() {
        if (word.empty()) return;
        std::string tok = normalize_word(word);
        word.clear();
        if (!tok.empty() && stopwords.find(tok) == stopwords.end()) {
            out.push_back(std::move(tok));
        }
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        DecodedChar dc = decode_utf8(text, pos);
        pos += dc.length;
        if (is_unicode_space(dc.cp)) {
            flush();
        } else {
            word.push_back(fold_char(dc.cp));
        }
    }
    flush();
    return out;
}

TokenSet tokenize_set(std::string_view text, const std::set<std::string>& stopwords) {
    std::vector<Token> toks = tokenize(text, stopwords);
    return TokenSet(toks.begin(), toks.end());
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw EngineError(ErrorKind::NotFound, "cannot open stop-word file: " + path.string());
    }
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '#') continue;
        // Normalize with an empty stop set; the file defines the stop set.
        for (Token& t : tokenize(line, {})) {
            words.insert(std::move(t));
        }
    }
    return words;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path,
                                    const std::set<std::string>& stopwords) {
    std::ifstream in(path);
    if (!in) {
        throw EngineError(ErrorKind::NotFound, "cannot open lexicon file: " + path.string());
    }
    SynonymLexicon lex;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& reason) -> EngineError {
        return EngineError(ErrorKind::ParseError,
                           path.string() + ":" + std::to_string(lineno) + ": " + reason);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw fail("expected `term<TAB>syn1,syn2,...`");
        }
        std::vector<Token> term_toks = tokenize(line.substr(0, tab), stopwords);
        if (term_toks.size() != 1) {
            throw fail("term must normalize to exactly one token: `" +
                       line.substr(0, tab) + "`");
        }
        const Token& term = term_toks.front();

        TokenSet synonyms;
        std::string rest = line.substr(tab + 1);
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::vector<Token> syn_toks = tokenize(item, stopwords);
            if (syn_toks.size() != 1) {
                throw fail("synonym must normalize to exactly one token: `" + item + "`");
            }
            if (syn_toks.front() == term) {
                throw EngineError(ErrorKind::SelfSynonym,
                                  path.string() + ":" + std::to_string(lineno) +
                                      ": token is its own synonym: " + term);
            }
            synonyms.insert(syn_toks.front());
        }
        if (!synonyms.empty()) {
            auto it = lex.entries_.find(term);
            if (it == lex.entries_.end()) {
                lex.entries_.emplace(term, std::move(synonyms));
            } else {
                it->second.insert(synonyms.begin(), synonyms.end());
            }
        }
    }
    return lex;
}

const TokenSet& SynonymLexicon::syn(const Token& term) const {
    static const TokenSet empty;
    auto it = entries_.find(term);
    return it == entries_.end() ? empty : it->second;
}

TokenSet SynonymLexicon::syn_union(const TokenSet& terms) const {
    TokenSet out;
    for (const Token& t : terms) {
        const TokenSet& s = syn(t);
        out.insert(s.begin(), s.end());
    }
    return out;
}

void SynonymLexicon::add(const Token& term, const TokenSet& synonyms) {
    if (synonyms.count(term)) {
        throw EngineError(ErrorKind::SelfSynonym, "token is its own synonym: " + term);
    }
    if (synonyms.empty()) return;
    auto it = entries_.find(term);
    if (it == entries_.end()) {
        entries_.emplace(term, synonyms);
    } else {
        it->second.insert(synonyms.begin(), synonyms.end());
    }
}

TokenSet set_intersection(const TokenSet& a, const TokenSet& b) {
    TokenSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

std::size_t intersection_size(const TokenSet& a, const TokenSet& b) {
    const TokenSet& small = a.size() <= b.size() ? a : b;
    const TokenSet& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const Token& t : small) {
        if (large.count(t)) ++n;
    }
    return n;
}

bool sets_intersect(const TokenSet& a, const TokenSet& b) {
    const TokenSet& small = a.size() <= b.size() ? a : b;
    const TokenSet& large = a.size() <= b.size() ? b : a;
    for (const Token& t : small) {
        if (large.count(t)) return true;
    }
    return false;
}

}  // namespace museum
