#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace museum {

// A token is lowercase, has no interior whitespace, and no leading or
// trailing punctuation. Produced only by tokenize().
using Token = std::string;
using TokenSet = std::set<Token>;

// Built-in English stop-word list (~120 words). Overridable via a one
// token per line file.
const std::set<std::string>& default_stopwords();

std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Splits on Unicode whitespace, case-folds, strips leading/trailing
// punctuation, drops stop words and empty results. Order preserved,
// duplicates kept (callers build sets where set semantics apply).
std::vector<Token> tokenize(std::string_view text,
                            const std::set<std::string>& stopwords = default_stopwords());

TokenSet tokenize_set(std::string_view text,
                      const std::set<std::string>& stopwords = default_stopwords());

class SynonymLexicon {
public:
    SynonymLexicon() = default;

    // TSV format, one entry per line: `term<TAB>syn1,syn2,...`. Lines
    // starting with '#' are comments. Entries are normalized through the
    // tokenizer; a term mapping to itself is rejected. Duplicate term
    // lines merge their synonym sets.
    static SynonymLexicon load(const std::filesystem::path& path,
                               const std::set<std::string>& stopwords = default_stopwords());

    // Lookup never includes the term itself; absent terms yield {}.
    const TokenSet& syn(const Token& term) const;

    // Union of syn() over every token in the set.
    TokenSet syn_union(const TokenSet& terms) const;

    void add(const Token& term, const TokenSet& synonyms);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<Token, TokenSet> entries_;
};

// Set helpers used by every coefficient. All exact set semantics.
TokenSet set_intersection(const TokenSet& a, const TokenSet& b);
std::size_t intersection_size(const TokenSet& a, const TokenSet& b);
bool sets_intersect(const TokenSet& a, const TokenSet& b);

}  // namespace museum
