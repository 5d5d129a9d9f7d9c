#pragma once

#include "museum/lexicon.hpp"

#include <filesystem>
#include <string>

namespace museum {

struct UserProfile {
    std::string profile_id;
    TokenSet keywords;
};

// One keyword per line, '#' lines are comments; keywords are tokenized with
// the same rules as document text. An empty file is a valid anonymous
// profile.
UserProfile load_profile(const std::filesystem::path& path,
                         const TokenSet& stopwords = default_stopwords());

}  // namespace museum
