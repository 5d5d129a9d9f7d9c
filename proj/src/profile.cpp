#include "museum/profile.hpp"

#include "museum/errors.hpp"

#include <fstream>
#include <sstream>

namespace museum {

UserProfile load_profile(const std::filesystem::path& path, const TokenSet& stopwords) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw EngineError(ErrorKind::NotFound, "profile file not found: " + path.string());

    UserProfile profile;
    profile.profile_id = path.stem().string();
    if (profile.profile_id.empty()) profile.profile_id = path.string();

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        for (const auto& tok : tokenize(line, stopwords)) profile.keywords.insert(tok);
    }
    if (in.bad())
        throw EngineError(ErrorKind::StoreIo, "cannot read profile: " + path.string());
    return profile;
}

}  // namespace museum
