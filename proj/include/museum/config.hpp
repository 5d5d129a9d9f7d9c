#pragma once

#include "museum/scorer.hpp"
#include "museum/segmenter.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace museum {

// Engine-wide settings. File format is a TOML subset: [section] headers,
// dotted keys, strings, integers, decimals, booleans, and single-line string
// arrays. Unknown keys are rejected so typos fail loudly. A [visual_weights]
// section replaces the default table entirely.
struct EngineConfig {
    std::filesystem::path store_root = "./store";
    std::size_t min_tokens = 10;
    std::set<std::string> block_elements = SegmenterConfig::default_block_elements();
    VisualWeightTable visual_weights = VisualWeightTable::defaults();
    std::optional<std::filesystem::path> lexicon_path;
    std::optional<std::filesystem::path> stopwords_path;
    bool check_full_history = false;

    // Relative paths in the file resolve against the file's directory.
    static EngineConfig load_file(const std::filesystem::path& path);
    static EngineConfig from_text(std::string_view text, const std::string& source_name);
};

}  // namespace museum
