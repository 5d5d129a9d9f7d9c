#pragma once

#include "museum/segmenter.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace museum {

// Where a prior version of a segment was found: by content fingerprint
// (identical token set at the same dom_path) or, failing that, by position
// (same dom_path, content changed).
enum class MatchVia { Fingerprint, DomPath };

struct MatchedPrior {
    Segment segment;
    std::int64_t captured_at = 0;
    MatchVia via = MatchVia::Fingerprint;
};

// A segment is fresh for some queried content (query terms plus all their
// synonyms) when it has no prior version, or its prior version's text shares
// no tokens with that content. Stale segments score zero freshness.
bool is_fresh(const std::optional<TokenSet>& prior_text_tokens, const TokenSet& queried_content);

// Chronological snapshot history for one URL. Appends enforce that the URL
// matches and that captured_at strictly increases.
class EvolutionTrack {
public:
    EvolutionTrack() = default;
    explicit EvolutionTrack(std::string url) : url_(std::move(url)) {}

    const std::string& url() const { return url_; }
    const std::vector<PageSnapshot>& snapshots() const { return snapshots_; }
    bool empty() const { return snapshots_.empty(); }

    void append(PageSnapshot snap);

    const PageSnapshot* latest() const;
    // Most recent snapshot with captured_at <= at, if any.
    const PageSnapshot* at_or_before(std::int64_t at) const;

    // Most recent prior version of `seg` strictly before `before`:
    // fingerprint match anywhere in history wins; otherwise the most recent
    // segment at the same dom_path.
    std::optional<MatchedPrior> match_prior(const Segment& seg, std::int64_t before) const;

    // Every prior version (fingerprint or dom_path match), newest first.
    std::vector<MatchedPrior> match_all_priors(const Segment& seg, std::int64_t before) const;

private:
    std::string url_;
    std::vector<PageSnapshot> snapshots_;
};

nlohmann::ordered_json track_index_json(const EvolutionTrack& track);

// Directory-per-URL snapshot store. Layout under root():
//   <murmur3(url) hex>/<captured_at>.json   one file per snapshot
//   <murmur3(url) hex>/index.json           derived lookup index (rebuildable)
//   <murmur3(url) hex>/.lock                flock target (exclusive for ingest,
//                                           shared for reads)
// Snapshot files are written to a temp name and renamed into place, so a
// reader never sees a partial file and a crashed ingest leaves the track
// loadable. The index is never trusted over the snapshot files.
class TrackStore {
public:
    explicit TrackStore(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const { return root_; }
    std::string track_dir_name(const std::string& url) const;
    std::filesystem::path track_dir(const std::string& url) const;

    bool has_track(const std::string& url) const;
    EvolutionTrack load(const std::string& url) const;
    EvolutionTrack ingest(const std::string& url, const PageSnapshot& snap);

private:
    std::filesystem::path root_;
};

}  // namespace museum
