#include "museum/evolution.hpp"

#include "museum/errors.hpp"
#include "museum/snapshot_json.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <utility>

namespace museum {

namespace fs = std::filesystem;

bool is_fresh(const std::optional<TokenSet>& prior_text_tokens, const TokenSet& queried_content) {
    if (!prior_text_tokens) return true;
    return !sets_intersect(*prior_text_tokens, queried_content);
}

void EvolutionTrack::append(PageSnapshot snap) {
    if (url_.empty()) {
        url_ = snap.url;
    } else if (snap.url != url_) {
        throw EngineError(ErrorKind::UrlMismatch,
                          "snapshot url '" + snap.url + "' does not match track url '" + url_ + "'");
    }
    if (!snapshots_.empty() && snap.captured_at <= snapshots_.back().captured_at) {
        throw EngineError(ErrorKind::NonMonotonicTimestamp,
                          "captured_at " + std::to_string(snap.captured_at) +
                              " is not after latest snapshot " +
                              std::to_string(snapshots_.back().captured_at));
    }
    snapshots_.push_back(std::move(snap));
}

const PageSnapshot* EvolutionTrack::latest() const {
    return snapshots_.empty() ? nullptr : &snapshots_.back();
}

const PageSnapshot* EvolutionTrack::at_or_before(std::int64_t at) const {
    const PageSnapshot* found = nullptr;
    for (const auto& snap : snapshots_) {
        if (snap.captured_at <= at) found = &snap;
    }
    return found;
}

std::optional<MatchedPrior> EvolutionTrack::match_prior(const Segment& seg,
                                                        std::int64_t before) const {
    for (auto it = snapshots_.rbegin(); it != snapshots_.rend(); ++it) {
        if (it->captured_at >= before) continue;
        for (const auto& cand : it->segments) {
            if (cand.fingerprint == seg.fingerprint)
                return MatchedPrior{cand, it->captured_at, MatchVia::Fingerprint};
        }
    }
    for (auto it = snapshots_.rbegin(); it != snapshots_.rend(); ++it) {
        if (it->captured_at >= before) continue;
        for (const auto& cand : it->segments) {
            if (cand.dom_path == seg.dom_path)
                return MatchedPrior{cand, it->captured_at, MatchVia::DomPath};
        }
    }
    return std::nullopt;
}

std::vector<MatchedPrior> EvolutionTrack::match_all_priors(const Segment& seg,
                                                           std::int64_t before) const {
    std::vector<MatchedPrior> out;
    for (auto it = snapshots_.rbegin(); it != snapshots_.rend(); ++it) {
        if (it->captured_at >= before) continue;
        const Segment* by_fp = nullptr;
        const Segment* by_path = nullptr;
        for (const auto& cand : it->segments) {
            if (cand.fingerprint == seg.fingerprint) by_fp = &cand;
            if (cand.dom_path == seg.dom_path) by_path = &cand;
        }
        if (by_fp)
            out.push_back({*by_fp, it->captured_at, MatchVia::Fingerprint});
        else if (by_path)
            out.push_back({*by_path, it->captured_at, MatchVia::DomPath});
    }
    return out;
}

nlohmann::ordered_json track_index_json(const EvolutionTrack& track) {
    std::map<std::string, std::int64_t> by_fingerprint;
    std::map<std::string, std::int64_t> by_dom_path;
    nlohmann::ordered_json times = nlohmann::ordered_json::array();
    for (const auto& snap : track.snapshots()) {
        times.push_back(snap.captured_at);
        for (const auto& seg : snap.segments) {
            by_fingerprint[seg.fingerprint.to_hex()] = snap.captured_at;
            by_dom_path[seg.dom_path] = snap.captured_at;
        }
    }
    nlohmann::ordered_json j;
    j["schema_version"] = kSnapshotSchemaVersion;
    j["url"] = track.url();
    j["snapshots"] = times;
    nlohmann::ordered_json fp = nlohmann::ordered_json::object();
    for (const auto& [k, v] : by_fingerprint) fp[k] = v;
    j["by_fingerprint"] = fp;
    nlohmann::ordered_json dp = nlohmann::ordered_json::object();
    for (const auto& [k, v] : by_dom_path) dp[k] = v;
    j["by_dom_path"] = dp;
    return j;
}

namespace {

// Fault-injection hook for crash-safety tests: when MUSEUM_TEST_CRASH names
// the current point, die without unwinding, as a real crash would.
void test_crash_point(const char* point) {
    const char* want = std::getenv("MUSEUM_TEST_CRASH");
    if (want && std::strcmp(want, point) == 0) _exit(42);
}

[[noreturn]] void store_fail(const std::string& what, const fs::path& path) {
    throw EngineError(ErrorKind::StoreIo, what + ": " + path.string() + ": " + std::strerror(errno));
}

class FileLock {
public:
    enum class Mode { Shared, Exclusive };

    FileLock(const fs::path& path, Mode mode) {
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0) store_fail("cannot open lock file", path);
        if (::flock(fd_, mode == Mode::Exclusive ? LOCK_EX : LOCK_SH) != 0) {
            ::close(fd_);
            fd_ = -1;
            store_fail("cannot lock", path);
        }
    }
    ~FileLock() {
        if (fd_ >= 0) ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

// Write-to-temp-then-rename so the target path is always absent or complete.
void write_file_atomic(const fs::path& path, const std::string& content,
                       const char* crash_point) {
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) store_fail("cannot create", tmp);
    std::size_t off = 0;
    while (off < content.size()) {
        ssize_t n = ::write(fd, content.data() + off, content.size() - off);
        if (n < 0) {
            ::close(fd);
            store_fail("write failed", tmp);
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        store_fail("fsync failed", tmp);
    }
    ::close(fd);
    if (crash_point) test_crash_point(crash_point);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw EngineError(ErrorKind::StoreIo,
                          "rename failed: " + tmp.string() + " -> " + path.string() + ": " +
                              ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) store_fail("cannot open", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) store_fail("read failed", path);
    return buf.str();
}

// Snapshot files are exactly "<captured_at>.json"; everything else in the
// track directory (index, lock, leftover temp files) is ignored.
std::optional<std::int64_t> snapshot_timestamp(const std::string& name) {
    static const std::string suffix = ".json";
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) return std::nullopt;
    std::string_view stem(name.data(), name.size() - suffix.size());
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), value);
    if (ec != std::errc() || ptr != stem.data() + stem.size()) return std::nullopt;
    return value;
}

EvolutionTrack load_locked(const fs::path& dir, const std::string& url) {
    std::vector<std::pair<std::int64_t, fs::path>> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        if (auto ts = snapshot_timestamp(entry.path().filename().string()))
            files.emplace_back(*ts, entry.path());
    }
    if (ec)
        throw EngineError(ErrorKind::StoreIo, "cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    EvolutionTrack track(url);
    for (const auto& [ts, path] : files) {
        PageSnapshot snap;
        try {
            snap = parse_snapshot(read_file(path));
        } catch (const EngineError& e) {
            if (e.is_store_io()) throw;
            throw EngineError(ErrorKind::StoreIo, path.string() + ": " + e.what());
        }
        if (snap.url != url)
            throw EngineError(ErrorKind::StoreIo,
                              path.string() + ": snapshot url '" + snap.url +
                                  "' does not belong to this track");
        if (snap.captured_at != ts)
            throw EngineError(ErrorKind::StoreIo,
                              path.string() + ": captured_at " +
                                  std::to_string(snap.captured_at) +
                                  " disagrees with file name");
        track.append(std::move(snap));
    }
    return track;
}

void write_index(const fs::path& dir, const EvolutionTrack& track) {
    write_file_atomic(dir / "index.json", track_index_json(track).dump(2) + "\n", nullptr);
}

}  // namespace

std::string TrackStore::track_dir_name(const std::string& url) const {
    return murmur3_x64_128(url).to_hex();
}

fs::path TrackStore::track_dir(const std::string& url) const {
    return root_ / track_dir_name(url);
}

bool TrackStore::has_track(const std::string& url) const {
    std::error_code ec;
    return fs::is_directory(track_dir(url), ec);
}

EvolutionTrack TrackStore::load(const std::string& url) const {
    fs::path dir = track_dir(url);
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return EvolutionTrack(url);
    FileLock lock(dir / ".lock", FileLock::Mode::Shared);
    EvolutionTrack track = load_locked(dir, url);
    if (!track.empty() && !fs::exists(dir / "index.json", ec)) {
        try {
            write_index(dir, track);
        } catch (const EngineError&) {
            // The index is advisory; a read must not fail because it could
            // not be rebuilt (e.g. read-only store).
        }
    }
    return track;
}

EvolutionTrack TrackStore::ingest(const std::string& url, const PageSnapshot& snap) {
    if (snap.url != url)
        throw EngineError(ErrorKind::UrlMismatch,
                          "snapshot url '" + snap.url + "' does not match track url '" + url + "'");
    fs::path dir = track_dir(url);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw EngineError(ErrorKind::StoreIo, "cannot create " + dir.string() + ": " + ec.message());

    FileLock lock(dir / ".lock", FileLock::Mode::Exclusive);
    EvolutionTrack track = load_locked(dir, url);
    track.append(snap);  // validates monotonic captured_at against disk state

    fs::path file = dir / (std::to_string(snap.captured_at) + ".json");
    write_file_atomic(file, serialize_snapshot(snap), "snapshot-temp-written");
    test_crash_point("snapshot-renamed");
    write_index(dir, track);
    return track;
}

}  // namespace museum
