#include "museum/snapshot_json.hpp"

#include "museum/errors.hpp"

#include <utility>

namespace museum {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json tokens_to_json(const TokenSet& tokens) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tokens) arr.push_back(t);
    return arr;
}

TokenSet tokens_from_json(const json& j, const char* field) {
    if (!j.is_array())
        throw EngineError(ErrorKind::ParseError,
                          std::string("snapshot: ") + field + " must be an array");
    TokenSet out;
    for (const auto& item : j) {
        if (!item.is_string())
            throw EngineError(ErrorKind::ParseError,
                              std::string("snapshot: ") + field + " entries must be strings");
        out.insert(item.get<std::string>());
    }
    return out;
}

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw EngineError(ErrorKind::ParseError,
                          std::string("snapshot: missing field '") + field + "'");
    return *it;
}

}  // namespace

nlohmann::ordered_json snapshot_to_json(const PageSnapshot& snap) {
    ordered_json j;
    j["schema_version"] = kSnapshotSchemaVersion;
    j["url"] = snap.url;
    j["captured_at"] = snap.captured_at;
    j["title_tokens"] = tokens_to_json(snap.title_tokens);
    ordered_json segs = ordered_json::array();
    for (const auto& seg : snap.segments) {
        ordered_json s;
        s["fingerprint"] = seg.fingerprint.to_hex();
        s["dom_path"] = seg.dom_path;
        s["text_tokens"] = tokens_to_json(seg.text_tokens);
        s["link_tokens"] = tokens_to_json(seg.link_tokens);
        s["image_alt_tokens"] = tokens_to_json(seg.image_alt_tokens);
        ordered_json spans = ordered_json::object();
        for (const auto& [cls, tokens] : seg.visual_spans) spans[cls] = tokens_to_json(tokens);
        s["visual_spans"] = spans;
        segs.push_back(std::move(s));
    }
    j["segments"] = segs;
    return j;
}

PageSnapshot snapshot_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw EngineError(ErrorKind::ParseError, "snapshot: not a JSON object");
    const auto& ver = require(j, "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != kSnapshotSchemaVersion)
        throw EngineError(ErrorKind::ParseError, "snapshot: unsupported schema_version");

    PageSnapshot snap;
    const auto& url = require(j, "url");
    if (!url.is_string()) throw EngineError(ErrorKind::ParseError, "snapshot: url must be a string");
    snap.url = url.get<std::string>();

    const auto& at = require(j, "captured_at");
    if (!at.is_number_integer())
        throw EngineError(ErrorKind::ParseError, "snapshot: captured_at must be an integer");
    snap.captured_at = at.get<std::int64_t>();

    snap.title_tokens = tokens_from_json(require(j, "title_tokens"), "title_tokens");

    const auto& segs = require(j, "segments");
    if (!segs.is_array())
        throw EngineError(ErrorKind::ParseError, "snapshot: segments must be an array");
    for (const auto& s : segs) {
        if (!s.is_object())
            throw EngineError(ErrorKind::ParseError, "snapshot: segment must be an object");
        Segment seg;
        const auto& fp = require(s, "fingerprint");
        if (!fp.is_string())
            throw EngineError(ErrorKind::ParseError, "snapshot: fingerprint must be a string");
        try {
            seg.fingerprint = Digest128::from_hex(fp.get<std::string>());
        } catch (const std::exception&) {
            throw EngineError(ErrorKind::ParseError, "snapshot: malformed fingerprint");
        }
        const auto& path = require(s, "dom_path");
        if (!path.is_string())
            throw EngineError(ErrorKind::ParseError, "snapshot: dom_path must be a string");
        seg.dom_path = path.get<std::string>();
        seg.text_tokens = tokens_from_json(require(s, "text_tokens"), "text_tokens");
        seg.link_tokens = tokens_from_json(require(s, "link_tokens"), "link_tokens");
        seg.image_alt_tokens = tokens_from_json(require(s, "image_alt_tokens"), "image_alt_tokens");
        const auto& spans = require(s, "visual_spans");
        if (!spans.is_object())
            throw EngineError(ErrorKind::ParseError, "snapshot: visual_spans must be an object");
        for (auto it = spans.begin(); it != spans.end(); ++it)
            seg.visual_spans[it.key()] = tokens_from_json(it.value(), "visual_spans");
        snap.segments.push_back(std::move(seg));
    }
    return snap;
}

std::string serialize_snapshot(const PageSnapshot& snap) {
    return snapshot_to_json(snap).dump(2) + "\n";
}

PageSnapshot parse_snapshot(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw EngineError(ErrorKind::ParseError, "snapshot: invalid JSON");
    return snapshot_from_json(j);
}

}  // namespace museum
