#pragma once

#include "museum/segmenter.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace museum {

// Snapshot wire format, schema_version 1. Token sets serialize as sorted
// arrays, segments in document order, fingerprints as 32 hex chars.
inline constexpr int kSnapshotSchemaVersion = 1;

nlohmann::ordered_json snapshot_to_json(const PageSnapshot& snap);
PageSnapshot snapshot_from_json(const nlohmann::json& j);

std::string serialize_snapshot(const PageSnapshot& snap);
PageSnapshot parse_snapshot(std::string_view text);

}  // namespace museum
