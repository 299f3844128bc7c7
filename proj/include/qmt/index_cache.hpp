#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qmt/index.hpp"

namespace qmt {

// Persistent form of the fact indices, keyed by a hash of the library they
// were extracted from:
//   {"version": 1, "hash": "<16 hex digits>",
//    "concepts": {NAME: [VALUE...]}, "relations": {NAME: [[VALUE, VALUE]...]}}
// where VALUE uses the value JSON codec. Loading verifies version and hash
// and reports a rebuild-worthy mismatch instead of returning stale facts.
void write_index_cache(const std::string& path, const Index& index, std::uint64_t library_hash);

// Returns the cached index when the file exists, parses, and matches
// expected_hash; otherwise returns nullopt and, if warning is non-null,
// stores a one-line explanation (missing file, version or hash mismatch,
// malformed content).
std::optional<Index> read_index_cache(const std::string& path, std::uint64_t expected_hash,
                                      std::string* warning = nullptr);

}  // namespace qmt
