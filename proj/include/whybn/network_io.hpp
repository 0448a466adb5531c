#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "whybn/network.hpp"

namespace whybn {

/// Reads the JSON network format:
///
///   { "name": "...",
///     "variables": [ {"name": "A", "states": ["a0", "a1"]}, ... ],
///     "cpts": { "A": {"parents": [...], "table": [[...], ...]}, ... } }
///
/// Edges are implied by parent lists. Table rows run over parent
/// configurations with the last parent varying fastest. An optional
/// top-level "description" string is accepted and ignored.
///
/// Throws ParseError for malformed text (with byte offset) and
/// ValidationError for structurally invalid networks.
Network parse_network(std::string_view text);

Network load_network(const std::filesystem::path& path);

/// Emits the same format; parse_network(serialize_network(n)) reproduces n exactly.
std::string serialize_network(const Network& net);

}  // namespace whybn
