#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mbe/generators.hpp"
#include "mbe/network.hpp"

namespace mbe {

struct NetworkMeta {
  std::uint64_t seed = 0;
  NetworkKind kind = NetworkKind::uniform;
  bool operator==(const NetworkMeta&) const = default;
};

/// Contents of a BNET v1 file.
struct NetworkFile {
  BeliefNetwork network;
  Evidence evidence;
  std::optional<NetworkMeta> meta;
};

/// Serialises with 17 significant digits; one factor per variable, in id
/// order. Output is a pure function of the input.
std::string save_network(const NetworkFile& file);
void save_network(const NetworkFile& file, const std::filesystem::path& path);

/// Throws ParseError with a 1-based line and column. Scope, cardinality and
/// normalisation problems name the offending factor index.
NetworkFile load_network(const std::string& text);
NetworkFile load_network_file(const std::filesystem::path& path);

}  // namespace mbe
