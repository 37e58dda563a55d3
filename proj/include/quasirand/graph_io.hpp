#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "quasirand/graph.hpp"

namespace quasirand {

enum class GraphFormat { kGraph6, kLoopGraph };

// graph6 (McKay). Loopless graphs only.
std::string to_graph6(const Graph& g);
Graph from_graph6(std::string_view text);

// Text format for graphs with loops:
//   LG <n>
//   <i> <j>      one line per edge, 0-based, i <= j; i == j is a loop
// Reading always yields a loop-enabled graph.
std::string to_loopgraph(const Graph& g);
Graph from_loopgraph(std::string_view text);

// Picks the format from the content ("LG" header means loopgraph).
Graph parse_graph(std::string_view text);

void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format);
Graph read_graph(const std::filesystem::path& path,
                 std::optional<GraphFormat> format = std::nullopt);

// ".lg" selects loopgraph, anything else graph6.
GraphFormat format_for_path(const std::filesystem::path& path);

}  // namespace quasirand
