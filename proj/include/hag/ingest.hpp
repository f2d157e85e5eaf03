// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Graph I/O: SNAP-style edge lists, seeded random graphs, HAG
// serialization and DOT export.

#ifndef HAG_INGEST_HPP_
#define HAG_INGEST_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hag/graph.hpp"

namespace hag {

enum class Directedness { kDirected, kUndirected };

struct EdgeListFormat {
  Directedness directedness = Directedness::kDirected;
};

struct ParsedGraph {
  DirectedGraph graph;
  // original_ids[v] is the id that dense node v had in the file.
  std::vector<std::int64_t> original_ids;
};

// Lines starting with '#' are comments, except a "# nodes: N" line, which
// declares ids already dense in [0, N) (isolated nodes included) and turns
// remapping off. Otherwise ids are renumbered by first appearance.
// Throws ParseError with the line number on a malformed line.
ParsedGraph parse_snap_edge_list(std::string_view text,
                                 const EdgeListFormat& fmt = {});

// Reads a file; throws Error if it cannot be opened.
ParsedGraph read_snap_edge_list(const std::string& path,
                                const EdgeListFormat& fmt = {});

// "# nodes: N" followed by one "u v" line per edge; parses back to g.
std::string write_edge_list(const DirectedGraph& g);

struct ErConfig {
  NodeId n = 0;
  double p = 0;
  std::uint64_t seed = 0;
  // Draw once per unordered pair and add both directions.
  bool undirected = false;
};

// Each ordered pair (u, v), u != v, is kept with probability p. Throws Error
// unless 0 <= p <= 1 and n >= 0.
DirectedGraph gen_erdos_renyi(const ErConfig& cfg);

// JSON with keys format, version, node_count, d, layer_mode,
// nodes{L, M[{id, in, cover}], R} and edges{L_M, M_M, M_R, L_R}.
std::string serialize_hag(const HagGraph& hag);

// Throws ParseError on schema violations; a cover that does not match the
// in-sets names the offending node.
HagGraph deserialize_hag(std::string_view text);

// Graphviz text with L, M and R ranks; intermediates are labeled by their
// covers joined with "⊕". Vertices are lettered A, B, ... when there are at
// most 26 of them.
std::string export_dot(const HagGraph& hag);

}  // namespace hag

#endif  // HAG_INGEST_HPP_
