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

#include "hag/ingest.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace hag {
namespace {

using nlohmann::json;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "# nodes: N" -> N.
std::optional<std::int64_t> node_directive(std::string_view line) {
  auto fields = split_fields(line.substr(1));
  if (fields.size() != 2 || fields[0] != "nodes:") return std::nullopt;
  return parse_int(fields[1]);
}

}  // namespace

ParsedGraph parse_snap_edge_list(std::string_view text,
                                 const EdgeListFormat& fmt) {
  std::optional<std::int64_t> declared;
  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::int64_t> original;
  std::vector<Edge> edges;
  auto id_of = [&](std::int64_t raw, std::size_t line_no) -> NodeId {
    if (declared) {
      if (raw < 0 || raw >= *declared) {
        throw ParseError("line " + std::to_string(line_no) + ": id " +
                             std::to_string(raw) + " outside declared range",
                         line_no);
      }
      return static_cast<NodeId>(raw);
    }
    auto [it, inserted] = dense.try_emplace(raw, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(raw);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    line = line.substr(first);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto n = node_directive(line)) {
        if (!edges.empty() || declared || *n < 0) {
          throw ParseError("line " + std::to_string(line_no) +
                               ": misplaced node-count directive",
                           line_no);
        }
        declared = n;
      }
      continue;
    }
    auto fields = split_fields(line);
    std::optional<std::int64_t> u, v;
    if (fields.size() == 2) {
      u = parse_int(fields[0]);
      v = parse_int(fields[1]);
    }
    if (!u || !v) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected two integer ids",
                       line_no);
    }
    const NodeId a = id_of(*u, line_no);
    const NodeId b = id_of(*v, line_no);
    edges.push_back({a, b});
    if (fmt.directedness == Directedness::kUndirected && a != b) {
      edges.push_back({b, a});
    }
  }
  ParsedGraph out;
  if (declared) {
    original.resize(*declared);
    for (std::int64_t i = 0; i < *declared; ++i) original[i] = i;
  }
  out.graph = DirectedGraph(static_cast<NodeId>(original.size()), std::move(edges));
  out.original_ids = std::move(original);
  return out;
}

ParsedGraph read_snap_edge_list(const std::string& path,
                                const EdgeListFormat& fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snap_edge_list(buf.str(), fmt);
}

std::string write_edge_list(const DirectedGraph& g) {
  std::string out = "# nodes: " + std::to_string(g.node_count()) + "\n";
  for (Edge e : g.edges()) {
    out += std::to_string(e.source) + " " + std::to_string(e.target) + "\n";
  }
  return out;
}

DirectedGraph gen_erdos_renyi(const ErConfig& cfg) {
  if (cfg.n < 0) throw Error("node count must be non-negative");
  if (!(cfg.p >= 0 && cfg.p <= 1)) throw Error("p must lie in [0, 1]");
  std::mt19937_64 rng(cfg.seed);
  // 53-bit uniform in [0, 1), identical on every platform.
  auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Edge> edges;
  for (NodeId u = 0; u < cfg.n; ++u) {
    for (NodeId v = cfg.undirected ? u + 1 : 0; v < cfg.n; ++v) {
      if (u == v) continue;
      if (draw() < cfg.p) {
        edges.push_back({u, v});
        if (cfg.undirected) edges.push_back({v, u});
      }
    }
  }
  return DirectedGraph(cfg.n, std::move(edges));
}

namespace {

json edge_array(const std::vector<Edge>& edges) {
  json out = json::array();
  for (Edge e : edges) out.push_back({e.source, e.target});
  return out;
}

[[noreturn]] void schema_error(const std::string& what) {
  throw ParseError("HAG document: " + what);
}

std::vector<NodeId> id_list(const json& j, const std::string& what) {
  if (!j.is_array()) schema_error(what + " must be an array");
  std::vector<NodeId> out;
  for (const json& x : j) {
    if (!x.is_number_integer()) schema_error(what + " must hold integers");
    out.push_back(x.get<NodeId>());
  }
  return out;
}

std::vector<Edge> edge_list(const json& edges, const char* key) {
  if (!edges.contains(key)) schema_error(std::string("missing edges.") + key);
  std::vector<Edge> out;
  for (const json& e : edges.at(key)) {
    auto pair = id_list(e, std::string("edges.") + key);
    if (pair.size() != 2) schema_error(std::string("edges.") + key + " entries are pairs");
    out.push_back({pair[0], pair[1]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string serialize_hag(const HagGraph& hag) {
  const NodeId n = hag.node_count();
  json doc;
  doc["format"] = "hag";
  doc["version"] = 1;
  doc["node_count"] = n;
  doc["d"] = hag.d() ? json(*hag.d()) : json(nullptr);
  doc["layer_mode"] = to_string(hag.layer_mode());
  json left = json::array();
  for (NodeId v = 0; v < n; ++v) left.push_back(v);
  json mid = json::array();
  for (const IntermediateNode& m : hag.intermediates()) {
    mid.push_back({{"id", m.id}, {"in", m.in_set}, {"cover", m.cover}});
  }
  doc["nodes"] = {{"L", left}, {"M", mid}, {"R", left}};
  doc["edges"] = {{"L_M", edge_array(hag.edges_left_to_intermediate())},
                  {"M_M", edge_array(hag.edges_intermediate_to_intermediate())},
                  {"M_R", edge_array(hag.edges_intermediate_to_receiver())},
                  {"L_R", edge_array(hag.edges_left_to_receiver())}};
  return doc.dump(1) + "\n";
}

HagGraph deserialize_hag(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("HAG document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "hag") schema_error("format must be \"hag\"");
    if (doc.value("version", 0) != 1) schema_error("unsupported version");
    const NodeId n = doc.at("node_count").get<NodeId>();
    if (n < 0) schema_error("negative node_count");
    std::optional<int> d;
    if (!doc.at("d").is_null()) d = doc.at("d").get<int>();
    const LayerMode mode = parse_layer_mode(doc.at("layer_mode").get<std::string>());
    const json& nodes = doc.at("nodes");
    const json& edges = doc.at("edges");
    if (id_list(nodes.at("L"), "nodes.L").size() != static_cast<std::size_t>(n) ||
        id_list(nodes.at("R"), "nodes.R").size() != static_cast<std::size_t>(n)) {
      schema_error("nodes.L and nodes.R must list node_count ids");
    }

    PartialHag partial(n, mode, d);
    std::vector<Edge> expected_into_m;
    for (const json& m : nodes.at("M")) {
      const NodeId id = m.at("id").get<NodeId>();
      if (id != partial.next_id()) {
        schema_error("intermediate " + std::to_string(id) +
                     " out of order (expected " +
                     std::to_string(partial.next_id()) + ")");
      }
      auto in = id_list(m.at("in"), "in-set of node " + std::to_string(id));
      auto cover = id_list(m.at("cover"), "cover of node " + std::to_string(id));
      try {
        partial.add(in);
      } catch (const GraphError& e) {
        schema_error("node " + std::to_string(id) + ": " + e.what());
      }
      auto actual = partial.cover(id);
      if (!std::equal(actual.begin(), actual.end(), cover.begin(), cover.end())) {
        throw ParseError("HAG document: node " + std::to_string(id) +
                         ": cover field does not match its in-set");
      }
      for (NodeId u : partial.intermediate(id).in_set) expected_into_m.push_back({u, id});
    }
    std::vector<Edge> into_m = edge_list(edges, "L_M");
    auto mm = edge_list(edges, "M_M");
    into_m.insert(into_m.end(), mm.begin(), mm.end());
    std::sort(into_m.begin(), into_m.end());
    std::sort(expected_into_m.begin(), expected_into_m.end());
    if (into_m != expected_into_m) {
      schema_error("edges into intermediates disagree with their in-sets");
    }

    std::vector<std::vector<NodeId>> receiver_in(n);
    for (const char* key : {"M_R", "L_R"}) {
      for (Edge e : edge_list(edges, key)) {
        if (e.target < 0 || e.target >= n) {
          schema_error(std::string("edges.") + key + " has a bad receiver");
        }
        receiver_in[e.target].push_back(e.source);
      }
    }
    for (auto& in : receiver_in) std::sort(in.begin(), in.end());
    try {
      return HagGraph(std::move(partial), std::move(receiver_in));
    } catch (const GraphError& e) {
      schema_error(e.what());
    }
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

namespace {

std::string vertex_label(NodeId v, NodeId n) {
  if (n <= 26) return std::string(1, static_cast<char>('A' + v));
  return std::to_string(v);
}

std::string node_name(NodeId v, NodeId n, bool receiver) {
  if (v >= n) return "m" + std::to_string(v);
  return (receiver ? "r" : "l") + std::to_string(v);
}

}  // namespace

std::string export_dot(const HagGraph& hag) {
  const NodeId n = hag.node_count();
  std::string out = "digraph hag {\n  rankdir=LR;\n";
  if (n > 0) {
    out += "  { rank=same;";
    for (NodeId v = 0; v < n; ++v) {
      out += " " + node_name(v, n, false) + " [label=\"" + vertex_label(v, n) + "\"];";
    }
    out += " }\n";
  }
  if (!hag.intermediates().empty()) {
    out += "  { rank=same;";
    for (const IntermediateNode& m : hag.intermediates()) {
      std::string label;
      for (NodeId x : m.cover) {
        if (!label.empty()) label += "⊕";
        label += vertex_label(x, n);
      }
      out += " " + node_name(m.id, n, false) + " [label=\"" + label + "\"];";
    }
    out += " }\n";
  }
  if (n > 0) {
    out += "  { rank=same;";
    for (NodeId v = 0; v < n; ++v) {
      out += " " + node_name(v, n, true) + " [label=\"" + vertex_label(v, n) + "\"];";
    }
    out += " }\n";
  }
  auto emit = [&](const std::vector<Edge>& edges) {
    for (Edge e : edges) {
      out += "  " + node_name(e.source, n, false) + " -> " +
             node_name(e.target, n, true) + ";\n";
    }
  };
  emit(hag.edges_left_to_intermediate());
  emit(hag.edges_intermediate_to_intermediate());
  emit(hag.edges_intermediate_to_receiver());
  emit(hag.edges_left_to_receiver());
  out += "}\n";
  return out;
}

}  // namespace hag
