#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace auxenc {

// Undirected simple graph over 1-based vertices (sites).
struct InteractionGraph {
  uint32_t n_vertices = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // u < v, sorted, unique

  void add_edge(uint32_t u, uint32_t v);
  void normalize();  // sort, deduplicate, validate ranges
  uint32_t degree(uint32_t v) const;
  uint32_t max_degree() const;
  // Index into edges for (u, v) in either order, or -1 when absent.
  int edge_index(uint32_t u, uint32_t v) const;
};

// Proper edge coloring with colors 1..n_colors.
struct EdgeColoring {
  uint32_t n_colors = 0;
  std::vector<uint32_t> color;  // parallel to edges
};

// Deterministic greedy pass with Misra-Gries fan recoloring for edges
// the greedy pass cannot place. Never exceeds max_degree + 1 colors.
EdgeColoring edge_color(const InteractionGraph& g);
bool coloring_is_proper(const InteractionGraph& g, const EdgeColoring& c);

// Colors pair into auxiliary registers, reg = ceil(color / 2). Within
// one register every vertex is the tail of at most one edge and the
// head of at most one edge; that keeps the register's stabilizers
// commuting and gives each Majorana at most one use per register.
struct OrientedEdge {
  uint32_t tail = 0;
  uint32_t head = 0;
  uint32_t color = 0;
  uint32_t reg = 0;
};

// A register holds at most two matchings, so its connected pieces are
// simple paths and even cycles, listed in traversal order. For a cycle
// the last edge closes the loop back to the starting vertex.
struct RegisterComponent {
  uint32_t reg = 0;
  bool is_cycle = false;
  std::vector<uint32_t> edge_order;  // indices into edges
};

struct StabilizerPlan {
  InteractionGraph graph;
  EdgeColoring coloring;
  std::vector<OrientedEdge> edges;  // parallel to graph.edges
  uint32_t n_registers = 0;
  std::vector<RegisterComponent> components;
};

StabilizerPlan plan_stabilizers(const InteractionGraph& g);

// 4-uniform hypergraph over 1-based vertices (Majorana indices for the
// quartic models).
struct Hypergraph {
  uint32_t n_vertices = 0;
  std::vector<std::array<uint32_t, 4>> edges;
};

// Text formats:
//   graph <n>        |  hypergraph <n>
//   edge <u> <v>     |  hedge <a> <b> <c> <d>
// Blank lines and lines starting with '#' are ignored.
InteractionGraph parse_graph(const std::string& text);
std::string graph_to_string(const InteractionGraph& g);
Hypergraph parse_hypergraph(const std::string& text);
std::string hypergraph_to_string(const Hypergraph& h);

}  // namespace auxenc
