#include "auxenc/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace auxenc {

void InteractionGraph::add_edge(uint32_t u, uint32_t v) {
  if (u == v) throw std::runtime_error("graph: self loop at " + std::to_string(u));
  if (u < 1 || v < 1 || u > n_vertices || v > n_vertices) {
    throw std::runtime_error("graph: edge (" + std::to_string(u) + "," +
                             std::to_string(v) + ") out of range");
  }
  edges.emplace_back(std::min(u, v), std::max(u, v));
}

void InteractionGraph::normalize() {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (u == v) throw std::runtime_error("graph: self loop at " + std::to_string(u));
    if (u < 1 || v > n_vertices) {
      throw std::runtime_error("graph: edge (" + std::to_string(u) + "," +
                               std::to_string(v) + ") out of range");
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

uint32_t InteractionGraph::degree(uint32_t v) const {
  uint32_t d = 0;
  for (const auto& [a, b] : edges) d += (a == v || b == v) ? 1 : 0;
  return d;
}

uint32_t InteractionGraph::max_degree() const {
  std::vector<uint32_t> deg(n_vertices + 1, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

int InteractionGraph::edge_index(uint32_t u, uint32_t v) const {
  const auto key = std::make_pair(std::min(u, v), std::max(u, v));
  const auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return -1;
  return static_cast<int>(it - edges.begin());
}

namespace {

// Working state for the coloring routines. used[v][c] holds edge index
// plus one, or zero when color c is unused at v.
struct ColorState {
  const InteractionGraph& g;
  uint32_t palette;
  std::vector<uint32_t> color;
  std::vector<std::vector<uint32_t>> used;

  explicit ColorState(const InteractionGraph& graph)
      : g(graph),
        palette(graph.max_degree() + 1),
        color(graph.edges.size(), 0),
        used(graph.n_vertices + 1, std::vector<uint32_t>(palette + 1, 0)) {}

  bool is_free(uint32_t v, uint32_t c) const { return used[v][c] == 0; }

  uint32_t free_color(uint32_t v) const {
    for (uint32_t c = 1; c <= palette; ++c) {
      if (used[v][c] == 0) return c;
    }
    throw std::runtime_error("edge_color: no free color at vertex " +
                             std::to_string(v));
  }

  void set_color(size_t e, uint32_t c) {
    const auto [u, v] = g.edges[e];
    const uint32_t old = color[e];
    if (old != 0) {
      used[u][old] = 0;
      used[v][old] = 0;
    }
    color[e] = c;
    if (c != 0) {
      if (used[u][c] != 0 || used[v][c] != 0) {
        throw std::runtime_error("edge_color: internal color conflict");
      }
      used[u][c] = static_cast<uint32_t>(e) + 1;
      used[v][c] = static_cast<uint32_t>(e) + 1;
    }
  }

  uint32_t other_end(size_t e, uint32_t x) const {
    const auto [u, v] = g.edges[e];
    return x == u ? v : u;
  }
};

// Swap colors c and d along the maximal alternating path starting at u.
void invert_path(ColorState& st, uint32_t u, uint32_t c, uint32_t d) {
  std::vector<size_t> path;
  std::vector<uint32_t> old_color;
  uint32_t x = u;
  uint32_t want = d;
  while (st.used[x][want] != 0) {
    const size_t e = st.used[x][want] - 1;
    path.push_back(e);
    old_color.push_back(want);
    x = st.other_end(e, x);
    want = (want == d) ? c : d;
  }
  for (const size_t e : path) st.set_color(e, 0);
  for (size_t k = 0; k < path.size(); ++k) {
    st.set_color(path[k], old_color[k] == d ? c : d);
  }
}

// Fan-based recoloring when no color is free at both ends of edge e.
void misra_gries_color(ColorState& st, size_t e) {
  const auto [u, v] = st.g.edges[e];

  std::vector<uint32_t> fan{v};
  std::vector<size_t> fan_edge{e};
  std::vector<bool> in_fan(st.g.n_vertices + 1, false);
  in_fan[v] = true;
  for (;;) {
    const uint32_t last = fan.back();
    uint32_t next = 0;
    size_t next_edge = 0;
    for (uint32_t c = 1; c <= st.palette; ++c) {
      if (!st.is_free(last, c)) continue;
      const uint32_t eu = st.used[u][c];
      if (eu == 0) continue;
      const uint32_t w = st.other_end(eu - 1, u);
      if (in_fan[w]) continue;
      if (next == 0 || w < next) {
        next = w;
        next_edge = eu - 1;
      }
    }
    if (next == 0) break;
    fan.push_back(next);
    fan_edge.push_back(next_edge);
    in_fan[next] = true;
  }

  const uint32_t c = st.free_color(u);
  const uint32_t d = st.free_color(fan.back());

  if (!st.is_free(u, d)) invert_path(st, u, c, d);

  // Find the shortest fan prefix that is still a fan under the current
  // colors and whose end vertex has d free.
  size_t j = fan.size();
  for (size_t k = 0; k < fan.size(); ++k) {
    if (!st.is_free(fan[k], d)) continue;
    bool valid = true;
    for (size_t i = 1; i <= k; ++i) {
      const uint32_t ci = st.color[fan_edge[i]];
      if (ci == 0 || !st.is_free(fan[i - 1], ci)) {
        valid = false;
        break;
      }
    }
    if (valid) {
      j = k;
      break;
    }
  }
  if (j == fan.size()) {
    throw std::runtime_error("edge_color: fan recoloring failed");
  }

  // Rotate: shift each fan edge's color one step toward the new edge,
  // then give the prefix end the color d.
  for (size_t i = 0; i < j; ++i) {
    const uint32_t ci = st.color[fan_edge[i + 1]];
    st.set_color(fan_edge[i + 1], 0);
    st.set_color(fan_edge[i], ci);
  }
  st.set_color(fan_edge[j], d);
}

}  // namespace

EdgeColoring edge_color(const InteractionGraph& g) {
  InteractionGraph copy = g;
  copy.normalize();
  if (copy.edges != g.edges) {
    throw std::runtime_error("edge_color: graph is not normalized");
  }
  ColorState st(g);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    uint32_t pick = 0;
    for (uint32_t c = 1; c <= st.palette; ++c) {
      if (st.is_free(u, c) && st.is_free(v, c)) {
        pick = c;
        break;
      }
    }
    if (pick != 0) {
      st.set_color(e, pick);
    } else {
      misra_gries_color(st, e);
    }
  }

  // Compact the palette in order of first use.
  std::vector<uint32_t> remap(st.palette + 1, 0);
  uint32_t next = 0;
  EdgeColoring out;
  out.color.resize(g.edges.size(), 0);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const uint32_t c = st.color[e];
    if (c == 0) throw std::runtime_error("edge_color: edge left uncolored");
    if (remap[c] == 0) remap[c] = ++next;
    out.color[e] = remap[c];
  }
  out.n_colors = next;
  return out;
}

bool coloring_is_proper(const InteractionGraph& g, const EdgeColoring& c) {
  if (c.color.size() != g.edges.size()) return false;
  std::vector<std::vector<bool>> used(g.n_vertices + 1,
                                      std::vector<bool>(c.n_colors + 1, false));
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const uint32_t col = c.color[e];
    if (col < 1 || col > c.n_colors) return false;
    const auto [u, v] = g.edges[e];
    if (used[u][col] || used[v][col]) return false;
    used[u][col] = used[v][col] = true;
  }
  return true;
}

StabilizerPlan plan_stabilizers(const InteractionGraph& g) {
  StabilizerPlan plan;
  plan.graph = g;
  plan.graph.normalize();
  plan.coloring = edge_color(plan.graph);
  plan.n_registers = (plan.coloring.n_colors + 1) / 2;
  plan.edges.resize(plan.graph.edges.size());

  for (size_t e = 0; e < plan.graph.edges.size(); ++e) {
    plan.edges[e].color = plan.coloring.color[e];
    plan.edges[e].reg = (plan.coloring.color[e] + 1) / 2;
  }

  for (uint32_t reg = 1; reg <= plan.n_registers; ++reg) {
    // Incident register edges per vertex; at most one per color.
    std::vector<std::array<int, 2>> inc(plan.graph.n_vertices + 1, {-1, -1});
    std::vector<uint32_t> count(plan.graph.n_vertices + 1, 0);
    for (size_t e = 0; e < plan.graph.edges.size(); ++e) {
      if (plan.edges[e].reg != reg) continue;
      const auto [u, v] = plan.graph.edges[e];
      for (const uint32_t x : {u, v}) {
        if (count[x] >= 2) {
          throw std::runtime_error("plan_stabilizers: vertex degree > 2 in register");
        }
        inc[x][count[x]++] = static_cast<int>(e);
      }
    }

    std::vector<bool> visited(plan.graph.edges.size(), false);
    auto walk = [&](uint32_t start, bool cycle) {
      RegisterComponent comp;
      comp.reg = reg;
      comp.is_cycle = cycle;
      uint32_t x = start;
      int arrived = -1;
      for (;;) {
        int next = -1;
        uint32_t best_other = 0;
        for (const int e : inc[x]) {
          if (e < 0 || visited[e] || e == arrived) continue;
          const auto [a, b] = plan.graph.edges[e];
          const uint32_t other = (a == x) ? b : a;
          if (next == -1 || other < best_other) {
            next = e;
            best_other = other;
          }
        }
        if (next == -1) break;
        visited[next] = true;
        plan.edges[next].tail = x;
        plan.edges[next].head = best_other;
        comp.edge_order.push_back(static_cast<uint32_t>(next));
        arrived = next;
        x = best_other;
        if (cycle && x == start) break;
      }
      plan.components.push_back(std::move(comp));
    };

    // Path components first, starting from their smallest endpoint.
    for (uint32_t v = 1; v <= plan.graph.n_vertices; ++v) {
      if (count[v] != 1) continue;
      const int e = inc[v][0];
      if (e >= 0 && !visited[e]) walk(v, false);
    }
    // Remaining register edges sit on cycles.
    for (uint32_t v = 1; v <= plan.graph.n_vertices; ++v) {
      bool has_unvisited = false;
      for (const int e : inc[v]) {
        if (e >= 0 && !visited[e]) has_unvisited = true;
      }
      if (has_unvisited) walk(v, true);
    }
  }

  for (const auto& comp : plan.components) {
    if (comp.is_cycle && comp.edge_order.size() % 2 != 0) {
      throw std::runtime_error("plan_stabilizers: odd cycle in register");
    }
  }
  return plan;
}

namespace {

std::runtime_error parse_error(size_t line, const std::string& what) {
  return std::runtime_error("line " + std::to_string(line) + ": " + what);
}

}  // namespace

InteractionGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  InteractionGraph g;
  bool have_header = false;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "graph") {
      if (have_header) throw parse_error(lineno, "duplicate graph header");
      if (!(ls >> g.n_vertices) || g.n_vertices == 0) {
        throw parse_error(lineno, "expected positive vertex count");
      }
      have_header = true;
    } else if (word == "edge") {
      if (!have_header) throw parse_error(lineno, "edge before graph header");
      uint32_t u = 0, v = 0;
      if (!(ls >> u >> v)) throw parse_error(lineno, "expected: edge <u> <v>");
      try {
        g.add_edge(u, v);
      } catch (const std::exception& ex) {
        throw parse_error(lineno, ex.what());
      }
    } else {
      throw parse_error(lineno, "unknown directive '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) throw parse_error(lineno, "trailing input '" + extra + "'");
  }
  if (!have_header) throw std::runtime_error("graph text has no header");
  g.normalize();
  return g;
}

std::string graph_to_string(const InteractionGraph& g) {
  std::ostringstream out;
  out << "graph " << g.n_vertices << "\n";
  for (const auto& [u, v] : g.edges) out << "edge " << u << " " << v << "\n";
  return out.str();
}

Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Hypergraph h;
  bool have_header = false;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "hypergraph") {
      if (have_header) throw parse_error(lineno, "duplicate hypergraph header");
      if (!(ls >> h.n_vertices) || h.n_vertices == 0) {
        throw parse_error(lineno, "expected positive vertex count");
      }
      have_header = true;
    } else if (word == "hedge") {
      if (!have_header) throw parse_error(lineno, "hedge before hypergraph header");
      std::array<uint32_t, 4> e{};
      if (!(ls >> e[0] >> e[1] >> e[2] >> e[3])) {
        throw parse_error(lineno, "expected: hedge <a> <b> <c> <d>");
      }
      for (const uint32_t x : e) {
        if (x < 1 || x > h.n_vertices) {
          throw parse_error(lineno, "vertex " + std::to_string(x) + " out of range");
        }
      }
      h.edges.push_back(e);
    } else {
      throw parse_error(lineno, "unknown directive '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) throw parse_error(lineno, "trailing input '" + extra + "'");
  }
  if (!have_header) throw std::runtime_error("hypergraph text has no header");
  return h;
}

std::string hypergraph_to_string(const Hypergraph& h) {
  std::ostringstream out;
  out << "hypergraph " << h.n_vertices << "\n";
  for (const auto& e : h.edges) {
    out << "hedge " << e[0] << " " << e[1] << " " << e[2] << " " << e[3] << "\n";
  }
  return out.str();
}

}  // namespace auxenc
