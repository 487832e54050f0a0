#include "auxenc/models.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "auxenc/rng.hpp"

namespace auxenc {

namespace {

constexpr int kSampleAttempts = 2000;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<uint32_t> stub_list(uint32_t n, uint32_t d) {
  std::vector<uint32_t> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (uint32_t v = 1; v <= n; ++v) {
    for (uint32_t k = 0; k < d; ++k) stubs.push_back(v);
  }
  return stubs;
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Hopping: return "hopping";
    case ModelKind::FermiHubbard: return "fermi_hubbard";
    case ModelKind::SparseSyk: return "sparse_syk";
  }
  fail("unknown model kind");
}

InteractionGraph random_regular_graph(uint32_t n, uint32_t d, uint64_t seed) {
  if (d >= n) fail("regular graph needs d < n");
  if ((static_cast<uint64_t>(n) * d) % 2 != 0) {
    fail("regular graph infeasible: n*d is odd");
  }
  InteractionGraph g;
  g.n_vertices = n;
  if (d == 0) return g;

  for (int attempt = 0; attempt < kSampleAttempts; ++attempt) {
    Rng rng(Rng::mix(seed, static_cast<uint64_t>(attempt)));
    std::vector<uint32_t> stubs = stub_list(n, d);
    rng.shuffle(stubs);

    std::set<std::pair<uint32_t, uint32_t>> edges;
    bool simple = true;
    for (size_t k = 0; k + 1 < stubs.size(); k += 2) {
      uint32_t u = stubs[k], v = stubs[k + 1];
      if (u == v) { simple = false; break; }
      if (u > v) std::swap(u, v);
      if (!edges.insert({u, v}).second) { simple = false; break; }
    }
    if (!simple) continue;

    for (const auto& [u, v] : edges) g.add_edge(u, v);
    g.normalize();
    return g;
  }
  fail("regular graph sampling exceeded the rejection budget");
}

FermionModel hopping_model(const InteractionGraph& g, double t) {
  FermionModel m;
  m.kind = ModelKind::Hopping;
  m.n_sites = g.n_vertices;
  for (const auto& [u, v] : g.edges) {
    m.terms.push_back({TermKind::Hopping, {u, v}, t});
  }
  return m;
}

FermionModel fermi_hubbard_model(const InteractionGraph& g, double t, double v) {
  FermionModel m;
  m.kind = ModelKind::FermiHubbard;
  m.n_sites = g.n_vertices;
  if (t != 0.0) {
    for (const auto& [a, b] : g.edges) {
      m.terms.push_back({TermKind::Hopping, {a, b}, t});
    }
  }
  if (v != 0.0) {
    for (const auto& [a, b] : g.edges) {
      m.terms.push_back({TermKind::DensityDensity, {a, b}, v});
    }
  }
  return m;
}

FermionModel sparse_syk_model(uint32_t n_majorana, uint32_t d, uint64_t seed,
                              double coupling_scale) {
  if (n_majorana % 2 != 0) fail("sparse SYK needs an even Majorana count");
  if ((static_cast<uint64_t>(n_majorana) * d) % 4 != 0) {
    fail("sparse SYK infeasible: n*d not divisible by 4");
  }
  FermionModel m;
  m.kind = ModelKind::SparseSyk;
  m.n_sites = n_majorana / 2;
  if (d == 0) return m;
  if (n_majorana < 4) fail("sparse SYK needs at least 4 Majorana modes");

  for (int attempt = 0; attempt < kSampleAttempts; ++attempt) {
    Rng rng(Rng::mix(seed, static_cast<uint64_t>(attempt)));
    std::vector<uint32_t> stubs = stub_list(n_majorana, d);
    rng.shuffle(stubs);

    std::set<std::array<uint32_t, 4>> hyperedges;
    std::vector<std::array<uint32_t, 4>> order;
    bool simple = true;
    for (size_t k = 0; k + 3 < stubs.size(); k += 4) {
      std::array<uint32_t, 4> h = {stubs[k], stubs[k + 1], stubs[k + 2],
                                   stubs[k + 3]};
      std::sort(h.begin(), h.end());
      if (h[0] == h[1] || h[1] == h[2] || h[2] == h[3]) { simple = false; break; }
      if (!hyperedges.insert(h).second) { simple = false; break; }
      order.push_back(h);
    }
    if (!simple) continue;

    for (const auto& h : order) {
      const double u = rng.uniform();
      m.terms.push_back({TermKind::MajoranaQuartic,
                         {h[0], h[1], h[2], h[3]},
                         (2.0 * u - 1.0) * coupling_scale});
    }
    return m;
  }
  fail("sparse SYK sampling exceeded the rejection budget");
}

namespace {

ModelKind kind_from_name(const std::string& name, size_t line_no) {
  if (name == "hopping") return ModelKind::Hopping;
  if (name == "fermi_hubbard") return ModelKind::FermiHubbard;
  if (name == "sparse_syk") return ModelKind::SparseSyk;
  fail("line " + std::to_string(line_no) + ": unknown model kind '" + name + "'");
}

void check_site(uint32_t s, uint32_t n, size_t line_no) {
  if (s < 1 || s > n) {
    fail("line " + std::to_string(line_no) + ": site index out of range");
  }
}

}  // namespace

FermionModel parse_model(const std::string& text) {
  FermionModel m;
  bool have_kind = false, have_modes = false;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;

    auto want_tail_clean = [&]() {
      std::string rest;
      if (ls >> rest) {
        fail("line " + std::to_string(line_no) + ": trailing input '" + rest + "'");
      }
    };
    auto read_u32 = [&](uint32_t& out) {
      int64_t v;
      if (!(ls >> v) || v < 0) {
        fail("line " + std::to_string(line_no) + ": expected a nonnegative integer");
      }
      out = static_cast<uint32_t>(v);
    };
    auto read_coeff = [&](double& out) {
      if (!(ls >> out)) {
        fail("line " + std::to_string(line_no) + ": expected a coupling value");
      }
    };

    if (word == "model") {
      if (have_kind) fail("line " + std::to_string(line_no) + ": duplicate model line");
      std::string name;
      if (!(ls >> name)) fail("line " + std::to_string(line_no) + ": missing model kind");
      m.kind = kind_from_name(name, line_no);
      have_kind = true;
      want_tail_clean();
      continue;
    }
    if (!have_kind) fail("line " + std::to_string(line_no) + ": expected 'model <kind>' first");

    if (word == "modes") {
      if (have_modes) fail("line " + std::to_string(line_no) + ": duplicate modes line");
      read_u32(m.n_sites);
      if (m.n_sites == 0) fail("line " + std::to_string(line_no) + ": modes must be positive");
      have_modes = true;
      want_tail_clean();
      continue;
    }
    if (!have_modes) fail("line " + std::to_string(line_no) + ": expected 'modes <N>' before terms");

    if (word == "hop" || word == "nn") {
      uint32_t i, j;
      double c;
      read_u32(i);
      read_u32(j);
      read_coeff(c);
      want_tail_clean();
      check_site(i, m.n_sites, line_no);
      check_site(j, m.n_sites, line_no);
      if (i == j) fail("line " + std::to_string(line_no) + ": term needs two distinct sites");
      m.terms.push_back({word == "hop" ? TermKind::Hopping : TermKind::DensityDensity,
                         {i, j}, c});
      continue;
    }
    if (word == "syk") {
      std::vector<uint32_t> idx(4);
      double c;
      for (auto& v : idx) read_u32(v);
      read_coeff(c);
      want_tail_clean();
      for (uint32_t v : idx) {
        if (v < 1 || v > 2 * m.n_sites) {
          fail("line " + std::to_string(line_no) + ": Majorana index out of range");
        }
      }
      std::vector<uint32_t> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail("line " + std::to_string(line_no) + ": Majorana indices must be distinct");
      }
      m.terms.push_back({TermKind::MajoranaQuartic, idx, c});
      continue;
    }
    fail("line " + std::to_string(line_no) + ": unknown directive '" + word + "'");
  }
  if (!have_kind) fail("model text is empty");
  if (!have_modes) fail("model text lacks a modes line");
  return m;
}

std::string model_to_string(const FermionModel& model) {
  std::string out = "model ";
  out += model_kind_name(model.kind);
  out += "\nmodes " + std::to_string(model.n_sites) + "\n";
  char buf[64];
  for (const auto& term : model.terms) {
    switch (term.kind) {
      case TermKind::Hopping:
      case TermKind::DensityDensity:
        out += term.kind == TermKind::Hopping ? "hop" : "nn";
        out += ' ' + std::to_string(term.indices[0]);
        out += ' ' + std::to_string(term.indices[1]);
        break;
      case TermKind::MajoranaQuartic:
        out += "syk";
        for (uint32_t v : term.indices) out += ' ' + std::to_string(v);
        break;
      default:
        fail("model text format does not cover this term kind");
    }
    std::snprintf(buf, sizeof buf, " %.17g\n", term.coeff);
    out += buf;
  }
  return out;
}

}  // namespace auxenc
