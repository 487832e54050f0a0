#include "auxenc/encode.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace auxenc {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

uint32_t edge_index_or_throw(const StabilizerPlan& plan, uint32_t a, uint32_t b) {
  const int64_t e = plan.graph.edge_index(a, b);
  if (e < 0) {
    fail("no stabilizer edge between sites " + std::to_string(a) + " and " +
         std::to_string(b));
  }
  return static_cast<uint32_t>(e);
}

// Drops edges that appear an even number of times (a stabilizer squares
// to the identity); the survivors come back sorted.
std::vector<uint32_t> parity_reduce(std::vector<uint32_t> edges) {
  std::sort(edges.begin(), edges.end());
  std::vector<uint32_t> reduced;
  for (size_t k = 0; k < edges.size();) {
    size_t r = k;
    while (r < edges.size() && edges[r] == edges[k]) ++r;
    if ((r - k) % 2 == 1) reduced.push_back(edges[k]);
    k = r;
  }
  return reduced;
}

std::vector<uint32_t> fold_stabilizers(const ModeLayout& layout,
                                       const StabilizerPlan& plan,
                                       std::vector<uint32_t> edges,
                                       PauliSum& op) {
  std::vector<uint32_t> reduced = parity_reduce(std::move(edges));
  for (uint32_t e : reduced) {
    op = sum_mul(op, stabilizer_term(layout, plan.edges[e]));
  }
  return reduced;
}

}  // namespace

PauliTerm stabilizer_term(const ModeLayout& layout, const OrientedEdge& e,
                          int sign) {
  if (sign != 1 && sign != -1) fail("stabilizer sign must be +1 or -1");
  PauliTerm p = pauli_mul(majorana_c(layout, e.tail, e.reg),
                          majorana_d(layout, e.head, e.reg));
  p.phase_pow += sign < 0 ? 3 : 1;
  p.canonicalize();
  if (!p.is_hermitian()) fail("stabilizer came out non-hermitian");
  return p;
}

std::vector<std::pair<uint32_t, uint32_t>> stabilizer_commutation_violations(
    const ModeLayout& layout, const StabilizerPlan& plan) {
  std::vector<PauliTerm> stabs;
  stabs.reserve(plan.edges.size());
  for (const auto& e : plan.edges) stabs.push_back(stabilizer_term(layout, e));
  std::vector<std::pair<uint32_t, uint32_t>> bad;
  for (uint32_t a = 0; a < stabs.size(); ++a) {
    for (uint32_t b = a + 1; b < stabs.size(); ++b) {
      if (!pauli_commute(stabs[a], stabs[b])) bad.push_back({a, b});
    }
  }
  return bad;
}

PauliSum transform_hopping(const ModeLayout& layout, const StabilizerPlan& plan,
                           uint32_t i, uint32_t j, double t) {
  const uint32_t e = edge_index_or_throw(plan, i, j);
  PauliSum op = sum_mul(jw_hopping(layout, i, j, t),
                        stabilizer_term(layout, plan.edges[e]));
  op.canonicalize();
  return op;
}

PauliSum transform_density(const ModeLayout& layout, uint32_t i, uint32_t j,
                           double v) {
  return jw_density(layout, i, j, v);
}

PauliSum transform_four_fermion(const ModeLayout& layout,
                                const StabilizerPlan& plan, uint32_t i,
                                uint32_t j, uint32_t k, uint32_t l, double u) {
  return transform_general_even(layout, plan, {{i, k}, {j, l}}, u);
}

PauliSum transform_syk_quartic(const ModeLayout& layout,
                               const StabilizerPlan& plan,
                               const std::array<uint32_t, 4>& majoranas,
                               double coeff) {
  std::array<uint32_t, 4> sorted = majoranas;
  std::sort(sorted.begin(), sorted.end());
  for (size_t k = 0; k + 1 < sorted.size(); ++k) {
    if (sorted[k] == sorted[k + 1]) fail("Majorana indices must be distinct");
  }
  PauliSum op = jw_majorana_product(
      layout, {majoranas[0], majoranas[1], majoranas[2], majoranas[3]}, coeff);
  std::vector<uint32_t> edges;
  for (const auto& [a, b] : {std::pair{majoranas[0], majoranas[1]},
                            std::pair{majoranas[2], majoranas[3]}}) {
    const uint32_t sa = majorana_site(a), sb = majorana_site(b);
    if (sa != sb) edges.push_back(edge_index_or_throw(plan, sa, sb));
  }
  fold_stabilizers(layout, plan, std::move(edges), op);
  op.canonicalize();
  return op;
}

PauliSum transform_general_even(
    const ModeLayout& layout, const StabilizerPlan& plan,
    const std::vector<std::pair<uint32_t, uint32_t>>& pairs, double coeff) {
  if (pairs.empty()) fail("even transform needs at least one mode pair");
  std::set<uint32_t> modes;
  for (const auto& [a, b] : pairs) {
    modes.insert(a);
    modes.insert(b);
  }
  if (modes.size() != 2 * pairs.size()) {
    fail("even transform needs pairwise distinct modes");
  }

  PauliSum mono = creation_op(layout, pairs[0].first);
  for (size_t r = 1; r < pairs.size(); ++r) {
    mono = sum_mul(mono, creation_op(layout, pairs[r].first));
  }
  for (const auto& pr : pairs) {
    mono = sum_mul(mono, annihilation_op(layout, pr.second));
  }
  PauliSum op = mono;
  op += sum_adjoint(mono);
  op *= coeff;

  std::vector<uint32_t> edges;
  for (const auto& [a, b] : pairs) {
    edges.push_back(edge_index_or_throw(plan, a, b));
  }
  fold_stabilizers(layout, plan, std::move(edges), op);
  op.canonicalize();
  return op;
}

InteractionGraph interaction_graph(const FermionModel& model) {
  InteractionGraph g;
  g.n_vertices = model.n_sites;
  auto add = [&g](uint32_t a, uint32_t b) {
    if (a != b) g.add_edge(a, b);
  };
  for (const auto& term : model.terms) {
    const auto& ix = term.indices;
    switch (term.kind) {
      case TermKind::Hopping:
      case TermKind::DensityDensity:
        add(ix.at(0), ix.at(1));
        break;
      case TermKind::FourFermion:
        add(ix.at(0), ix.at(2));
        add(ix.at(1), ix.at(3));
        break;
      case TermKind::MajoranaQuartic:
        add(majorana_site(ix.at(0)), majorana_site(ix.at(1)));
        add(majorana_site(ix.at(2)), majorana_site(ix.at(3)));
        break;
      case TermKind::GeneralEven:
        if (ix.size() % 2 != 0) fail("even term needs an even index count");
        for (size_t r = 0; r + 1 < ix.size(); r += 2) add(ix[r], ix[r + 1]);
        break;
    }
  }
  g.normalize();
  return g;
}

namespace {

std::string term_label(const FermionTerm& term) {
  const char* tag = nullptr;
  switch (term.kind) {
    case TermKind::Hopping: tag = "hop"; break;
    case TermKind::DensityDensity: tag = "nn"; break;
    case TermKind::FourFermion: tag = "four"; break;
    case TermKind::MajoranaQuartic: tag = "syk"; break;
    case TermKind::GeneralEven: tag = "even"; break;
  }
  std::string out = tag;
  for (uint32_t v : term.indices) out += ' ' + std::to_string(v);
  return out;
}

uint32_t register_of(const EncodedModel& em, uint32_t edge) {
  return em.plan.edges[edge].reg;
}

void set_bounds(EncodedModel& em, EncodedTerm& et, const FermionTerm& src) {
  switch (src.kind) {
    case TermKind::Hopping: {
      const uint32_t l = register_of(em, static_cast<uint32_t>(et.edge));
      et.tight_bound = 2 * (l + 1);
      et.published_bound = 2 + l;
      break;
    }
    case TermKind::DensityDensity:
      et.tight_bound = 2;
      et.published_bound = 2;
      break;
    case TermKind::FourFermion:
    case TermKind::GeneralEven: {
      const uint32_t n = static_cast<uint32_t>(src.indices.size() / 2);
      uint32_t sum_l = 0;
      for (uint32_t e : et.stabilizer_edges) sum_l += register_of(em, e);
      et.tight_bound = 2 * n + 2 * et.stabilizer_edges.size() + 2 * sum_l;
      et.published_bound = 2 * n + sum_l;
      break;
    }
    case TermKind::MajoranaQuartic: {
      // Each same-site pair costs one qubit; each cross-site pair costs
      // its two endpoint blocks.
      uint32_t tight = 0, published = 0;
      for (const auto& [a, b] :
           {std::pair{src.indices[0], src.indices[1]},
            std::pair{src.indices[2], src.indices[3]}}) {
        const uint32_t sa = majorana_site(a), sb = majorana_site(b);
        if (sa == sb) {
          tight += 1;
          published += 2;
        } else {
          const int64_t e = em.plan.graph.edge_index(sa, sb);
          const uint32_t l = register_of(em, static_cast<uint32_t>(e));
          tight += 2 * (l + 1);
          published += 2 + l;
        }
      }
      et.tight_bound = tight;
      et.published_bound = published;
      break;
    }
  }
}

// First-fit grouping over term order; a term lands in the first layer
// whose occupied qubits it avoids entirely.
void assign_layers_greedy(EncodedModel& em) {
  std::vector<std::set<uint32_t>> occupied;
  for (uint32_t t = 0; t < em.terms.size(); ++t) {
    const auto sup = em.terms[t].op.support();
    size_t chosen = occupied.size();
    for (size_t l = 0; l < occupied.size(); ++l) {
      bool clash = false;
      for (uint32_t q : sup) {
        if (occupied[l].count(q)) { clash = true; break; }
      }
      if (!clash) { chosen = l; break; }
    }
    if (chosen == occupied.size()) {
      occupied.emplace_back();
      em.layers.emplace_back();
    }
    occupied[chosen].insert(sup.begin(), sup.end());
    em.terms[t].layer = static_cast<uint32_t>(chosen);
    em.layers[chosen].push_back(t);
  }
}

void assign_layers_by_color(EncodedModel& em) {
  em.layers.assign(em.plan.coloring.n_colors, {});
  for (uint32_t t = 0; t < em.terms.size(); ++t) {
    const uint32_t e = static_cast<uint32_t>(em.terms[t].edge);
    const uint32_t layer = em.plan.coloring.color[e] - 1;
    em.terms[t].layer = layer;
    em.layers[layer].push_back(t);
  }
  // Terms on the same edge share support by design (a density term rides
  // with its hopping edge); distinct edges must stay disjoint.
  for (const auto& layer : em.layers) {
    for (size_t a = 0; a < layer.size(); ++a) {
      for (size_t b = a + 1; b < layer.size(); ++b) {
        const auto& ta = em.terms[layer[a]];
        const auto& tb = em.terms[layer[b]];
        if (ta.edge == tb.edge) continue;
        const auto sa = ta.op.support();
        const auto sb = tb.op.support();
        std::vector<uint32_t> common;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::back_inserter(common));
        if (!common.empty()) {
          fail("layer overlap between " + ta.label + " and " + tb.label);
        }
      }
    }
  }
}

}  // namespace

EncodedModel encode_model(const FermionModel& model) {
  EncodedModel em;
  em.model = model;
  em.plan = plan_stabilizers(interaction_graph(model));
  em.layout = ModeLayout{model.n_sites, em.plan.n_registers};
  for (const auto& e : em.plan.edges) {
    em.stabilizers.push_back(stabilizer_term(em.layout, e));
  }

  bool any_quartic = false;
  for (const auto& term : model.terms) {
    EncodedTerm et;
    et.label = term_label(term);
    const auto& ix = term.indices;
    switch (term.kind) {
      case TermKind::Hopping:
        et.edge = em.plan.graph.edge_index(ix[0], ix[1]);
        et.op = transform_hopping(em.layout, em.plan, ix[0], ix[1], term.coeff);
        et.stabilizer_edges = {static_cast<uint32_t>(et.edge)};
        break;
      case TermKind::DensityDensity:
        et.edge = em.plan.graph.edge_index(ix[0], ix[1]);
        et.op = transform_density(em.layout, ix[0], ix[1], term.coeff);
        break;
      case TermKind::FourFermion: {
        any_quartic = true;
        et.op = transform_four_fermion(em.layout, em.plan, ix[0], ix[1], ix[2],
                                       ix[3], term.coeff);
        et.stabilizer_edges = {
            edge_index_or_throw(em.plan, ix[0], ix[2]),
            edge_index_or_throw(em.plan, ix[1], ix[3])};
        std::sort(et.stabilizer_edges.begin(), et.stabilizer_edges.end());
        break;
      }
      case TermKind::MajoranaQuartic: {
        any_quartic = true;
        et.op = transform_syk_quartic(em.layout, em.plan,
                                      {ix[0], ix[1], ix[2], ix[3]}, term.coeff);
        std::vector<uint32_t> edges;
        for (const auto& [a, b] :
             {std::pair{ix[0], ix[1]}, std::pair{ix[2], ix[3]}}) {
          const uint32_t sa = majorana_site(a), sb = majorana_site(b);
          if (sa != sb) edges.push_back(edge_index_or_throw(em.plan, sa, sb));
        }
        et.stabilizer_edges = parity_reduce(std::move(edges));
        break;
      }
      case TermKind::GeneralEven: {
        any_quartic = true;
        std::vector<std::pair<uint32_t, uint32_t>> pairs;
        for (size_t r = 0; r + 1 < ix.size(); r += 2) {
          pairs.push_back({ix[r], ix[r + 1]});
        }
        et.op = transform_general_even(em.layout, em.plan, pairs, term.coeff);
        for (const auto& [a, b] : pairs) {
          et.stabilizer_edges.push_back(edge_index_or_throw(em.plan, a, b));
        }
        std::sort(et.stabilizer_edges.begin(), et.stabilizer_edges.end());
        break;
      }
    }
    et.weight = et.op.max_weight();
    set_bounds(em, et, term);
    em.terms.push_back(std::move(et));
  }

  if (any_quartic) {
    assign_layers_greedy(em);
  } else {
    assign_layers_by_color(em);
  }
  return em;
}

WeightAudit audit_weights(const EncodedModel& em) {
  WeightAudit audit;
  for (const auto& term : em.terms) {
    audit.rows.push_back(
        {term.label, term.weight, term.tight_bound, term.published_bound});
    audit.max_weight = std::max(audit.max_weight, term.weight);
    if (term.weight > term.tight_bound) audit.within_tight = false;
    if (term.label.rfind("hop ", 0) == 0 && term.weight != term.tight_bound) {
      audit.hopping_exact = false;
    }
  }
  return audit;
}

PauliSum encoded_hamiltonian(const EncodedModel& em) {
  PauliSum h;
  for (const auto& term : em.terms) h += term.op;
  h.canonicalize();
  return h;
}

std::string encoded_dump(const EncodedModel& em) {
  std::string out;
  char buf[64];
  for (size_t layer = 0; layer < em.layers.size(); ++layer) {
    for (uint32_t t : em.layers[layer]) {
      for (const auto& p : em.terms[t].op.terms) {
        std::snprintf(buf, sizeof buf, "layer %zu weight %u ", layer + 1,
                      p.weight());
        out += buf;
        out += p.to_string();
        out += '\n';
      }
    }
  }
  return out;
}

namespace {

int edge_sign(const std::vector<int>& signs, uint32_t edge, size_t n_edges) {
  if (signs.size() != n_edges) fail("sign record size does not match edge count");
  const int s = signs[edge];
  if (s != 1 && s != -1) fail("sign record entries must be +1 or -1");
  return s;
}

}  // namespace

PauliTerm signed_stabilizer(const EncodedModel& em, uint32_t edge_index,
                            const std::vector<int>& signs) {
  const int s = edge_sign(signs, edge_index, em.plan.edges.size());
  return stabilizer_term(em.layout, em.plan.edges[edge_index], s);
}

PauliSum signed_term_op(const EncodedModel& em, uint32_t term_index,
                        const std::vector<int>& signs) {
  const auto& term = em.terms.at(term_index);
  int s = 1;
  for (uint32_t e : term.stabilizer_edges) {
    s *= edge_sign(signs, e, em.plan.edges.size());
  }
  PauliSum op = term.op;
  if (s < 0) op *= -1.0;
  return op;
}

PauliSum signed_hamiltonian(const EncodedModel& em,
                            const std::vector<int>& signs) {
  PauliSum h;
  for (uint32_t t = 0; t < em.terms.size(); ++t) {
    h += signed_term_op(em, t, signs);
  }
  h.canonicalize();
  return h;
}

}  // namespace auxenc
