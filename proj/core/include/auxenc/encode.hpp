#pragma once

#include <array>
#include <string>
#include <vector>

#include "auxenc/graph.hpp"
#include "auxenc/models.hpp"
#include "auxenc/modes.hpp"

namespace auxenc {

// Stabilizer generator of an oriented edge at its register level:
// sign * i * c_tail * d_head, both Majoranas taken at level e.reg.
// Hermitian and squares to the identity.
PauliTerm stabilizer_term(const ModeLayout& layout, const OrientedEdge& e,
                          int sign = +1);

// Pairs of plan edges whose stabilizers fail to commute. Empty for every
// valid plan; exposed so verification can report rather than assert.
std::vector<std::pair<uint32_t, uint32_t>> stabilizer_commutation_violations(
    const ModeLayout& layout, const StabilizerPlan& plan);

// Each transform multiplies the Jordan-Wigner image of a fermionic term
// by the stabilizers of the edges it spans, which cancels the inter-site
// strings and leaves support on the endpoint site blocks only.

// t (a_i^dag a_j + h.c.) times the stabilizer of edge (i, j).
PauliSum transform_hopping(const ModeLayout& layout, const StabilizerPlan& plan,
                           uint32_t i, uint32_t j, double t);
// v n_i n_j; already local, no stabilizer involved.
PauliSum transform_density(const ModeLayout& layout, uint32_t i, uint32_t j,
                           double v);
// u (a_i^dag a_j^dag a_k a_l + h.c.) times the stabilizers of edges
// (i, k) and (j, l). All four sites must be distinct.
PauliSum transform_four_fermion(const ModeLayout& layout,
                                const StabilizerPlan& plan, uint32_t i,
                                uint32_t j, uint32_t k, uint32_t l, double u);
// coeff * g_a g_b g_c g_d over physical Majoranas, times the stabilizers
// of the site edges spanned by the pairs (a, b) and (c, d). A pair on one
// site is already local; both pairs on the same edge cancel to no
// stabilizer at all.
PauliSum transform_syk_quartic(const ModeLayout& layout,
                               const StabilizerPlan& plan,
                               const std::array<uint32_t, 4>& majoranas,
                               double coeff);
// coeff * (a_{i1}^dag ... a_{in}^dag a_{j1} ... a_{jn} + h.c.) for mode
// pairs (i_r, j_r), times the stabilizer of every pair's edge. All 2n
// modes must be distinct; reduces to transform_hopping at n = 1 and to
// transform_four_fermion at n = 2.
PauliSum transform_general_even(
    const ModeLayout& layout, const StabilizerPlan& plan,
    const std::vector<std::pair<uint32_t, uint32_t>>& pairs, double coeff);

struct EncodedTerm {
  PauliSum op;
  std::vector<uint32_t> stabilizer_edges;  // plan edge indices, parity-reduced
  int64_t edge = -1;                       // primary graph edge for 2-site terms
  uint32_t layer = 0;                      // 0-based Trotter layer
  uint32_t weight = 0;                     // measured max Pauli weight
  uint32_t tight_bound = 0;                // 2 per mode plus 2 per register level
  uint32_t published_bound = 0;            // 2 per mode plus 1 per register level
  std::string label;
};

struct EncodedModel {
  FermionModel model;
  ModeLayout layout;
  StabilizerPlan plan;
  std::vector<PauliTerm> stabilizers;        // one per graph edge, +1 signs
  std::vector<EncodedTerm> terms;
  std::vector<std::vector<uint32_t>> layers;  // term indices per layer
};

// Site-level interaction graph spanned by a model's terms: hopping and
// density edges directly, plus the pair edges of quartic terms.
InteractionGraph interaction_graph(const FermionModel& model);

// Full pipeline: graph, coloring, stabilizer plan, per-term transform,
// layer grouping. Two-site terms take their edge color as layer; models
// with quartic terms fall back to greedy disjoint-support grouping for
// every term. Throws if terms of distinct support families collide
// within a layer.
EncodedModel encode_model(const FermionModel& model);

struct TermWeightRow {
  std::string label;
  uint32_t weight = 0;
  uint32_t tight_bound = 0;
  uint32_t published_bound = 0;
};

struct WeightAudit {
  std::vector<TermWeightRow> rows;
  uint32_t max_weight = 0;
  bool within_tight = true;    // every term weight <= tight bound
  bool hopping_exact = true;   // every hopping weight == tight bound
};

WeightAudit audit_weights(const EncodedModel& em);

PauliSum encoded_hamiltonian(const EncodedModel& em);

// One line per Pauli string: `layer <1-based> weight <w> <term text>`.
std::string encoded_dump(const EncodedModel& em);

// Views under a stabilizer sign record (one +1/-1 entry per graph edge).
// A negative sign negates that stabilizer; a term picks up the sign
// product of the stabilizers folded into it.
PauliTerm signed_stabilizer(const EncodedModel& em, uint32_t edge_index,
                            const std::vector<int>& signs);
PauliSum signed_term_op(const EncodedModel& em, uint32_t term_index,
                        const std::vector<int>& signs);
PauliSum signed_hamiltonian(const EncodedModel& em,
                            const std::vector<int>& signs);

}  // namespace auxenc
