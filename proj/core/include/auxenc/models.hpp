#pragma once

#include <array>
#include <string>
#include <vector>

#include "auxenc/graph.hpp"

namespace auxenc {

enum class TermKind {
  Hopping,          // t (a_i^dag a_j + a_j^dag a_i), indices {i, j}
  DensityDensity,   // v n_i n_j, indices {i, j}
  FourFermion,      // u (a_i^dag a_j^dag a_k a_l + h.c.), indices {i, j, k, l}
  MajoranaQuartic,  // j g_a g_b g_c g_d over physical Majoranas, indices {a, b, c, d}
  GeneralEven,      // indices flatten mode pairs (i1, j1, i2, j2, ...)
};

struct FermionTerm {
  TermKind kind = TermKind::Hopping;
  std::vector<uint32_t> indices;  // 1-based; sites except MajoranaQuartic
  double coeff = 0.0;
};

enum class ModelKind { Hopping, FermiHubbard, SparseSyk };

struct FermionModel {
  ModelKind kind = ModelKind::Hopping;
  uint32_t n_sites = 0;
  std::vector<FermionTerm> terms;
};

const char* model_kind_name(ModelKind kind);

// Simple d-regular graph on n vertices by pairing-model rejection
// sampling, deterministic per seed. Throws std::runtime_error when n*d is
// odd, d >= n, or the rejection budget runs out.
InteractionGraph random_regular_graph(uint32_t n, uint32_t d, uint64_t seed);

FermionModel hopping_model(const InteractionGraph& g, double t);
// One hopping and one density-density term per edge.
FermionModel fermi_hubbard_model(const InteractionGraph& g, double t, double v);

// Quartic Majorana terms on a 4-uniform d-regular hypergraph over
// n_majorana vertices (configuration model, degenerate and duplicate
// hyperedges rejected). Couplings are uniform on [-coupling_scale,
// +coupling_scale]. Requires n_majorana even and n_majorana*d divisible
// by 4.
FermionModel sparse_syk_model(uint32_t n_majorana, uint32_t d, uint64_t seed,
                              double coupling_scale);

// Text format: `model <kind>` header, `modes <N>`, then one line per term
// (`hop i j t`, `nn i j V`, `syk a b c d J`), 1-based indices, `#` starts
// a comment. Majorana indices run over 1..2N.
FermionModel parse_model(const std::string& text);
std::string model_to_string(const FermionModel& model);

}  // namespace auxenc
