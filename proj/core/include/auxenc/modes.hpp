#pragma once

#include <vector>

#include "auxenc/pauli.hpp"

namespace auxenc {

// Site-major qubit layout. Site i (1-based, i <= n_sites) owns the
// contiguous qubit block (i-1)*(n_aux+1) + level for level = 0..n_aux;
// level 0 is the site's physical mode and levels 1..n_aux are its
// auxiliary modes. Mode order for the fermion-to-qubit map follows the
// flattened qubit index.
//
// Occupation convention: with a = S (X - iY)/2 the number operator is
// (1 + Z)/2, so the computational |0> of a mode qubit reads as occupied
// and the all-zeros register is the fully occupied configuration. The
// all-zeros state doubles as the reference state for code space
// preparation; no algebraic claim depends on the occupation reading.
struct ModeLayout {
  uint32_t n_sites = 0;
  uint32_t n_aux = 0;  // auxiliary modes per site

  uint32_t total_qubits() const { return n_sites * (n_aux + 1); }
  uint32_t qubit(uint32_t site, uint32_t level) const;
};

// Majorana pair of the mode at (site, level): c = b + b^dag and
// d = i (b^dag - b), i.e. c = S Z_< X and d = -S Z_< Y at that qubit.
PauliTerm majorana_c(const ModeLayout& m, uint32_t site, uint32_t level);
PauliTerm majorana_d(const ModeLayout& m, uint32_t site, uint32_t level);

// 1-based Majorana index over the physical modes: 2i-1 -> c of site i,
// 2i -> d of site i, both at level 0.
PauliTerm majorana(const ModeLayout& m, uint32_t index);
uint32_t majorana_site(uint32_t index);
bool majorana_is_c(uint32_t index);

PauliSum annihilation_op(const ModeLayout& m, uint32_t site, uint32_t level = 0);
PauliSum creation_op(const ModeLayout& m, uint32_t site, uint32_t level = 0);
// n_i = a_i^dag a_i = (1 + Z)/2 on the physical mode of the site.
PauliSum number_op(const ModeLayout& m, uint32_t site);

// t (a_i^dag a_j + a_j^dag a_i), expanded symbolically.
PauliSum jw_hopping(const ModeLayout& m, uint32_t i, uint32_t j, double t);
// v n_i n_j.
PauliSum jw_density(const ModeLayout& m, uint32_t i, uint32_t j, double v);
// coeff * gamma_{idx[0]} * gamma_{idx[1]} * ... over physical-mode
// Majoranas; the result must come out Hermitian, which holds for
// products of 4k distinct indices (a bare pair c d is anti-Hermitian).
PauliSum jw_majorana_product(const ModeLayout& m, const std::vector<uint32_t>& idx,
                             double coeff);

}  // namespace auxenc
