#pragma once

#include <complex>
#include <vector>

#include "auxenc/encode.hpp"

namespace auxenc {

// Dense statevector over n qubits, little endian: bit q of the basis
// index is qubit q.
struct StateVector {
  uint32_t n_qubits = 0;
  std::vector<std::complex<double>> amp;

  static StateVector zero_state(uint32_t n);
  size_t dim() const { return amp.size(); }
  double norm() const;
  void normalize();
};

std::complex<double> inner(const StateVector& a, const StateVector& b);
// |<a|b>|, the global-phase-free overlap.
double fidelity(const StateVector& a, const StateVector& b);

void apply_pauli_term(StateVector& psi, const PauliTerm& t);
StateVector apply_pauli_sum(const StateVector& psi, const PauliSum& op);
std::complex<double> expectation(const StateVector& psi, const PauliSum& op);
std::complex<double> expectation(const StateVector& psi, const PauliTerm& t);

// e^{-i theta c P} for one Hermitian Pauli term (coefficient included).
void apply_exp_pauli_term(StateVector& psi, const PauliTerm& t, double theta);

// e^{-i theta H} for a Hermitian sum: sequential closed forms when all
// terms commute pairwise (then the product is exact), otherwise a dense
// exponential on the support, capped at support_cap qubits.
void apply_exp_pauli_sum(StateVector& psi, const PauliSum& h, double theta,
                         uint32_t support_cap = 10);

// e^{-i t H} psi. Dense eigendecomposition up to dense_cap qubits, then
// a Lanczos propagator with full reorthogonalization up to 20 qubits.
StateVector exact_evolve(const PauliSum& h, double t, const StateVector& psi,
                         uint32_t dense_cap = 11);

// Largest singular value of (op restricted to n qubits). Dense up to
// dense_cap qubits, Lanczos on op^dag op beyond.
double spectral_norm(const PauliSum& op, uint32_t n_qubits,
                     uint32_t dense_cap = 10);

struct PrepResult {
  StateVector state;          // joint register, physical block untouched
  std::vector<int> signs;     // one +1/-1 per plan edge
  std::vector<int> outcomes;  // measured prep only: Born outcome per edge
};

// Applies (c_tail - i d_head)/sqrt(2) for every plan edge in component
// order to the all-zeros reference, skipping the closing edge of each
// cycle whose eigenvalue is then fixed by the others. Signs record the
// resulting stabilizer eigenvalues. Throws if a factor annihilates the
// state (norm below 1e-8).
PrepResult prepare_aux_oracle(const ModeLayout& layout,
                              const StabilizerPlan& plan);

// Sector-targeted variant: edge e takes the factor
// (c_tail - i * target.at(e) * d_head)/sqrt(2), and a closing edge whose
// determined eigenvalue disagrees with its target gets a c_tail flip,
// which toggles that stabilizer alone. The result lands exactly in the
// requested sign sector, so a measured preparation can be checked against
// the oracle run aligned to its recorded signs.
PrepResult prepare_aux_oracle(const ModeLayout& layout,
                              const StabilizerPlan& plan,
                              const std::vector<int>& target);

// Same preparation through seeded Born-rule measurements: each edge
// applies the Kraus pair (c -+ i d)/2 and records the outcome. Closing
// edges of cycles come out deterministic.
PrepResult prepare_aux_measured(const ModeLayout& layout,
                                const StabilizerPlan& plan, uint64_t seed);

// Applies the annihilation operator of each listed site, highest site
// first, to a codespace state; use on a prep result to populate physical
// modes. On the bare layout this maps the reference onto the plain basis
// state of the listed sites with no sign.
StateVector apply_mode_flips(const ModeLayout& layout, const StateVector& psi,
                             const std::vector<uint32_t>& sites);

// Isometric embedding of an N-site physical state (2^N amplitudes) into
// the joint register: basis configuration x maps to the descending
// product of annihilation operators of x's set sites applied to the
// prepared reference, which intertwines every even fermionic operator
// with its image on the joint register.
StateVector embed_physical(const ModeLayout& layout, const StateVector& prepped,
                           const StateVector& psi_phys);

// Per-term operator lists in layer order. Encoded: the sign-corrected
// transformed terms. Physical: plain JW images of the model terms, on
// the joint layout or on the bare N-qubit layout.
std::vector<std::vector<PauliSum>> encoded_layer_terms(
    const EncodedModel& em, const std::vector<int>& signs);
std::vector<std::vector<PauliSum>> physical_layer_terms(const EncodedModel& em,
                                                        bool joint_layout);

// First-order product formula: M repetitions of layer-ascending,
// term-ordered exponentials with angle tau.
StateVector trotter_evolve_layers(const std::vector<std::vector<PauliSum>>& layers,
                                  double tau, uint32_t M, StateVector psi);
StateVector trotter_evolve(const EncodedModel& em, const std::vector<int>& signs,
                           double tau, uint32_t M, const StateVector& psi);

struct EquivalenceReport {
  double per_term_fidelity = 0.0;  // worst single-term overlap
  double full_fidelity = 0.0;      // M-step Trotter overlap
  double aux_drift = 0.0;          // max stabilizer expectation drift
};

// Verifies on a random-access physical state psi_phys (2^N amplitudes)
// that evolving the embedded state under each sign-corrected encoded
// term matches embedding the physically evolved state, that the full
// M-step Trotter products match, and that stabilizer expectations stay
// put during the encoded evolution.
EquivalenceReport equivalence_check(const EncodedModel& em,
                                    const StateVector& psi_phys, double tau,
                                    uint32_t M);

// Same checks driven by a caller-supplied preparation, so measured-prep
// states and deliberately altered sign records (negative controls) can
// be pushed through the full battery.
EquivalenceReport equivalence_check(const EncodedModel& em,
                                    const PrepResult& prep,
                                    const StateVector& psi_phys, double tau,
                                    uint32_t M);

// Product of (1 + s_e P_e)/2 over all edges, expanded. Throws above 12
// edges (term count doubles per edge).
PauliSum codespace_projector(const EncodedModel& em,
                             const std::vector<int>& signs);

// Sum over layer pairs of the spectral norm of their commutator.
double commutator_lambda(const std::vector<PauliSum>& layer_ops,
                         uint32_t n_qubits);
// Same, with every commutator compressed by a projector on both sides.
double commutator_lambda_projected(const std::vector<PauliSum>& layer_ops,
                                   const PauliSum& projector, uint32_t n_qubits);

}  // namespace auxenc
