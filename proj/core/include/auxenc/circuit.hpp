#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "auxenc/encode.hpp"
#include "auxenc/sim.hpp"

namespace auxenc {

// Gate-level scheduling with exact depth accounting. Depth counts layers
// that contain at least one multi-qubit gate; single-qubit layers are
// reported separately through total_layers().

enum class GateKind : uint8_t {
  H,
  X,
  S,
  Sdg,
  RZ,       // exp(-i angle Z / 2) on q0
  CX,       // control q0, target q1
  CZ,       // control q0, target q1
  CIY,      // control q0, applies iY = ZX to q1 on the |1> branch
  Measure,  // computational-basis measurement of q0
};

struct Gate {
  GateKind kind;
  uint32_t q0 = 0;
  uint32_t q1 = 0;
  double angle = 0.0;

  static Gate h(uint32_t q) { return {GateKind::H, q, 0, 0.0}; }
  static Gate x(uint32_t q) { return {GateKind::X, q, 0, 0.0}; }
  static Gate s(uint32_t q) { return {GateKind::S, q, 0, 0.0}; }
  static Gate sdg(uint32_t q) { return {GateKind::Sdg, q, 0, 0.0}; }
  static Gate rz(uint32_t q, double angle) { return {GateKind::RZ, q, 0, angle}; }
  static Gate cx(uint32_t c, uint32_t t) { return {GateKind::CX, c, t, 0.0}; }
  static Gate cz(uint32_t c, uint32_t t) { return {GateKind::CZ, c, t, 0.0}; }
  static Gate ciy(uint32_t c, uint32_t t) { return {GateKind::CIY, c, t, 0.0}; }
  static Gate measure(uint32_t q) { return {GateKind::Measure, q, 0, 0.0}; }

  bool two_qubit() const {
    return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::CIY;
  }
  uint32_t max_qubit() const { return two_qubit() ? std::max(q0, q1) : q0; }
};

struct GateLayer {
  std::vector<Gate> gates;
  bool entangling() const;
};

struct GateSchedule {
  uint32_t n_qubits = 0;
  // Qubits beyond the register the schedule was built for (measurement
  // ancillas plus fanout scratch).
  uint32_t ancilla_count = 0;
  // exp(i global_phase) applied once; carries identity-term rotations.
  double global_phase = 0.0;
  std::vector<GateLayer> layers;

  uint32_t depth() const;         // layers with at least one multi-qubit gate
  uint32_t total_layers() const;  // all layers
  uint64_t gate_count() const;
  // Throws if a qubit appears twice within one layer or an index is out
  // of range.
  void validate() const;
};

// ASAP packer: each added gate lands in the earliest layer where all its
// operands are free, never crossing the last barrier.
class ScheduleBuilder {
 public:
  void add(const Gate& g);
  void add_phase(double phi) { phase_ += phi; }
  // Forces everything added later to start after everything added so far.
  void barrier();
  // Lines the listed qubits up on their common latest frontier so a
  // following block of parallel gates starts in one layer. Local to the
  // listed qubits; everything else keeps packing freely.
  void align(const std::vector<uint32_t>& qubits);
  GateSchedule finish();

 private:
  std::vector<std::vector<Gate>> layers_;
  std::vector<size_t> frontier_;
  size_t floor_ = 0;
  double phase_ = 0.0;
  uint32_t n_qubits_ = 0;
};

// Image g t g^dagger of a Pauli term under one Clifford gate (H, X, S,
// Sdg, CX, CZ only; throws otherwise). The vector overload folds gates in
// application order, so the result is the term conjugated through the
// whole circuit prefix.
PauliTerm conjugate_through(const Gate& g, const PauliTerm& t);
PauliTerm conjugate_through(const std::vector<Gate>& gates, PauliTerm t);

// Circuit for exp(-i angle * term): basis-change layer, balanced CX
// parity tree of depth ceil(log2 w) rooted at the lowest support qubit,
// one Z rotation, mirrored un-compute. Zero-weight terms produce a
// global-phase-only schedule. Throws if the term amplitude is not real.
GateSchedule pauli_gadget(const PauliTerm& term, double angle);

// Fused circuit for exp(-i angle * (a + b)) where a and b share support
// and differ by an X<->Y swap at exactly two qubits. Both rotations ride
// one pair of split parity trees, so the two-qubit depth matches a single
// gadget of the same weight. Throws if the pair does not have that shape.
GateSchedule pauli_pair_gadget(const PauliTerm& a, const PauliTerm& b,
                               double angle);

// Controlled-Z from control to every target, spread over scratch copies
// of the control when that lowers depth. Two-qubit depth is at most
// 2*ceil(log2 t) + 1 for t targets; scratch qubits are allocated past the
// highest operand index and returned to |0>.
GateSchedule cz_fanout(uint32_t control, const std::vector<uint32_t>& targets);

// One first-order Trotter step: colors in sequence, every term of a color
// as parallel gadgets (hopping pairs fused). signs scales each term by
// the product of its stabilizer sector signs; empty means all +1. Throws
// if a term's words do not pairwise commute.
GateSchedule trotter_step_schedule(const EncodedModel& em, double tau,
                                   const std::vector<int>& signs = {});

// One measurement block of the ordered preparation: the pair of sites it
// prepares, its measurement ancilla, and the stabilizer sign implied by
// outcome 0 (outcome 1 flips it).
struct PrepBlock {
  uint32_t tail_site = 0;
  uint32_t head_site = 0;
  uint32_t anc = 0;
  int base_sign = +1;
};

struct OrderedPrepSchedule {
  GateSchedule schedule;
  std::vector<PrepBlock> blocks;
  uint32_t level = 0;
  uint32_t measure_ancillas = 0;
  uint32_t scratch_ancillas = 0;
  // Largest letter count among the realized truncated pair-operator
  // words, next to the min(level, n_aux - level) count a closed-form
  // estimate would give. Reported side by side because the two need not
  // agree; the realized count is the one the fanouts actually pay for.
  uint32_t tilde_weight = 0;
  uint32_t tilde_weight_formula = 0;
  // Odd site counts leave the last site unpaired; it is recorded here and
  // its auxiliary mode stays in the reference state.
  bool padded = false;
};

// Parallel preparation of consecutive-pair stabilizers (1,2), (3,4), ...
// at one auxiliary level: per pair, a Hadamard-framed ancilla controls the
// string-truncated pair operators (controlled-X plus CZ fanout, then a
// controlled-iY plus CZ fanout) and is measured. All blocks act on
// disjoint qubits and run in parallel.
OrderedPrepSchedule ordered_prep_schedule(const ModeLayout& layout,
                                          uint32_t level);

struct ScheduleRun {
  StateVector state;
  std::vector<int> outcomes;
};

// Executes a schedule on a statevector (padded with |0> ancillas if the
// input is narrower than schedule.n_qubits). Measurements draw from
// seeded per-event streams and are recorded in order.
ScheduleRun simulate_schedule(const GateSchedule& s, const StateVector& psi0,
                              uint64_t seed);

// Stabilizer sign record implied by an ordered-prep run's outcomes.
std::vector<int> prep_signs_from_outcomes(const OrderedPrepSchedule& prep,
                                          const std::vector<int>& outcomes);

enum class PermutationMode { WithMeasurement, WithoutMeasurement };

// Named constant factors for formula-based cost rows. They are model
// parameters, not measurements.
struct CostModel {
  double perm_meas_const = 1.0;
  double perm_unmeas_const = 1.0;
};

struct DepthCost {
  double depth = 0.0;
  uint64_t ancillas = 0;
  bool formula = true;
};

// Closed-form cost of one fermionic mode permutation. No gate-level
// realization exists here; the simulator prepares auxiliary states by
// direct operator application instead.
DepthCost permutation_cost(uint32_t n_modes, uint32_t chi,
                           PermutationMode mode, const CostModel& cm = {});

struct DepthRow {
  std::string operation;
  double depth = 0.0;
  uint64_t ancillas = 0;
  bool measured = false;  // false marks a formula-based model row
};

struct DepthReport {
  std::vector<DepthRow> rows;
  double prep_depth = 0.0;
  uint32_t per_step_depth = 0;
  uint64_t ancilla_total = 0;
  uint32_t padded_sites = 0;
  double total_depth(uint32_t m_steps) const {
    return prep_depth + double(m_steps) * double(per_step_depth);
  }
};

// Aggregates the preparation schedules of every register, both
// permutation cost rows, and one Trotter step into the six-row resource
// table. Measured rows carry integers from realized schedules; formula
// rows evaluate the closed forms in cm.
DepthReport full_depth_report(const EncodedModel& em, const CostModel& cm = {});

std::string render_depth_table(const DepthReport& report);
std::string render_depth_csv(const DepthReport& report);

}  // namespace auxenc
