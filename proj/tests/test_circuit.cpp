#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <vector>

#include "auxenc/circuit.hpp"
#include "auxenc/rng.hpp"
#include "auxenc/sim.hpp"
#include "oracle.hpp"

using namespace auxenc;
namespace oracle = auxenc::testing;

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

InteractionGraph make_graph(uint32_t n,
                            std::vector<std::pair<uint32_t, uint32_t>> edges) {
  InteractionGraph g;
  g.n_vertices = n;
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  g.normalize();
  return g;
}

StateVector random_state(uint32_t n_qubits, uint64_t seed) {
  StateVector s = StateVector::zero_state(n_qubits);
  Rng rng(seed);
  for (auto& a : s.amp) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  s.normalize();
  return s;
}

StateVector run_on(const GateSchedule& s, const StateVector& psi,
                   uint64_t seed = 7) {
  return simulate_schedule(s, psi, seed).state;
}

double state_diff(const StateVector& a, const StateVector& b) {
  REQUIRE(a.dim() == b.dim());
  double d2 = 0.0;
  for (size_t i = 0; i < a.dim(); ++i) d2 += std::norm(a.amp[i] - b.amp[i]);
  return std::sqrt(d2);
}

// exp(-i angle * t) on a state, from the closed form of a Hermitian word:
// cos(angle a) - i sin(angle a) P with P the bare letter pattern.
StateVector exp_word_reference(const PauliTerm& t, double angle,
                               const StateVector& psi) {
  PauliTerm w = t;
  w.canonicalize();
  const std::complex<double> amp = w.amplitude();
  REQUIRE(std::abs(amp.imag()) < 1e-15);
  const double a = amp.real();
  PauliTerm bare = w;
  bare.coeff = 1.0;
  bare.phase_pow = 0;
  StateVector flipped = psi;
  apply_pauli_term(flipped, bare);
  StateVector out = psi;
  for (size_t i = 0; i < out.dim(); ++i) {
    out.amp[i] = std::cos(angle * a) * psi.amp[i] -
                 kI * std::sin(angle * a) * flipped.amp[i];
  }
  return out;
}

// Consecutive-pair stabilizer plan (1,2), (3,4), ... all on one register.
StabilizerPlan pair_plan(uint32_t n_sites, uint32_t reg) {
  StabilizerPlan p;
  p.graph.n_vertices = n_sites;
  for (uint32_t u = 1; u + 1 <= n_sites; u += 2) p.graph.add_edge(u, u + 1);
  p.graph.normalize();
  p.coloring.n_colors = 1;
  p.coloring.color.assign(p.graph.edges.size(), 1);
  p.n_registers = reg;
  for (size_t i = 0; i < p.graph.edges.size(); ++i) {
    const auto& [u, v] = p.graph.edges[i];
    OrientedEdge e;
    e.tail = u;
    e.head = v;
    e.color = 1;
    e.reg = reg;
    p.edges.push_back(e);
    RegisterComponent c;
    c.reg = reg;
    c.is_cycle = false;
    c.edge_order = {static_cast<uint32_t>(i)};
    p.components.push_back(c);
  }
  return p;
}

PauliTerm word(const std::string& text) { return parse_pauli_term(text); }

}  // namespace

TEST_CASE("schedule builder packs disjoint gates and honors barriers") {
  ScheduleBuilder b;
  b.add(Gate::cx(0, 1));
  b.add(Gate::cx(2, 3));  // disjoint, same layer
  b.add(Gate::h(4));      // single qubit, same layer
  b.add(Gate::cx(1, 2));  // overlaps both, next layer
  b.add(Gate::rz(4, 0.5));
  GateSchedule s = b.finish();
  REQUIRE(s.n_qubits == 5);
  REQUIRE(s.total_layers() == 2);
  REQUIRE(s.layers[0].gates.size() == 3);
  REQUIRE(s.layers[1].gates.size() == 2);
  REQUIRE(s.depth() == 2);

  ScheduleBuilder c;
  c.add(Gate::h(0));
  c.barrier();
  c.add(Gate::h(1));  // would fit in layer 0, barrier forbids it
  GateSchedule t = c.finish();
  REQUIRE(t.total_layers() == 2);
  REQUIRE(t.depth() == 0);  // no multi-qubit gate anywhere

  ScheduleBuilder d;
  REQUIRE_THROWS_AS(d.add(Gate::cx(3, 3)), std::invalid_argument);
}

TEST_CASE("schedule validation rejects malformed layers") {
  GateSchedule s;
  s.n_qubits = 2;
  GateLayer l;
  l.gates.push_back(Gate::h(0));
  l.gates.push_back(Gate::rz(0, 0.1));  // qubit 0 twice in one layer
  s.layers.push_back(l);
  REQUIRE_THROWS_AS(s.validate(), std::runtime_error);

  GateSchedule r;
  r.n_qubits = 1;
  GateLayer m;
  m.gates.push_back(Gate::cx(0, 1));  // operand outside the register
  r.layers.push_back(m);
  REQUIRE_THROWS_AS(r.validate(), std::runtime_error);
}

TEST_CASE("clifford conjugation matches the simulated gates") {
  // For U a single gate and t a Pauli word, U t U^dag applied to a state
  // must equal applying the conjugated term.
  const std::vector<Gate> gates = {Gate::h(0),     Gate::x(1),
                                   Gate::s(0),     Gate::sdg(1),
                                   Gate::cx(0, 1), Gate::cz(1, 2)};
  const std::vector<std::string> words = {"+1 X0", "+1 Y1", "+1 Z0 X1",
                                          "-1 Y0 Y1 Z2", "+1 X0 Y1 X2"};
  for (const Gate& g : gates) {
    ScheduleBuilder b;
    b.add(g);
    const GateSchedule sched = b.finish();
    for (const auto& wtext : words) {
      const PauliTerm t = word(wtext);
      const PauliTerm img = conjugate_through(g, t);
      const StateVector psi = random_state(3, 17);
      // left side: U (t psi)
      StateVector lhs = psi;
      apply_pauli_term(lhs, t);
      lhs = run_on(sched, lhs);
      // right side: img (U psi)
      StateVector rhs = run_on(sched, psi);
      apply_pauli_term(rhs, img);
      REQUIRE(state_diff(lhs, rhs) < 1e-12);
    }
  }
  REQUIRE_THROWS_AS(conjugate_through(Gate::rz(0, 0.3), word("+1 X0")),
                    std::runtime_error);
  REQUIRE_THROWS_AS(conjugate_through(Gate::ciy(0, 1), word("+1 X1")),
                    std::runtime_error);
}

TEST_CASE("pauli gadget realizes the exponential of one word") {
  struct Case {
    std::string text;
    uint32_t n;
    uint32_t expect_depth;
  };
  const std::vector<Case> cases = {
      {"+0.7 Z0", 1, 0},
      {"+1 X0 X1", 2, 2},
      {"-0.5 X0 X1 Y2 Y3", 4, 4},
      {"+0.8 Z0 Y1 X2", 3, 4},
      {"+0.3 X0 Y1 Z2 X3 Y4 Z5 X6 Y7", 8, 6},
  };
  for (const auto& c : cases) {
    const PauliTerm t = word(c.text);
    const double angle = 0.83;
    const GateSchedule s = pauli_gadget(t, angle);
    REQUIRE(s.depth() == c.expect_depth);
    for (uint64_t seed : {3u, 4u}) {
      const StateVector psi = random_state(c.n, seed);
      const StateVector got = run_on(s, psi);
      const StateVector want = exp_word_reference(t, angle, psi);
      REQUIRE(state_diff(got, want) < 1e-12);
    }
  }

  // Zero-weight terms become a pure global phase.
  const GateSchedule ph = pauli_gadget(PauliTerm::identity(0.8), 0.5);
  REQUIRE(ph.gate_count() == 0);
  const StateVector psi = random_state(2, 11);
  const StateVector got = run_on(ph, psi);
  StateVector want = psi;
  for (auto& a : want.amp) a *= std::exp(-kI * 0.5 * 0.8);
  REQUIRE(state_diff(got, want) < 1e-12);

  // Anti-Hermitian amplitudes have no Hermitian generator to exponentiate.
  PauliTerm bad = word("+1 X0 Z1");
  bad.phase_pow = 1;
  REQUIRE_THROWS_AS(pauli_gadget(bad, 0.1), std::invalid_argument);
}

TEST_CASE("pauli gadget random sweep against the closed form") {
  Rng rng(2024);
  for (int rep = 0; rep < 25; ++rep) {
    const uint32_t n = 6;
    std::set<uint32_t> qubits;
    const uint32_t w = 1 + rng.index(6);
    while (qubits.size() < w) qubits.insert(rng.index(n));
    PauliTerm t;
    for (const uint32_t q : qubits) {
      t.letters.emplace_back(q, static_cast<Pauli>(1 + rng.index(3)));
    }
    t.coeff = rng.uniform() - 0.5;
    t.canonicalize();
    const double angle = 3.0 * (rng.uniform() - 0.5);
    const GateSchedule s = pauli_gadget(t, angle);
    uint32_t wexp = 0;
    while ((1u << wexp) < w) ++wexp;
    REQUIRE(s.depth() == (w == 1 ? 0 : 2 * wexp));
    const StateVector psi = random_state(n, 100 + rep);
    REQUIRE(state_diff(run_on(s, psi), exp_word_reference(t, angle, psi)) <
            1e-12);
  }
}

TEST_CASE("fused pair gadget keeps single-gadget depth") {
  const double angle = 0.61;

  // Hopping-shaped pair: same support, X<->Y swap at two qubits.
  const PauliTerm a4 = word("-0.5 X0 X1 Y2 Y3");
  const PauliTerm b4 = word("+0.5 Y0 X1 X2 Y3");
  const GateSchedule fused4 = pauli_pair_gadget(a4, b4, angle);
  REQUIRE(fused4.depth() == 4);
  REQUIRE(fused4.depth() == pauli_gadget(a4, angle).depth());

  const PauliTerm a2 = word("+0.5 X0 X1");
  const PauliTerm b2 = word("-0.5 Y0 Y1");
  const GateSchedule fused2 = pauli_pair_gadget(a2, b2, angle);
  REQUIRE(fused2.depth() == 2);

  const PauliTerm a8 = word("+0.3 X0 Z1 Y2 X3 Z4 X5 Z6 X7");
  const PauliTerm b8 = word("-0.4 Y0 Z1 Y2 X3 Z4 X5 Z6 Y7");
  const GateSchedule fused8 = pauli_pair_gadget(a8, b8, angle);
  REQUIRE(fused8.depth() == 6);
  REQUIRE(fused8.depth() == pauli_gadget(a8, angle).depth());

  // The two words commute, so the exponential splits exactly.
  struct PairCase {
    PauliTerm a, b;
    uint32_t n;
  };
  for (const auto& pc : {PairCase{a4, b4, 4}, PairCase{a2, b2, 2},
                         PairCase{a8, b8, 8}}) {
    REQUIRE(pauli_commute(pc.a, pc.b));
    const GateSchedule s = pauli_pair_gadget(pc.a, pc.b, angle);
    for (uint64_t seed : {5u, 6u}) {
      const StateVector psi = random_state(pc.n, seed);
      const StateVector got = run_on(s, psi);
      const StateVector want =
          exp_word_reference(pc.b, angle, exp_word_reference(pc.a, angle, psi));
      REQUIRE(state_diff(got, want) < 1e-12);
    }
  }

  // Shape violations are rejected.
  REQUIRE_THROWS_AS(pauli_pair_gadget(word("+1 X0 X1"), word("+1 Y0 X1"), 0.1),
                    std::invalid_argument);  // one swap only
  REQUIRE_THROWS_AS(pauli_pair_gadget(word("+1 X0 X1"), word("+1 Z0 Z1"), 0.1),
                    std::invalid_argument);  // Z at a swap position
  REQUIRE_THROWS_AS(pauli_pair_gadget(word("+1 X0 X1"), word("+1 Y0 Y2"), 0.1),
                    std::invalid_argument);  // support mismatch
}

TEST_CASE("cz fanout equals the direct product of controlled-Z gates") {
  // Basis-state oracle: CZ products only flip signs, with parity
  // control_bit * |targets on set bits|.
  auto check_fanout = [](uint32_t control, const std::vector<uint32_t>& targets,
                         uint32_t n_real) {
    const GateSchedule s = cz_fanout(control, targets);
    const uint32_t n = std::max(s.n_qubits, n_real);
    for (uint64_t bits = 0; bits < (1ULL << n_real); ++bits) {
      StateVector psi = StateVector::zero_state(n);
      psi.amp[0] = 0.0;
      psi.amp[bits] = 1.0;
      const StateVector got = run_on(s, psi);
      int sign = 1;
      if ((bits >> control) & 1ULL) {
        for (const uint32_t t : targets) {
          if ((bits >> t) & 1ULL) sign = -sign;
        }
      }
      for (uint64_t i = 0; i < got.dim(); ++i) {
        const std::complex<double> want =
            (i == bits) ? std::complex<double>(sign, 0.0) : 0.0;
        REQUIRE(std::abs(got.amp[i] - want) < 1e-12);
      }
    }
  };

  const GateSchedule one = cz_fanout(0, {1});
  REQUIRE(one.depth() == 1);
  REQUIRE(one.ancilla_count == 0);
  check_fanout(0, {1}, 2);

  // 6 targets over 7 register qubits, scratch past them.
  const std::vector<uint32_t> t6 = {0, 1, 2, 4, 5, 6};
  const GateSchedule s6 = cz_fanout(3, t6);
  REQUIRE(s6.ancilla_count == 1);
  REQUIRE(s6.depth() <= 5);
  check_fanout(3, t6, 7);

  const std::vector<uint32_t> t8 = {1, 2, 3, 4, 5, 6, 7, 8};
  const GateSchedule s8 = cz_fanout(0, t8);
  REQUIRE(s8.depth() <= 7);
  const StateVector psi = random_state(9, 21);
  const StateVector got = run_on(s8, psi);
  StateVector want = StateVector::zero_state(got.n_qubits);
  for (uint64_t i = 0; i < psi.dim(); ++i) {
    int sign = 1;
    if (i & 1ULL) {
      for (const uint32_t t : t8) {
        if ((i >> t) & 1ULL) sign = -sign;
      }
    }
    want.amp[i] = double(sign) * psi.amp[i];
  }
  want.amp[0] = double(1) * psi.amp[0];
  REQUIRE(state_diff(got, want) < 1e-12);

  REQUIRE(cz_fanout(2, {}).gate_count() == 0);
  REQUIRE_THROWS_AS(cz_fanout(0, {1, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(cz_fanout(0, {0, 1}), std::invalid_argument);
}

TEST_CASE("ordered prep blocks stay parallel with logarithmic depth") {
  const ModeLayout small{4, 1};
  const OrderedPrepSchedule p = ordered_prep_schedule(small, 1);
  REQUIRE(p.blocks.size() == 2);
  REQUIRE(p.measure_ancillas == 2);
  REQUIRE(p.scratch_ancillas == 0);
  REQUIRE(p.schedule.ancilla_count == 2);
  REQUIRE_FALSE(p.padded);
  REQUIRE(p.schedule.depth() == 6);
  REQUIRE(p.schedule.n_qubits == small.total_qubits() + 2);

  // Depth is independent of the site count once both closure parities
  // appear, and bounded by a small multiple of log2 of the block width.
  for (uint32_t level : {1u, 2u}) {
    const ModeLayout a{4, 2}, b{8, 2}, c{32, 2};
    const uint32_t da = ordered_prep_schedule(a, level).schedule.depth();
    const uint32_t db = ordered_prep_schedule(b, level).schedule.depth();
    const uint32_t dc = ordered_prep_schedule(c, level).schedule.depth();
    REQUIRE(da == db);
    REQUIRE(db == dc);
  }
  for (uint32_t level = 1; level <= 4; ++level) {
    const ModeLayout wide{4, 4};
    const OrderedPrepSchedule w = ordered_prep_schedule(wide, level);
    uint32_t lg = 0;
    while ((1u << lg) < 2u * 4u) ++lg;
    REQUIRE(w.schedule.depth() <= 6 * lg);
    REQUIRE(w.tilde_weight_formula == std::min(level, 4 - level));
    REQUIRE(w.tilde_weight >= 1);
    REQUIRE(w.tilde_weight <= 2 * (4 + 1));
    INFO("level " << level << ": realized tilde weight " << w.tilde_weight
                  << ", closed-form count " << w.tilde_weight_formula);
  }

  const ModeLayout odd{5, 1};
  const OrderedPrepSchedule po = ordered_prep_schedule(odd, 1);
  REQUIRE(po.padded);
  REQUIRE(po.blocks.size() == 2);

  REQUIRE_THROWS_AS(ordered_prep_schedule(small, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(ordered_prep_schedule(small, 2), std::invalid_argument);
}

TEST_CASE("ordered prep run matches the targeted oracle preparation") {
  struct Setup {
    uint32_t n, nu, level;
    int seeds;
  };
  const std::vector<Setup> setups = {
      {4, 1, 1, 12}, {4, 2, 2, 10}, {4, 2, 1, 6}, {6, 1, 1, 8}, {5, 2, 1, 6}};
  for (const auto& su : setups) {
    const ModeLayout layout{su.n, su.nu};
    const OrderedPrepSchedule prep = ordered_prep_schedule(layout, su.level);
    REQUIRE(prep.scratch_ancillas == 0);  // the embedding below relies on it
    const StabilizerPlan plan = pair_plan(su.n, su.level);
    REQUIRE(plan.edges.size() == prep.blocks.size());

    std::set<std::vector<int>> seen;
    for (int seed = 0; seed < su.seeds; ++seed) {
      const ScheduleRun run = simulate_schedule(
          prep.schedule, StateVector::zero_state(layout.total_qubits()),
          1000 + seed);
      REQUIRE(run.outcomes.size() == prep.blocks.size());
      const std::vector<int> signs = prep_signs_from_outcomes(prep, run.outcomes);
      seen.insert(signs);

      const PrepResult want = prepare_aux_oracle(layout, plan, signs);
      REQUIRE(want.signs == signs);

      // The measured ancillas stay projected onto the outcomes, so the
      // oracle state embeds at that ancilla configuration.
      uint64_t anc_bits = 0;
      for (size_t k = 0; k < prep.blocks.size(); ++k) {
        if (run.outcomes[k] == 1) anc_bits |= 1ULL << prep.blocks[k].anc;
      }
      StateVector ref = StateVector::zero_state(run.state.n_qubits);
      ref.amp[0] = 0.0;
      for (uint64_t i = 0; i < want.state.dim(); ++i) {
        ref.amp[i | anc_bits] = want.state.amp[i];
      }
      REQUIRE(fidelity(run.state, ref) >= 1.0 - 1e-10);
    }
    // The outcomes are Born draws, so several sectors should show up.
    if (su.seeds >= 8) REQUIRE(seen.size() >= 2);
  }
}

TEST_CASE("trotter step schedule matches the operator-level evolution") {
  const double tau = 0.37;

  // Two-site hopping: one fused pair on four qubits.
  {
    const FermionModel m = hopping_model(make_graph(2, {{1, 2}}), 1.0);
    const EncodedModel em = encode_model(m);
    const std::vector<int> signs(em.plan.edges.size(), +1);
    const GateSchedule step = trotter_step_schedule(em, tau, signs);
    REQUIRE(step.depth() == 4);
    const StateVector psi = random_state(em.layout.total_qubits(), 31);
    const StateVector got = run_on(step, psi);
    const StateVector want = trotter_evolve(em, signs, tau, 1, psi);
    REQUIRE(state_diff(got, want) < 1e-10);
  }

  // Hubbard interactions add density terms that share support with their
  // edge's hopping term, so the color serializes them after the fused
  // pair. Checked against the exact per-term evolution, including a
  // nontrivial stabilizer sign sector and several steps.
  {
    const FermionModel m =
        fermi_hubbard_model(make_graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}),
                            1.0, 0.7);
    const EncodedModel em = encode_model(m);
    const PrepResult prep = prepare_aux_measured(em.layout, em.plan, 5);
    const GateSchedule step = trotter_step_schedule(em, tau, prep.signs);
    StateVector got = random_state(em.layout.total_qubits(), 32);
    const StateVector psi0 = got;
    for (int rep = 0; rep < 3; ++rep) got = run_on(step, got);
    const StateVector want = trotter_evolve(em, prep.signs, tau, 3, psi0);
    REQUIRE(state_diff(got, want) < 1e-9);
  }

  // A Majorana quartic encodes to a single word.
  {
    const FermionModel m = parse_model(
        "model sparse_syk\nmodes 3\nsyk 1 2 5 6 0.8\n");
    const EncodedModel em = encode_model(m);
    const std::vector<int> signs(em.plan.edges.size(), +1);
    const GateSchedule step = trotter_step_schedule(em, tau, signs);
    const StateVector psi = random_state(em.layout.total_qubits(), 33);
    const StateVector got = run_on(step, psi);
    const StateVector want = trotter_evolve(em, signs, tau, 1, psi);
    REQUIRE(state_diff(got, want) < 1e-10);
  }

  // Empty Hamiltonian, empty schedule.
  {
    FermionModel m;
    m.kind = ModelKind::Hopping;
    m.n_sites = 2;
    const EncodedModel em = encode_model(m);
    const GateSchedule step = trotter_step_schedule(em, tau);
    REQUIRE(step.gate_count() == 0);
    REQUIRE(step.depth() == 0);
  }

  // Words that cannot be split into commuting exponentials are refused.
  {
    FermionModel m;
    m.kind = ModelKind::Hopping;
    m.n_sites = 1;
    EncodedModel em = encode_model(m);
    EncodedTerm t;
    PauliSum bad;
    bad.add(PauliTerm::single(0, Pauli::X, 0.5));
    bad.add(PauliTerm::single(0, Pauli::Z, 0.5));
    t.op = bad;
    t.layer = 0;
    t.label = "clash";
    em.terms.push_back(t);
    em.layers.assign(1, {0});
    REQUIRE_THROWS_AS(trotter_step_schedule(em, tau), std::runtime_error);
  }
}

TEST_CASE("per-step depth is constant across sizes at fixed degree") {
  // Pinned seeds all realize a 4-color edge coloring, so the register
  // count and per-color gadget widths agree across sizes.
  struct Pick {
    uint32_t n;
    uint64_t seed;
  };
  const std::vector<Pick> picks = {{8, 1}, {16, 2}, {32, 1}, {64, 1}};
  std::vector<uint32_t> depths;
  for (const auto& pk : picks) {
    const FermionModel m =
        hopping_model(random_regular_graph(pk.n, 3, pk.seed), 1.0);
    const EncodedModel em = encode_model(m);
    REQUIRE(em.plan.coloring.n_colors == 4);
    depths.push_back(trotter_step_schedule(em, 0.2).depth());
  }
  for (size_t i = 1; i < depths.size(); ++i) REQUIRE(depths[i] == depths[0]);
}

TEST_CASE("depth report aggregates the resource table") {
  const FermionModel m = fermi_hubbard_model(
      make_graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}), 1.0, 0.5);
  const EncodedModel em = encode_model(m);
  REQUIRE(em.layout.n_aux == 1);
  const DepthReport r = full_depth_report(em);

  REQUIRE(r.rows.size() == 6);
  REQUIRE(r.per_step_depth == 12);           // two colors, 4 + 2 each
  REQUIRE(r.rows[1].depth == 6.0);           // one register's prep blocks
  REQUIRE(r.rows[4].depth == 6.0);           // worst single color
  REQUIRE(r.prep_depth == 16.0);             // 2*6 + 2*1*log2(4)
  REQUIRE(r.ancilla_total == 14);            // (2*1+1)*4 + 4/2
  REQUIRE(r.padded_sites == 0);
  REQUIRE(r.total_depth(0) == r.prep_depth);
  REQUIRE(r.total_depth(5) == r.prep_depth + 5.0 * 12.0);

  const std::string csv = render_depth_csv(r);
  REQUIRE(csv ==
          "operation,depth,ancillas,kind\n"
          "attach auxiliary registers,0,4,formula\n"
          "pair stabilizer preparation (one register),6,2,measured\n"
          "mode permutation (measured),2,8,formula\n"
          "mode permutation (unitary),9,0,formula\n"
          "single color evolution layer,6,0,measured\n"
          "full evolution step,12,0,measured\n");

  const std::string table = render_depth_table(r);
  REQUIRE(table.find("operation") != std::string::npos);
  REQUIRE(table.find("full evolution step") != std::string::npos);
  REQUIRE(table.find("preparation depth: 16") != std::string::npos);
  REQUIRE(table.find("per-step depth: 12") != std::string::npos);
  REQUIRE(table.find("total ancillas: 14") != std::string::npos);

  // Formula constants scale only the permutation rows.
  CostModel cm;
  cm.perm_meas_const = 2.5;
  const DepthReport rs = full_depth_report(em, cm);
  REQUIRE(rs.rows[2].depth == 5.0);
  REQUIRE(rs.prep_depth == 2.0 * 6.0 + 2.0 * 2.5 * 2.0);
}

TEST_CASE("preparation depth is affine in the register size logarithm") {
  // At fixed degree and coloring size the measured prep term is constant,
  // so the report total moves only through the log2(N) permutation term.
  struct Pick {
    uint32_t n;
    uint64_t seed;
  };
  const std::vector<Pick> picks = {{8, 1}, {16, 2}, {32, 1}, {64, 1}};
  std::vector<double> fixed_part;
  for (const auto& pk : picks) {
    const FermionModel m =
        hopping_model(random_regular_graph(pk.n, 3, pk.seed), 1.0);
    const EncodedModel em = encode_model(m);
    REQUIRE(em.plan.coloring.n_colors == 4);
    const DepthReport r = full_depth_report(em);
    const double nu = em.layout.n_aux;
    uint32_t lg = 0;
    while ((1u << lg) < pk.n) ++lg;
    fixed_part.push_back(r.prep_depth - 2.0 * nu * double(lg));
  }
  for (size_t i = 1; i < fixed_part.size(); ++i) {
    REQUIRE(fixed_part[i] == Catch::Approx(fixed_part[0]));
  }
}

TEST_CASE("permutation cost follows the closed forms") {
  const DepthCost wm = permutation_cost(1024, 4, PermutationMode::WithMeasurement);
  REQUIRE(wm.depth == 10.0);
  REQUIRE(wm.formula);
  const DepthCost anc = permutation_cost(8, 4, PermutationMode::WithMeasurement);
  REQUIRE(anc.ancillas == 24);
  const DepthCost wo = permutation_cost(8, 4, PermutationMode::WithoutMeasurement);
  REQUIRE(wo.ancillas == 0);
  REQUIRE(wo.depth == 25.0);  // ceil(log2(32))^2
  REQUIRE_THROWS_AS(permutation_cost(0, 1, PermutationMode::WithMeasurement),
                    std::invalid_argument);
}
